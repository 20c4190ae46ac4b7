"""Bit packing helpers shared by the cipher and layout modules.

Conventions used throughout the package:

* a "bit list" is a list of 0/1 ints in generation (or loading) order;
* "msb" byte packing puts the first bit of a list into the most
  significant bit of the first byte (the default keystream convention);
* "lsb" packing puts the first bit into the least significant bit
  (used by the published Grain v1 vectors).
"""

from __future__ import annotations


def bits_to_bytes(bits, bit_order: str = "msb") -> bytes:
    """Pack a bit list into bytes. Length must be a multiple of 8."""
    if len(bits) % 8:
        raise ValueError("bit count must be a multiple of 8")
    out = bytearray(len(bits) // 8)
    if bit_order == "msb":
        for i, b in enumerate(bits):
            if b:
                out[i >> 3] |= 0x80 >> (i & 7)
    elif bit_order == "lsb":
        for i, b in enumerate(bits):
            if b:
                out[i >> 3] |= 1 << (i & 7)
    else:
        raise ValueError(f"unknown bit order {bit_order!r}")
    return bytes(out)


def bytes_to_bits(data: bytes, bit_order: str = "msb") -> list[int]:
    """Unpack bytes into a bit list (inverse of bits_to_bytes)."""
    if bit_order == "msb":
        return [(byte >> (7 - j)) & 1 for byte in data for j in range(8)]
    if bit_order == "lsb":
        return [(byte >> j) & 1 for byte in data for j in range(8)]
    raise ValueError(f"unknown bit order {bit_order!r}")


def int_to_bits(value: int, n: int) -> list[int]:
    """Split an int into n bits, index 0 = bit 0 (LSB-first)."""
    return [(value >> i) & 1 for i in range(n)]


def bits_to_int(bits) -> int:
    """Inverse of int_to_bits."""
    v = 0
    for i, b in enumerate(bits):
        if b:
            v |= 1 << i
    return v


def parse_hex(text: str, nbytes: int | None = None, what: str = "value") -> bytes:
    """Parse lowercase/uppercase hex with optional exact length check."""
    text = text.strip().removeprefix("0x")
    try:
        data = bytes.fromhex(text)
    except ValueError as exc:
        raise ValueError(f"invalid hex for {what}: {text!r}") from exc
    if nbytes is not None and len(data) != nbytes:
        raise ValueError(f"{what} must be {nbytes} bytes, got {len(data)}")
    return data
