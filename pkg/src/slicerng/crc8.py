"""CRC-8 computed bit-serially and as W sliced message streams at once.

The scalar form clocks a single 8-bit register with shift and mask per
message bit. The sliced form keeps the checksum state as 8 words (word i
= state bit i of all lanes), so one clock advances every stream with a
handful of word XORs and a register re-reference instead of shifts.

Message bits are consumed MSB-first within each byte; register bit 7 is
the CRC's most significant bit. Batches of unequal message lengths are
rejected rather than padded.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bitslab import LANE_WIDTHS


@dataclass(frozen=True)
class CrcSpec:
    polynomial: int  # 8-bit tap mask, without the implicit x^8 term
    init: int = 0x00
    reflect: bool = False  # reflect input bytes and the final checksum
    final_xor: int = 0x00

    def __post_init__(self):
        if not 0 < self.polynomial <= 0xFF:
            raise ValueError("polynomial must be a nonzero 8-bit mask")
        if not 0 <= self.init <= 0xFF or not 0 <= self.final_xor <= 0xFF:
            raise ValueError("init and final_xor must be 8-bit values")


#: CRC-8/SMBus: poly 0x07, init 0, no reflection, no final xor.
SMBUS = CrcSpec(polynomial=0x07)


def _reflect8(v: int) -> int:
    return int(f"{v:08b}"[::-1], 2)


def crc8_scalar(spec: CrcSpec, message: bytes) -> int:
    """Bit-serial digest: one shift-and-mask clock per message bit."""
    crc = spec.init
    for byte in message:
        if spec.reflect:
            byte = _reflect8(byte)
        for j in range(7, -1, -1):
            bit = (byte >> j) & 1
            top = (crc >> 7) ^ bit
            crc = (crc << 1) & 0xFF
            if top:
                crc ^= spec.polynomial
    if spec.reflect:
        crc = _reflect8(crc)
    return crc ^ spec.final_xor


class UnequalLengthsError(ValueError):
    """Sliced CRC batches require equal-length messages."""


def crc8_sliced(spec: CrcSpec, messages: list[bytes], width: int = 64) -> list[int]:
    """Digest W equal-length messages in lockstep; lane j == scalar of j."""
    if width not in LANE_WIDTHS:
        raise ValueError(f"lane width must be one of {LANE_WIDTHS}")
    if not messages:
        return []
    if len(messages) > width:
        raise ValueError(f"{len(messages)} messages exceed {width} lanes")
    length = len(messages[0])
    if any(len(m) != length for m in messages):
        raise UnequalLengthsError("messages must all have the same length")

    lanes = len(messages)
    full = (1 << lanes) - 1
    # state[i] = CRC bit i across lanes
    state = [full if (spec.init >> i) & 1 else 0 for i in range(8)]
    poly_taps = [i for i in range(8) if (spec.polynomial >> i) & 1]

    for pos in range(length):
        # transpose this byte column: column[b] = bit b of every lane's byte
        column = [0] * 8
        for j, msg in enumerate(messages):
            byte = _reflect8(msg[pos]) if spec.reflect else msg[pos]
            for b in range(8):
                if (byte >> b) & 1:
                    column[b] |= 1 << j
        for j in range(7, -1, -1):  # MSB-first within the byte
            top = state[7] ^ column[j]
            # shift toward bit 7 by re-referencing registers, then inject
            state = [0] + state[:7]
            for t in poly_taps:
                state[t] ^= top
    out = []
    for j in range(lanes):
        crc = 0
        for i in range(8):
            if (state[i] >> j) & 1:
                crc |= 1 << i
        if spec.reflect:
            crc = _reflect8(crc)
        out.append(crc ^ spec.final_xor)
    return out
