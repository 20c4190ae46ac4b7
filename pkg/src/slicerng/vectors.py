"""Embedded test vectors and the plain-text vector file format.

Records are lines of the form

    key=<hex> iv=<hex> ks=<hex-prefix>

where iv may be empty (``iv=``). For the block-cipher records the iv
field carries the plaintext block and ks the ciphertext. Grain records
follow that cipher's published LSB-first bit convention; all other
records are MSB-first.

The MICKEY and Grain keystreams below reproduce the ciphers' published
test vectors; the AES block records are the standard specification
examples. verify_vectors() checks every record against the scalar engine
and against every lane of the sliced engine at both supported widths.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import aes_ctr, grain, mickey
from .bitops import bits_to_bytes

LANE_CHECK_WIDTHS = (32, 64)


@dataclass(frozen=True)
class VectorRecord:
    algo: str
    key: bytes
    iv: bytes  # nonce/plaintext for aes block records
    ks: bytes
    bit_order: str = "msb"
    kind: str = "keystream"

    def format_line(self) -> str:
        return f"key={self.key.hex()} iv={self.iv.hex()} ks={self.ks.hex()}"


MICKEY_VECTORS = (
    VectorRecord(
        "mickey",
        bytes.fromhex("123456789abcdef01234"),
        bytes.fromhex("21436587"),
        bytes.fromhex("9821e10c5ed28d32bbc3d1fb15e93a15"),
    ),
    VectorRecord(
        "mickey",
        bytes.fromhex("123456789abcdef01234"),
        b"",
        bytes.fromhex("92f1b8779b47da74075e7a8ccc23c80c"),
    ),
    VectorRecord(
        "mickey",
        bytes.fromhex("123456789abcdef01234"),
        bytes.fromhex("21436587a9cbed0f2143"),
        bytes.fromhex("804c60856af63516c8f21827bd81f6be"),
    ),
)

GRAIN_VECTORS = (
    VectorRecord(
        "grain",
        bytes.fromhex("00000000000000000000"),
        bytes.fromhex("0000000000000000"),
        bytes.fromhex("dee931cf1662a72f77d02b6b6188a8f6"),
        bit_order="lsb",
    ),
    VectorRecord(
        "grain",
        bytes.fromhex("0123456789abcdef1234"),
        bytes.fromhex("0123456789abcdef"),
        bytes.fromhex("7f362bd3f7abae2036642fe0bd2aafad"),
        bit_order="lsb",
    ),
)

AES_BLOCK_VECTORS = (
    VectorRecord(
        "aes-ctr",
        bytes.fromhex("000102030405060708090a0b0c0d0e0f"),
        bytes.fromhex("00112233445566778899aabbccddeeff"),
        bytes.fromhex("69c4e0d86a7b0430d8cdb78070b4c55a"),
        kind="block",
    ),
    VectorRecord(
        "aes-ctr",
        bytes.fromhex("2b7e151628aed2a6abf7158809cf4f3c"),
        bytes.fromhex("3243f6a8885a308d313198a2e0370734"),
        bytes.fromhex("3925841d02dc09fbdc118597196a0b32"),
        kind="block",
    ),
)

ALL_VECTORS = {
    "mickey": MICKEY_VECTORS,
    "grain": GRAIN_VECTORS,
    "aes-ctr": AES_BLOCK_VECTORS,
}


class VectorMismatch(AssertionError):
    """An engine failed to reproduce an embedded or file vector."""


def parse_vector_file(text: str, algo: str, bit_order: str = "msb"):
    """Parse `key=<hex> iv=<hex> ks=<hex>` lines; '#' starts a comment."""
    records = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = dict(part.split("=", 1) for part in line.split())
        try:
            records.append(
                VectorRecord(
                    algo,
                    bytes.fromhex(fields["key"]),
                    bytes.fromhex(fields.get("iv", "")),
                    bytes.fromhex(fields["ks"]),
                    bit_order=bit_order,
                )
            )
        except (KeyError, ValueError) as exc:
            raise ValueError(f"bad vector record on line {lineno}: {exc}") from exc
    return records


def _scalar_keystream(rec: VectorRecord) -> bytes:
    if rec.algo == "mickey":
        st = mickey.MickeyScalar.from_key_iv(mickey.MickeyKeyIv(rec.key, rec.iv))
        return st.keystream_bytes(len(rec.ks), rec.bit_order)
    if rec.algo == "grain":
        st = grain.GrainScalar.from_key_iv(grain.GrainKeyIv(rec.key, rec.iv))
        return st.keystream_bytes(len(rec.ks), rec.bit_order)
    raise ValueError(f"no scalar keystream engine for {rec.algo!r}")


def _sliced_lane_keystreams(rec: VectorRecord, width: int) -> list[bytes]:
    nbits = 8 * len(rec.ks)
    if rec.algo == "mickey":
        mats = [mickey.MickeyKeyIv(rec.key, rec.iv)] * width
        eng = mickey.MickeySliced.from_key_ivs(mats, width)
    elif rec.algo == "grain":
        mats = [grain.GrainKeyIv(rec.key, rec.iv)] * width
        eng = grain.GrainSliced.from_key_ivs(mats, width)
    else:
        raise ValueError(f"no sliced keystream engine for {rec.algo!r}")
    lanes = eng.keystream_lane_bits(nbits)
    return [bits_to_bytes(bits, rec.bit_order) for bits in lanes]


def verify_vectors(algo: str | None = None, records=None, lanes: bool = True):
    """Check vectors against the engines; returns (checked, failures).

    failures is a list of human-readable mismatch descriptions; an empty
    list means full conformance.
    """
    if records is None:
        algos = [algo] if algo else list(ALL_VECTORS)
        records = [r for a in algos for r in ALL_VECTORS[a]]
    failures = []
    checked = 0
    for rec in records:
        checked += 1
        if rec.kind == "block":
            for engine in (aes_ctr.AesScalarTable, aes_ctr.AesScalarBitwise):
                got = engine(rec.key).encrypt_block(rec.iv)
                if got != rec.ks:
                    failures.append(
                        f"{rec.algo} {engine.__name__} block: {got.hex()} != {rec.ks.hex()}"
                    )
            if lanes:
                for width in LANE_CHECK_WIDTHS:
                    eng = aes_ctr.AesSliced(rec.key, width)
                    outs = eng.encrypt_blocks([rec.iv] * width)
                    for j, got in enumerate(outs):
                        if got != rec.ks:
                            failures.append(
                                f"{rec.algo} sliced W={width} lane {j}: "
                                f"{got.hex()} != {rec.ks.hex()}"
                            )
                            break
            continue
        got = _scalar_keystream(rec)
        if got != rec.ks:
            failures.append(f"{rec.algo} scalar: {got.hex()} != {rec.ks.hex()}")
        if lanes:
            for width in LANE_CHECK_WIDTHS:
                for j, lane_ks in enumerate(_sliced_lane_keystreams(rec, width)):
                    if lane_ks != rec.ks:
                        failures.append(
                            f"{rec.algo} sliced W={width} lane {j}: "
                            f"{lane_ks.hex()} != {rec.ks.hex()}"
                        )
                        break
    return checked, failures
