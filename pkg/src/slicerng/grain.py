"""Grain v1 keystream generator, bit-serial and bitsliced.

An 80-bit LFSR and an 80-bit NFSR shift together on every clock; the
output bit mixes seven NFSR taps with a five-input filter over four LFSR
taps and one NFSR tap. Initialisation loads the 80-bit key into the NFSR
and the 64-bit IV into the LFSR (remaining 16 positions set to 1), then
runs 160 clocks feeding the output bit back into both registers.

Because both registers clock unconditionally there is no select-mask
machinery in the sliced engine: one clock is a fixed sequence of word
XOR/AND operations plus a register re-reference, identical for all lane
data.

Conventions: the published test vectors load key/IV bits and pack
keystream bytes LSB-first within each byte (the designers' reference
convention); the library's byte output defaults to MSB-first like the
other generators, with bit_order="lsb" available.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .bitops import bits_to_bytes, bytes_to_bits
from .bitslab import LANE_WIDTHS, SlicedBlock

KEY_BYTES = 10
IV_BYTES = 8
STATE_BITS = 80
INIT_CLOCKS = 160

#: s_{i+80} = s_{i+62} + s_{i+51} + s_{i+38} + s_{i+23} + s_{i+13} + s_i
LFSR_TAPS = (62, 51, 38, 23, 13, 0)

#: linear NFSR taps of g (the s_i term is added separately)
NFSR_LINEAR_TAPS = (62, 60, 52, 45, 37, 33, 28, 21, 14, 9, 0)

#: product terms of g
NFSR_PRODUCT_TAPS = (
    (63, 60),
    (37, 33),
    (15, 9),
    (60, 52, 45),
    (33, 28, 21),
    (63, 45, 28, 9),
    (60, 52, 37, 33),
    (63, 60, 21, 15),
    (63, 60, 52, 45, 37),
    (33, 28, 21, 15, 9),
    (52, 45, 37, 33, 28, 21),
)

#: filter h inputs: x0=s[3], x1=s[25], x2=s[46], x3=s[64], x4=b[63]
H_LFSR_TAPS = (3, 25, 46, 64)
H_NFSR_TAP = 63

#: NFSR positions summed into the output bit
OUTPUT_TAPS = (1, 2, 4, 10, 31, 43, 56)


def grain_constants() -> dict:
    """Feedback, filter and output tap definitions."""
    return {
        "LFSR_TAPS": LFSR_TAPS,
        "NFSR_LINEAR_TAPS": NFSR_LINEAR_TAPS,
        "NFSR_PRODUCT_TAPS": NFSR_PRODUCT_TAPS,
        "H_LFSR_TAPS": H_LFSR_TAPS,
        "H_NFSR_TAP": H_NFSR_TAP,
        "OUTPUT_TAPS": OUTPUT_TAPS,
    }


class GrainKeyIvError(ValueError):
    """Invalid key or IV material."""


@dataclass(frozen=True)
class GrainKeyIv:
    """An 80-bit key and a 64-bit IV."""

    key: bytes
    iv: bytes

    def __post_init__(self):
        if len(self.key) != KEY_BYTES:
            raise GrainKeyIvError(f"key must be {KEY_BYTES} bytes")
        if len(self.iv) != IV_BYTES:
            raise GrainKeyIvError(f"IV must be {IV_BYTES} bytes")

    def key_bits(self) -> list[int]:
        return bytes_to_bits(self.key, "lsb")

    def iv_bits(self) -> list[int]:
        return bytes_to_bits(self.iv, "lsb")


def _h(x0, x1, x2, x3, x4):
    """Filter function; works on single bits and on words alike."""
    return (
        x1 ^ x4 ^ (x0 & x3) ^ (x2 & x3) ^ (x3 & x4)
        ^ (x0 & x1 & x2) ^ (x0 & x2 & x3) ^ (x0 & x2 & x4)
        ^ (x1 & x2 & x4) ^ (x2 & x3 & x4)
    )


def _g(b):
    """NFSR feedback (without the s_i term)."""
    v = b[NFSR_LINEAR_TAPS[0]]
    for t in NFSR_LINEAR_TAPS[1:]:
        v = v ^ b[t]
    for term in NFSR_PRODUCT_TAPS:
        prod = b[term[0]]
        for t in term[1:]:
            prod = prod & b[t]
        v = v ^ prod
    return v


def _f(s):
    v = s[LFSR_TAPS[0]]
    for t in LFSR_TAPS[1:]:
        v = v ^ s[t]
    return v


def _output(b, s):
    h = _h(s[H_LFSR_TAPS[0]], s[H_LFSR_TAPS[1]], s[H_LFSR_TAPS[2]],
           s[H_LFSR_TAPS[3]], b[H_NFSR_TAP])
    z = h
    for t in OUTPUT_TAPS:
        z = z ^ b[t]
    return z


class GrainScalar:
    """Bit-serial reference engine over two lists of 0/1 state bits."""

    def __init__(self, nfsr, lfsr):
        self.b = list(nfsr)
        self.s = list(lfsr)
        if len(self.b) != STATE_BITS or len(self.s) != STATE_BITS:
            raise ValueError("NFSR and LFSR must be 80 bits each")
        self.init_clocks = 0

    @classmethod
    def from_key_iv(cls, material: GrainKeyIv) -> "GrainScalar":
        b = material.key_bits()
        s = material.iv_bits() + [1] * (STATE_BITS - 64)
        st = cls(b, s)
        for _ in range(INIT_CLOCKS):
            z = _output(st.b, st.s)
            st._shift(_f(st.s) ^ z, _g(st.b) ^ st.s[0] ^ z)
            st.init_clocks += 1
        return st

    def _shift(self, lfsr_in: int, nfsr_in: int) -> None:
        self.s = self.s[1:] + [lfsr_in]
        self.b = self.b[1:] + [nfsr_in]

    def keystream_bits(self, nbits: int) -> list[int]:
        out = []
        for _ in range(nbits):
            z = _output(self.b, self.s)
            out.append(z)
            self._shift(_f(self.s), _g(self.b) ^ self.s[0])
        return out

    def keystream_bytes(self, nbytes: int, bit_order: str = "msb") -> bytes:
        return bits_to_bytes(self.keystream_bits(8 * nbytes), bit_order)


_M80 = (1 << STATE_BITS) - 1


class GrainScalarPacked:
    """Independent scalar engine with each register packed into one int.

    Row-major packed model: registers in machine words, every tap reached
    by shift and mask. Cross-checks GrainScalar and defines the naive
    benchmark baseline.
    """

    def __init__(self, nfsr: int, lfsr: int):
        self.b = nfsr & _M80
        self.s = lfsr & _M80

    @classmethod
    def from_key_iv(cls, material: GrainKeyIv) -> "GrainScalarPacked":
        b = sum(bit << i for i, bit in enumerate(material.key_bits()))
        s = sum(bit << i for i, bit in enumerate(material.iv_bits()))
        s |= (_M80 >> 64) << 64  # top 16 positions set to 1
        st = cls(b, s)
        for _ in range(INIT_CLOCKS):
            z = st._z()
            st._clock(feedback=z)
        return st

    def _z(self) -> int:
        b, s = self.b, self.s
        x0 = (s >> 3) & 1
        x1 = (s >> 25) & 1
        x2 = (s >> 46) & 1
        x3 = (s >> 64) & 1
        x4 = (b >> 63) & 1
        z = _h(x0, x1, x2, x3, x4)
        for t in OUTPUT_TAPS:
            z ^= (b >> t) & 1
        return z

    def _clock(self, feedback: int = 0) -> None:
        b, s = self.b, self.s
        fl = feedback
        for t in LFSR_TAPS:
            fl ^= (s >> t) & 1
        fn = feedback ^ (s & 1)
        for t in NFSR_LINEAR_TAPS:
            fn ^= (b >> t) & 1
        for term in NFSR_PRODUCT_TAPS:
            prod = 1
            for t in term:
                prod &= b >> t
            fn ^= prod & 1
        self.s = (s >> 1) | (fl << 79)
        self.b = (b >> 1) | (fn << 79)

    def keystream_bits(self, nbits: int) -> list[int]:
        out = []
        for _ in range(nbits):
            out.append(self._z())
            self._clock()
        return out

    def keystream_bytes(self, nbytes: int, bit_order: str = "msb") -> bytes:
        return bits_to_bytes(self.keystream_bits(8 * nbytes), bit_order)


class GrainSliced:
    """W parallel Grain v1 instances in column-major layout.

    160 word-wide clocks initialise all lanes at once; the keystream loop
    is mask-free (no control multiplexing exists in this cipher).
    """

    def __init__(self, nfsr_regs, lfsr_regs, width: int):
        if width not in LANE_WIDTHS:
            raise ValueError(f"lane width must be one of {LANE_WIDTHS}")
        self.width = width
        self.mask = (1 << width) - 1
        self.b = list(nfsr_regs)
        self.s = list(lfsr_regs)
        if len(self.b) != STATE_BITS or len(self.s) != STATE_BITS:
            raise ValueError("sliced state needs 80 NFSR and 80 LFSR words")

    @classmethod
    def from_key_ivs(
        cls, materials: Sequence[GrainKeyIv], width: int = 64
    ) -> "GrainSliced":
        if not materials:
            raise GrainKeyIvError("at least one lane is required")
        if len(materials) > width:
            raise GrainKeyIvError(f"{len(materials)} lanes exceed width {width}")
        b = [0] * STATE_BITS
        s = [0] * STATE_BITS
        for j, m in enumerate(materials):
            try:
                kb = m.key_bits()
                ib = m.iv_bits()
            except GrainKeyIvError as exc:
                raise GrainKeyIvError(f"lane {j}: {exc}") from exc
            for i in range(STATE_BITS):
                b[i] |= kb[i] << j
            for i in range(64):
                s[i] |= ib[i] << j
        lane_full = (1 << len(materials)) - 1
        for i in range(64, STATE_BITS):
            s[i] = lane_full
        st = cls(b, s, width)
        for _ in range(INIT_CLOCKS):
            z = _output(st.b, st.s)
            st._shift(_f(st.s) ^ z, _g(st.b) ^ st.s[0] ^ z)
        return st

    def _shift(self, lfsr_in: int, nfsr_in: int) -> None:
        self.s = self.s[1:] + [lfsr_in]
        self.b = self.b[1:] + [nfsr_in]

    def extract_lane(self, j: int) -> GrainScalar:
        b = [(w >> j) & 1 for w in self.b]
        s = [(w >> j) & 1 for w in self.s]
        return GrainScalar(b, s)

    def nfsr_block(self) -> SlicedBlock:
        return SlicedBlock(self.width, tuple(self.b))

    def lfsr_block(self) -> SlicedBlock:
        return SlicedBlock(self.width, tuple(self.s))

    def keystream_words(self, nclocks: int) -> list[int]:
        """One output word per clock: bit j = lane j's keystream bit."""
        out = []
        for _ in range(nclocks):
            z = _output(self.b, self.s)
            out.append(z)
            self._shift(_f(self.s), _g(self.b) ^ self.s[0])
        return out

    def keystream_lane_bits(self, nbits: int) -> list[list[int]]:
        words = self.keystream_words(nbits)
        return [[(w >> j) & 1 for w in words] for j in range(self.width)]


def scalar_keystream(material: GrainKeyIv, nbits: int) -> list[int]:
    """Convenience: initialise and emit nbits from the reference engine."""
    return GrainScalar.from_key_iv(material).keystream_bits(nbits)
