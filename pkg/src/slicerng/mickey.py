"""MICKEY 2.0 keystream generator, bit-serial and bitsliced.

The generator holds two 100-bit registers, R (linear) and S (non-linear),
each clocked irregularly under control bits drawn from both. The sliced
engine keeps 200 words (Rregs[i]/Sregs[i] = bit i of W parallel
instances) and realises the irregular clocking without any per-lane
branch: both clock variants are folded into masked word XORs, so the
executed instruction sequence is independent of lane data.

Constant tables are transcribed from the cipher's reference
implementation (packed 32-bit words, bit i of word i//32) and are gated
by the embedded test vectors; they are never derived in code.

Conventions: key is 10 bytes, IV is 0..80 bits; bits load MSB-first per
byte. Keystream bit 0 becomes the most significant bit of the first
output byte. Each key admits at most 2**40 IVs of one length and 2**40
keystream bits per key/IV pair; the library documents but does not
enforce these budgets (the CLI warns on oversized requests).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .bitops import bits_to_bytes, bytes_to_bits
from .bitslab import LANE_WIDTHS, SlicedBlock

KEY_BYTES = 10
IV_MAX_BITS = 80
STATE_BITS = 100
PRECLOCKS = 100
IV_BUDGET_LOG2 = 40  # documented bound, not enforced

_R_MASK_WORDS = (0x1279327B, 0xB5546660, 0xDF87818F, 0x00000003)
_COMP0_WORDS = (0x6AA97A30, 0x7942A809, 0x057EBFEA, 0x00000006)
_COMP1_WORDS = (0xDD629E9A, 0xE3A21D63, 0x91C23DD7, 0x00000001)
_FB0_WORDS = (0x9FFA7FAF, 0xAF4A9381, 0x9CEC5802, 0x00000001)
_FB1_WORDS = (0x4C8CB877, 0x4911B063, 0x40FBC52B, 0x00000008)

# control and mixing tap positions
CTRL_R_S_TAP = 34
CTRL_R_R_TAP = 67
CTRL_S_S_TAP = 67
CTRL_S_R_TAP = 33
MIXING_S_TAP = 50


def _expand(words: tuple[int, ...]) -> tuple[int, ...]:
    return tuple((words[i // 32] >> (i % 32)) & 1 for i in range(STATE_BITS))


RTAPS_BITS = _expand(_R_MASK_WORDS)
RTAPS = tuple(i for i, b in enumerate(RTAPS_BITS) if b)
COMP0 = _expand(_COMP0_WORDS)
COMP1 = _expand(_COMP1_WORDS)
FB0 = _expand(_FB0_WORDS)
FB1 = _expand(_FB1_WORDS)


def mickey_constants() -> dict:
    """The cipher's constant tables (RTAPS set plus 100-bit sequences)."""
    return {
        "RTAPS": RTAPS,
        "COMP0": COMP0,
        "COMP1": COMP1,
        "FB0": FB0,
        "FB1": FB1,
    }


class MickeyKeyIvError(ValueError):
    """Invalid key or IV material."""


@dataclass(frozen=True)
class MickeyKeyIv:
    """An 80-bit key with a variable-length (0..80 bit) IV."""

    key: bytes
    iv: bytes | Sequence[int] = b""

    def __post_init__(self):
        if len(self.key) != KEY_BYTES:
            raise MickeyKeyIvError(f"key must be {KEY_BYTES} bytes")
        if len(self.iv_bits()) > IV_MAX_BITS:
            raise MickeyKeyIvError(f"IV must be at most {IV_MAX_BITS} bits")

    def key_bits(self) -> list[int]:
        return bytes_to_bits(self.key)

    def iv_bits(self) -> list[int]:
        if isinstance(self.iv, (bytes, bytearray)):
            return bytes_to_bits(bytes(self.iv))
        bits = list(self.iv)
        if any(b not in (0, 1) for b in bits):
            raise MickeyKeyIvError("IV bit sequence must contain only 0/1")
        return bits


class MickeyScalar:
    """Bit-serial reference engine over two lists of 0/1 state bits."""

    def __init__(self, r=None, s=None):
        self.r = list(r) if r is not None else [0] * STATE_BITS
        self.s = list(s) if s is not None else [0] * STATE_BITS
        if len(self.r) != STATE_BITS or len(self.s) != STATE_BITS:
            raise ValueError("R and S must be 100 bits each")

    def clock_kg(self, mixing: bool, input_bit: int) -> None:
        r, s = self.r, self.s
        control_r = s[CTRL_R_S_TAP] ^ r[CTRL_R_R_TAP]
        control_s = s[CTRL_S_S_TAP] ^ r[CTRL_S_R_TAP]
        input_r = (input_bit ^ s[MIXING_S_TAP]) if mixing else input_bit
        self.r = self._clock_r(r, input_r, control_r)
        self.s = self._clock_s(s, input_bit, control_s)

    @staticmethod
    def _clock_r(r, input_bit, control_bit):
        feedback = r[99] ^ input_bit
        new = [0] + r[:99]
        if feedback:
            for i in RTAPS:
                new[i] ^= 1
        if control_bit:
            new = [a ^ b for a, b in zip(new, r)]
        return new

    @staticmethod
    def _clock_s(s, input_bit, control_bit):
        feedback = s[99] ^ input_bit
        shat = [0] * STATE_BITS
        for i in range(1, 99):
            shat[i] = s[i - 1] ^ ((s[i] ^ COMP0[i]) & (s[i + 1] ^ COMP1[i]))
        shat[99] = s[98]
        fb = FB1 if control_bit else FB0
        if feedback:
            return [shat[i] ^ fb[i] for i in range(STATE_BITS)]
        return shat

    @classmethod
    def from_key_iv(cls, material: MickeyKeyIv) -> "MickeyScalar":
        """Load IV bits, then key bits, then preclock, all with mixing."""
        st = cls()
        for bit in material.iv_bits():
            st.clock_kg(True, bit)
        for bit in material.key_bits():
            st.clock_kg(True, bit)
        for _ in range(PRECLOCKS):
            st.clock_kg(True, 0)
        return st

    def keystream_bits(self, nbits: int) -> list[int]:
        out = []
        for _ in range(nbits):
            out.append(self.r[0] ^ self.s[0])
            self.clock_kg(False, 0)
        return out

    def keystream_bytes(self, nbytes: int, bit_order: str = "msb") -> bytes:
        return bits_to_bytes(self.keystream_bits(8 * nbytes), bit_order)


_M100 = (1 << STATE_BITS) - 1
_RTAPS_MASK = sum(1 << i for i in RTAPS)
_COMP0_MASK = sum(1 << i for i, b in enumerate(COMP0) if b)
_COMP1_MASK = sum(1 << i for i, b in enumerate(COMP1) if b)
_FB0_MASK = sum(1 << i for i, b in enumerate(FB0) if b)
_FB1_MASK = sum(1 << i for i, b in enumerate(FB1) if b)
_SHAT_RANGE = sum(1 << i for i in range(1, 99))  # nonlinear term positions


class MickeyScalarPacked:
    """Independent scalar engine with each register packed into one int.

    This is the conventional row-major model: the 100-bit registers live
    in machine words and every clock reaches individual bits by shift and
    mask. Written separately from MickeyScalar as a cross-checking route
    (and as the model for the benchmark's naive baseline).
    """

    def __init__(self, r: int = 0, s: int = 0):
        self.r = r & _M100
        self.s = s & _M100

    def clock_kg(self, mixing: bool, input_bit: int) -> None:
        r, s = self.r, self.s
        control_r = ((s >> CTRL_R_S_TAP) ^ (r >> CTRL_R_R_TAP)) & 1
        control_s = ((s >> CTRL_S_S_TAP) ^ (r >> CTRL_S_R_TAP)) & 1
        input_r = input_bit ^ ((s >> MIXING_S_TAP) & 1) if mixing else input_bit

        fb_r = ((r >> 99) & 1) ^ input_r
        new_r = (r << 1) & _M100
        if fb_r:
            new_r ^= _RTAPS_MASK
        if control_r:
            new_r ^= r

        fb_s = ((s >> 99) & 1) ^ input_bit
        # (s << 1) places s[i-1] at i and already yields shat[0]=0, shat[99]=s[98]
        shat = ((s << 1) ^ (((s ^ _COMP0_MASK) & ((s >> 1) ^ _COMP1_MASK)) & _SHAT_RANGE)) & _M100
        new_s = shat
        if fb_s:
            new_s ^= _FB1_MASK if control_s else _FB0_MASK

        self.r, self.s = new_r, new_s

    @classmethod
    def from_key_iv(cls, material: MickeyKeyIv) -> "MickeyScalarPacked":
        st = cls()
        for bit in material.iv_bits():
            st.clock_kg(True, bit)
        for bit in material.key_bits():
            st.clock_kg(True, bit)
        for _ in range(PRECLOCKS):
            st.clock_kg(True, 0)
        return st

    def keystream_bits(self, nbits: int) -> list[int]:
        out = []
        for _ in range(nbits):
            out.append((self.r ^ self.s) & 1)
            self.clock_kg(False, 0)
        return out

    def keystream_bytes(self, nbytes: int, bit_order: str = "msb") -> bytes:
        return bits_to_bytes(self.keystream_bits(8 * nbytes), bit_order)


# index lists driving the branch-free sliced S update
_FB_BOTH = tuple(i for i in range(STATE_BITS) if FB0[i] and FB1[i])
_FB0_ONLY = tuple(i for i in range(STATE_BITS) if FB0[i] and not FB1[i])
_FB1_ONLY = tuple(i for i in range(STATE_BITS) if FB1[i] and not FB0[i])


class MickeySliced:
    """W parallel MICKEY 2.0 instances in column-major layout.

    The keystream loop is straight-line word logic: control bits are
    computed as words, both R clock variants collapse into one masked
    XOR, and the S feedback choice becomes two masked XOR streams. No
    operation inspects an individual lane.
    """

    def __init__(self, rregs, sregs, width: int):
        if width not in LANE_WIDTHS:
            raise ValueError(f"lane width must be one of {LANE_WIDTHS}")
        self.width = width
        self.mask = (1 << width) - 1
        self.rregs = list(rregs)
        self.sregs = list(sregs)
        if len(self.rregs) != STATE_BITS or len(self.sregs) != STATE_BITS:
            raise ValueError("sliced state needs 100 R words and 100 S words")
        # constant words for the branch-free S-hat computation
        self._c0 = tuple(self.mask if b else 0 for b in COMP0)
        self._c1 = tuple(self.mask if b else 0 for b in COMP1)

    @classmethod
    def from_key_ivs(
        cls, materials: Sequence[MickeyKeyIv], width: int = 64
    ) -> "MickeySliced":
        """Initialise lanes from per-lane key/IV material.

        When every lane has the same IV bit length the whole loading runs
        word-wide (one input word per clock); ragged IV lengths fall back
        to per-lane scalar initialisation plus a transpose.
        """
        if not materials:
            raise MickeyKeyIvError("at least one lane is required")
        if len(materials) > width:
            raise MickeyKeyIvError(f"{len(materials)} lanes exceed width {width}")
        iv_bits = []
        key_bits = []
        for lane, m in enumerate(materials):
            try:
                iv = m.iv_bits()
                key = m.key_bits()
                if len(iv) > IV_MAX_BITS:
                    raise MickeyKeyIvError(f"IV must be at most {IV_MAX_BITS} bits")
                if len(key) != 80:
                    raise MickeyKeyIvError("key must be 80 bits")
            except MickeyKeyIvError as exc:
                raise MickeyKeyIvError(f"lane {lane}: {exc}") from exc
            iv_bits.append(iv)
            key_bits.append(key)

        if len({len(iv) for iv in iv_bits}) > 1:
            states = [MickeyScalar.from_key_iv(m) for m in materials]
            return cls.from_scalar_states(states, width)

        st = cls([0] * STATE_BITS, [0] * STATE_BITS, width)
        for c in range(len(iv_bits[0])):
            word = 0
            for j, bits in enumerate(iv_bits):
                word |= bits[c] << j
            st.clock_kg(True, word)
        for c in range(80):
            word = 0
            for j, bits in enumerate(key_bits):
                word |= bits[c] << j
            st.clock_kg(True, word)
        for _ in range(PRECLOCKS):
            st.clock_kg(True, 0)
        return st

    @classmethod
    def from_scalar_states(
        cls, states: Sequence[MickeyScalar], width: int = 64
    ) -> "MickeySliced":
        rregs = [0] * STATE_BITS
        sregs = [0] * STATE_BITS
        for j, st in enumerate(states):
            for i in range(STATE_BITS):
                rregs[i] |= st.r[i] << j
                sregs[i] |= st.s[i] << j
        return cls(rregs, sregs, width)

    def extract_lane(self, j: int) -> MickeyScalar:
        r = [(w >> j) & 1 for w in self.rregs]
        s = [(w >> j) & 1 for w in self.sregs]
        return MickeyScalar(r, s)

    def r_block(self) -> SlicedBlock:
        return SlicedBlock(self.width, tuple(self.rregs))

    def s_block(self) -> SlicedBlock:
        return SlicedBlock(self.width, tuple(self.sregs))

    def clock_kg(self, mixing: bool, input_word: int) -> None:
        r, s = self.rregs, self.sregs
        full = self.mask
        ctrl_r = s[CTRL_R_S_TAP] ^ r[CTRL_R_R_TAP]
        ctrl_s = s[CTRL_S_S_TAP] ^ r[CTRL_S_R_TAP]
        input_r = (input_word ^ s[MIXING_S_TAP]) if mixing else input_word

        fb_r = r[99] ^ input_r
        # R: both clock variants folded into one masked XOR per register
        new_r = [0] * STATE_BITS
        new_r[0] = ctrl_r & r[0]
        for i in range(1, STATE_BITS):
            new_r[i] = r[i - 1] ^ (ctrl_r & r[i])
        for i in RTAPS:
            new_r[i] = new_r[i] ^ fb_r

        fb_s = s[99] ^ input_word
        c0, c1 = self._c0, self._c1
        new_s = [0] * STATE_BITS
        for i in range(1, 99):
            new_s[i] = s[i - 1] ^ ((s[i] ^ c0[i]) & (s[i + 1] ^ c1[i]))
        new_s[99] = s[98]
        fb1_term = fb_s & ctrl_s
        fb0_term = fb_s & (ctrl_s ^ full)
        for i in _FB_BOTH:
            new_s[i] = new_s[i] ^ fb_s
        for i in _FB0_ONLY:
            new_s[i] = new_s[i] ^ fb0_term
        for i in _FB1_ONLY:
            new_s[i] = new_s[i] ^ fb1_term

        self.rregs, self.sregs = new_r, new_s

    def keystream_words(self, nclocks: int) -> list[int]:
        """One output word per clock: bit j = lane j's keystream bit."""
        out = []
        for _ in range(nclocks):
            out.append(self.rregs[0] ^ self.sregs[0])
            self.clock_kg(False, 0)
        return out

    def keystream_lane_bits(self, nbits: int) -> list[list[int]]:
        """Per-lane keystream bit lists (advances the state nbits clocks)."""
        words = self.keystream_words(nbits)
        return [
            [(w >> j) & 1 for w in words] for j in range(self.width)
        ]


def scalar_keystream(material: MickeyKeyIv, nbits: int) -> list[int]:
    """Convenience: initialise and emit nbits from the reference engine."""
    return MickeyScalar.from_key_iv(material).keystream_bits(nbits)
