"""AES-128 in counter mode, with a bitsliced gate-network engine.

Three engines share one key schedule:

* AesScalarTable - the ordinary table-driven cipher, used as oracle and
  for small utility encryptions;
* AesScalarBitwise - byte-serial, substitution via the gate network
  evaluated on single bits (no table lookups); the benchmark baseline;
* AesSliced - W blocks at once in column-major layout: 128 words, word
  (8*byte_index + bit) holds that bit (LSB-first within the byte, block
  byte order per the standard) of all W lanes. SubBytes runs the gate
  network on words, ShiftRows is a pure register re-reference, MixColumns
  is a fixed XOR network, AddRoundKey conditionally XORs an all-ones mask
  per schedule bit.

The substitution network is the Boyar-Peralta 113-gate S-box circuit,
verified exhaustively against the table. CTR keystream blocks are
nonce (12 bytes) || 32-bit big-endian counter; the counter space is never
wrapped - exhaustion raises.
"""

from __future__ import annotations

from .bitslab import (
    LANE_WIDTHS,
    RowBlock,
    SlicedBlock,
    extract_lane,
    transpose_to_sliced,
)

ROUNDS = 10
BLOCK_BYTES = 16
NONCE_BYTES = 12
COUNTER_SPACE = 1 << 32

SBOX = bytes((
    0x63, 0x7C, 0x77, 0x7B, 0xF2, 0x6B, 0x6F, 0xC5,
    0x30, 0x01, 0x67, 0x2B, 0xFE, 0xD7, 0xAB, 0x76,
    0xCA, 0x82, 0xC9, 0x7D, 0xFA, 0x59, 0x47, 0xF0,
    0xAD, 0xD4, 0xA2, 0xAF, 0x9C, 0xA4, 0x72, 0xC0,
    0xB7, 0xFD, 0x93, 0x26, 0x36, 0x3F, 0xF7, 0xCC,
    0x34, 0xA5, 0xE5, 0xF1, 0x71, 0xD8, 0x31, 0x15,
    0x04, 0xC7, 0x23, 0xC3, 0x18, 0x96, 0x05, 0x9A,
    0x07, 0x12, 0x80, 0xE2, 0xEB, 0x27, 0xB2, 0x75,
    0x09, 0x83, 0x2C, 0x1A, 0x1B, 0x6E, 0x5A, 0xA0,
    0x52, 0x3B, 0xD6, 0xB3, 0x29, 0xE3, 0x2F, 0x84,
    0x53, 0xD1, 0x00, 0xED, 0x20, 0xFC, 0xB1, 0x5B,
    0x6A, 0xCB, 0xBE, 0x39, 0x4A, 0x4C, 0x58, 0xCF,
    0xD0, 0xEF, 0xAA, 0xFB, 0x43, 0x4D, 0x33, 0x85,
    0x45, 0xF9, 0x02, 0x7F, 0x50, 0x3C, 0x9F, 0xA8,
    0x51, 0xA3, 0x40, 0x8F, 0x92, 0x9D, 0x38, 0xF5,
    0xBC, 0xB6, 0xDA, 0x21, 0x10, 0xFF, 0xF3, 0xD2,
    0xCD, 0x0C, 0x13, 0xEC, 0x5F, 0x97, 0x44, 0x17,
    0xC4, 0xA7, 0x7E, 0x3D, 0x64, 0x5D, 0x19, 0x73,
    0x60, 0x81, 0x4F, 0xDC, 0x22, 0x2A, 0x90, 0x88,
    0x46, 0xEE, 0xB8, 0x14, 0xDE, 0x5E, 0x0B, 0xDB,
    0xE0, 0x32, 0x3A, 0x0A, 0x49, 0x06, 0x24, 0x5C,
    0xC2, 0xD3, 0xAC, 0x62, 0x91, 0x95, 0xE4, 0x79,
    0xE7, 0xC8, 0x37, 0x6D, 0x8D, 0xD5, 0x4E, 0xA9,
    0x6C, 0x56, 0xF4, 0xEA, 0x65, 0x7A, 0xAE, 0x08,
    0xBA, 0x78, 0x25, 0x2E, 0x1C, 0xA6, 0xB4, 0xC6,
    0xE8, 0xDD, 0x74, 0x1F, 0x4B, 0xBD, 0x8B, 0x8A,
    0x70, 0x3E, 0xB5, 0x66, 0x48, 0x03, 0xF6, 0x0E,
    0x61, 0x35, 0x57, 0xB9, 0x86, 0xC1, 0x1D, 0x9E,
    0xE1, 0xF8, 0x98, 0x11, 0x69, 0xD9, 0x8E, 0x94,
    0x9B, 0x1E, 0x87, 0xE9, 0xCE, 0x55, 0x28, 0xDF,
    0x8C, 0xA1, 0x89, 0x0D, 0xBF, 0xE6, 0x42, 0x68,
    0x41, 0x99, 0x2D, 0x0F, 0xB0, 0x54, 0xBB, 0x16,
))

RCON = (0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1B, 0x36)

# Boyar-Peralta combinational S-box: 23 XOR in, 30 AND/XOR middle,
# 26 XOR/XNOR out ('#' marks XNOR). U0 is the input MSB, S0 the output MSB.
_SBOX_CIRCUIT = """
y14 = U3 ^ U5 | y13 = U0 ^ U6 | y9 = U0 ^ U3 | y8 = U0 ^ U5
t0 = U1 ^ U2 | y1 = t0 ^ U7 | y4 = y1 ^ U3 | y12 = y13 ^ y14
y2 = y1 ^ U0 | y5 = y1 ^ U6 | y3 = y5 ^ y8 | t1 = U4 ^ y12
y15 = t1 ^ U5 | y20 = t1 ^ U1 | y6 = y15 ^ U7 | y10 = y15 ^ t0
y11 = y20 ^ y9 | y7 = U7 ^ y11 | y17 = y10 ^ y11 | y19 = y10 ^ y8
y16 = t0 ^ y11 | y21 = y13 ^ y16 | y18 = U0 ^ y16
t2 = y12 & y15 | t3 = y3 & y6 | t4 = t3 ^ t2 | t5 = y4 & U7
t6 = t5 ^ t2 | t7 = y13 & y16 | t8 = y5 & y1 | t9 = t8 ^ t7
t10 = y2 & y7 | t11 = t10 ^ t7 | t12 = y9 & y11 | t13 = y14 & y17
t14 = t13 ^ t12 | t15 = y8 & y10 | t16 = t15 ^ t12 | t17 = t4 ^ t14
t18 = t6 ^ t16 | t19 = t9 ^ t14 | t20 = t11 ^ t16 | t21 = t17 ^ y20
t22 = t18 ^ y19 | t23 = t19 ^ y21 | t24 = t20 ^ y18
t25 = t21 ^ t22 | t26 = t21 & t23 | t27 = t24 ^ t26 | t28 = t25 & t27
t29 = t28 ^ t22 | t30 = t23 ^ t24 | t31 = t22 ^ t26 | t32 = t31 & t30
t33 = t32 ^ t24 | t34 = t23 ^ t33 | t35 = t27 ^ t33 | t36 = t24 & t35
t37 = t36 ^ t34 | t38 = t27 ^ t36 | t39 = t29 & t38 | t40 = t25 ^ t39
t41 = t40 ^ t37 | t42 = t29 ^ t33 | t43 = t29 ^ t40 | t44 = t33 ^ t37
t45 = t42 ^ t41
z0 = t44 & y15 | z1 = t37 & y6 | z2 = t33 & U7 | z3 = t43 & y16
z4 = t40 & y1 | z5 = t29 & y7 | z6 = t42 & y11 | z7 = t45 & y17
z8 = t41 & y10 | z9 = t44 & y12 | z10 = t37 & y3 | z11 = t33 & y4
z12 = t43 & y13 | z13 = t40 & y5 | z14 = t29 & y2 | z15 = t42 & y9
z16 = t45 & y14 | z17 = t41 & y8
t46 = z15 ^ z16 | t47 = z10 ^ z11 | t48 = z5 ^ z13 | t49 = z9 ^ z10
t50 = z2 ^ z12 | t51 = z2 ^ z5 | t52 = z7 ^ z8 | t53 = z0 ^ z3
t54 = z6 ^ z7 | t55 = z16 ^ z17 | t56 = z12 ^ t48 | t57 = t50 ^ t53
t58 = z4 ^ t46 | t59 = z3 ^ t54 | t60 = t46 ^ t57 | t61 = z14 ^ t57
t62 = t52 ^ t58 | t63 = t49 ^ t58 | t64 = z4 ^ t59 | t65 = t61 ^ t62
t66 = z1 ^ t63
S0 = t59 ^ t63 | S6 = t56 # t62 | S7 = t48 # t60 | t67 = t64 ^ t65
S3 = t53 ^ t66 | S4 = t51 ^ t66 | S5 = t47 ^ t65
S1 = t64 # S3 | S2 = t55 # t67
"""


def _parse_circuit(text: str):
    ops = []
    for chunk in text.replace("\n", "|").split("|"):
        chunk = chunk.strip()
        if not chunk:
            continue
        dst, expr = (p.strip() for p in chunk.split("="))
        for op in ("^", "&", "#"):
            if op in expr:
                a, b = (p.strip() for p in expr.split(op))
                ops.append((dst, op, a, b))
                break
        else:
            raise ValueError(f"bad circuit line {chunk!r}")
    return tuple(ops)


SBOX_OPS = _parse_circuit(_SBOX_CIRCUIT)
SBOX_GATE_COUNT = len(SBOX_OPS)


def _generate_sbox_source() -> str:
    """Straight-line source for the circuit, width-agnostic via `ones`."""
    lines = ["def sbox_gates(U0, U1, U2, U3, U4, U5, U6, U7, ones):"]
    for dst, op, a, b in SBOX_OPS:
        if op == "#":
            lines.append(f"    {dst} = ({a} ^ {b}) ^ ones")
        else:
            lines.append(f"    {dst} = {a} {op} {b}")
    lines.append("    return S0, S1, S2, S3, S4, S5, S6, S7")
    return "\n".join(lines)


SBOX_SOURCE = _generate_sbox_source()
_ns: dict = {}
exec(compile(SBOX_SOURCE, "<sbox_gates>", "exec"), _ns)
sbox_gates = _ns["sbox_gates"]  # (U0..U7 MSB-first, ones) -> S0..S7 MSB-first


def sbox_sliced(words, ones: int):
    """Apply the S-box to 8 sliced words (index = bit, LSB-first)."""
    s0, s1, s2, s3, s4, s5, s6, s7 = sbox_gates(
        words[7], words[6], words[5], words[4],
        words[3], words[2], words[1], words[0], ones,
    )
    return [s7, s6, s5, s4, s3, s2, s1, s0]


def sbox_bitwise(byte: int) -> int:
    """Table-free scalar S-box: the gate network on single bits."""
    u = [(byte >> (7 - i)) & 1 for i in range(8)]
    s = sbox_gates(*u, 1)
    out = 0
    for i, bit in enumerate(s):
        out = (out << 1) | bit
    return out


def xtime(b: int) -> int:
    b <<= 1
    return (b ^ 0x1B) & 0xFF if b & 0x100 else b


def key_expand(key: bytes) -> list[bytes]:
    """AES-128 schedule: 11 round keys of 16 bytes."""
    if len(key) != 16:
        raise ValueError("AES-128 key must be 16 bytes")
    words = [key[4 * i: 4 * i + 4] for i in range(4)]
    for i in range(4, 44):
        t = words[i - 1]
        if i % 4 == 0:
            t = bytes(SBOX[t[(j + 1) % 4]] for j in range(4))
            t = bytes((t[0] ^ RCON[i // 4 - 1],)) + t[1:]
        words.append(bytes(a ^ b for a, b in zip(words[i - 4], t)))
    return [b"".join(words[4 * r: 4 * r + 4]) for r in range(ROUNDS + 1)]


# block byte permutation realising ShiftRows (row r rotates left by r)
SHIFT_ROWS_PERM = tuple((i % 4) + 4 * ((i // 4 + i % 4) % 4) for i in range(16))


class AesScalarTable:
    """Standard table-driven AES-128; the in-repo oracle engine."""

    def __init__(self, key: bytes):
        self.round_keys = key_expand(key)

    def encrypt_block(self, block: bytes) -> bytes:
        if len(block) != BLOCK_BYTES:
            raise ValueError("block must be 16 bytes")
        state = bytes(a ^ b for a, b in zip(block, self.round_keys[0]))
        for rnd in range(1, ROUNDS + 1):
            state = bytes(SBOX[b] for b in state)
            state = bytes(state[SHIFT_ROWS_PERM[i]] for i in range(16))
            if rnd < ROUNDS:
                state = self._mix_columns(state)
            state = bytes(a ^ b for a, b in zip(state, self.round_keys[rnd]))
        return state

    @staticmethod
    def _mix_columns(state: bytes) -> bytes:
        out = bytearray(16)
        for c in range(4):
            a = state[4 * c: 4 * c + 4]
            t = a[0] ^ a[1] ^ a[2] ^ a[3]
            for r in range(4):
                out[4 * c + r] = a[r] ^ t ^ xtime(a[r] ^ a[(r + 1) % 4])
        return bytes(out)


class AesScalarBitwise(AesScalarTable):
    """Byte-serial AES-128 with the substitution computed, not looked up."""

    def encrypt_block(self, block: bytes) -> bytes:
        if len(block) != BLOCK_BYTES:
            raise ValueError("block must be 16 bytes")
        state = bytes(a ^ b for a, b in zip(block, self.round_keys[0]))
        for rnd in range(1, ROUNDS + 1):
            state = bytes(sbox_bitwise(b) for b in state)
            state = bytes(state[SHIFT_ROWS_PERM[i]] for i in range(16))
            if rnd < ROUNDS:
                state = self._mix_columns(state)
            state = bytes(a ^ b for a, b in zip(state, self.round_keys[rnd]))
        return state


def shift_rows_sliced(regs):
    """ShiftRows as a pure permutation of register references."""
    return [regs[8 * SHIFT_ROWS_PERM[i // 8] + i % 8] for i in range(128)]


def mix_columns_sliced(regs):
    """MixColumns as a fixed XOR network over 8-register byte groups."""
    out = [0] * 128
    for c in range(4):
        col = [regs[8 * (4 * c + r): 8 * (4 * c + r) + 8] for r in range(4)]
        t = [col[0][b] ^ col[1][b] ^ col[2][b] ^ col[3][b] for b in range(8)]
        for r in range(4):
            u = [col[r][b] ^ col[(r + 1) % 4][b] for b in range(8)]
            x = _xtime_sliced(u)
            base = 8 * (4 * c + r)
            for b in range(8):
                out[base + b] = col[r][b] ^ t[b] ^ x[b]
    return out


def _xtime_sliced(b):
    """Multiply a sliced byte by {02}: shift the bit registers, fold 0x1b."""
    top = b[7]
    return [top, b[0] ^ top, b[1], b[2] ^ top, b[3] ^ top, b[4], b[5], b[6]]


class AesSliced:
    """Bitsliced AES-128 over W lanes (one 16-byte block per lane)."""

    def __init__(self, key: bytes, width: int = 64):
        if width not in LANE_WIDTHS:
            raise ValueError(f"lane width must be one of {LANE_WIDTHS}")
        self.width = width
        self.mask = (1 << width) - 1
        self.round_keys = key_expand(key)
        # per-round per-register masks: all-ones lane mask where the key bit is set
        self.rk_bits = [
            [(rk[i // 8] >> (i % 8)) & 1 for i in range(128)]
            for rk in self.round_keys
        ]

    def encrypt_regs(self, regs):
        """Run the cipher on 128 sliced registers in place-free style."""
        full = self.mask
        regs = self._add_round_key(list(regs), 0)
        for rnd in range(1, ROUNDS + 1):
            regs = [
                w
                for pos in range(16)
                for w in sbox_sliced(regs[8 * pos: 8 * pos + 8], full)
            ]
            regs = shift_rows_sliced(regs)
            if rnd < ROUNDS:
                regs = mix_columns_sliced(regs)
            regs = self._add_round_key(regs, rnd)
        return regs

    def _add_round_key(self, regs, rnd: int):
        bits = self.rk_bits[rnd]
        full = self.mask
        for i in range(128):
            if bits[i]:
                regs[i] = regs[i] ^ full
        return regs

    def encrypt_blocks(self, blocks: list[bytes]) -> list[bytes]:
        """Encrypt up to W 16-byte blocks; lane j carries blocks[j]."""
        if len(blocks) > self.width:
            raise ValueError(f"{len(blocks)} blocks exceed {self.width} lanes")
        rows = RowBlock(
            tuple(int.from_bytes(b, "little") for b in blocks), 128
        )
        regs = list(transpose_to_sliced(rows, self.width).words)
        regs = self.encrypt_regs(regs)
        slab = SlicedBlock(self.width, tuple(regs))
        return [
            extract_lane(slab, j).to_bytes(16, "little")
            for j in range(len(blocks))
        ]


class CounterExhaustedError(RuntimeError):
    """The 32-bit block counter space would be exceeded."""


def _counter_block(nonce: bytes, counter: int) -> bytes:
    return nonce + counter.to_bytes(4, "big")


def ctr_keystream(
    key: bytes,
    nonce: bytes,
    nbytes: int,
    start_block: int = 0,
    width: int = 64,
    engine: str = "sliced",
) -> bytes:
    """CTR keystream bytes for blocks start_block, start_block+1, ...

    The stream is a pure function of (key, nonce, offset): restarting at
    block t reproduces the identical suffix.
    """
    if len(nonce) != NONCE_BYTES:
        raise ValueError(f"nonce must be {NONCE_BYTES} bytes")
    if nbytes < 0:
        raise ValueError("nbytes must be non-negative")
    if nbytes == 0:
        return b""
    nblocks = (nbytes + BLOCK_BYTES - 1) // BLOCK_BYTES
    if start_block + nblocks > COUNTER_SPACE:
        raise CounterExhaustedError(
            f"{start_block + nblocks} blocks exceed the 2**32 counter space"
        )
    out = bytearray()
    if engine == "sliced":
        aes = AesSliced(key, width)
        ctr = start_block
        remaining = nblocks
        while remaining:
            batch = min(width, remaining)
            blocks = [_counter_block(nonce, ctr + j) for j in range(batch)]
            out += b"".join(aes.encrypt_blocks(blocks))
            ctr += batch
            remaining -= batch
    elif engine == "scalar":
        aes = AesScalarTable(key)
        for j in range(nblocks):
            out += aes.encrypt_block(_counter_block(nonce, start_block + j))
    else:
        raise ValueError(f"unknown engine {engine!r}")
    return bytes(out[:nbytes])
