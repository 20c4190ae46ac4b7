"""Compiled keystream loops for benchmarking and bulk generation.

Both sides of every benchmark pair get the same compiler treatment:

* the naive engines keep one instance per call with row-major packed
  registers and produce one bit (or one byte, for AES) at a time through
  shift-and-mask bit access;
* the sliced engines advance all W lanes per clock over column-major
  uint64 register arrays with pure word logic and double-buffer register
  re-referencing.

Initialisation always runs in the pure-Python engines; kernels only
execute the keystream loop. Every kernel's output is cross-checked
against the pure engines by the test suite and by the benchmark's
correctness gate before any timing is reported.
"""

from __future__ import annotations

import numpy as np
from numba import njit, uint64

from . import aes_ctr, grain, mickey
from .bitops import bits_to_bytes

_U64 = np.uint64
_JIT = {"cache": True, "nogil": True}
# exec-generated functions have no source file for the cache locator
_JIT_GEN = {"cache": False, "nogil": True}


def _masks_from_bits(bits) -> np.ndarray:
    full = _U64(0xFFFFFFFFFFFFFFFF)
    return np.array([full if b else 0 for b in bits], dtype=np.uint64)


# --- MICKEY 2.0 ---

_RT_M = _masks_from_bits(mickey.RTAPS_BITS)
_C0_M = _masks_from_bits(mickey.COMP0)
_C1_M = _masks_from_bits(mickey.COMP1)
_FB0_M = _masks_from_bits(mickey.FB0)
_FB1_M = _masks_from_bits(mickey.FB1)


@njit(**_JIT)
def _mickey_sliced_loop(r_io, s_io, out, rt, c0, c1, fb0m, fb1m):
    # fixed-role ping-pong buffers keep the stencils free of aliasing;
    # the clock body is written out twice so the roles never swap pointers
    ra = np.empty(100, np.uint64)
    sa = np.empty(100, np.uint64)
    rb = np.empty(100, np.uint64)
    sb = np.empty(100, np.uint64)
    for i in range(100):
        ra[i] = r_io[i]
        sa[i] = s_io[i]
    n = out.shape[0]
    for it in range(n // 2):
        out[2 * it] = ra[0] ^ sa[0]
        ctrl_r = sa[34] ^ ra[67]
        ctrl_s = sa[67] ^ ra[33]
        fb_r = ra[99]
        fb_s = sa[99]
        a_sel = fb_s & ~ctrl_s
        b_sel = fb_s & ctrl_s
        rb[0] = (ctrl_r & ra[0]) ^ (fb_r & rt[0])
        for i in range(1, 100):
            rb[i] = ra[i - 1] ^ (ctrl_r & ra[i]) ^ (fb_r & rt[i])
        sb[0] = (fb0m[0] & a_sel) | (fb1m[0] & b_sel)
        for i in range(1, 99):
            sb[i] = (
                sa[i - 1]
                ^ ((sa[i] ^ c0[i]) & (sa[i + 1] ^ c1[i]))
                ^ ((fb0m[i] & a_sel) | (fb1m[i] & b_sel))
            )
        sb[99] = sa[98] ^ ((fb0m[99] & a_sel) | (fb1m[99] & b_sel))

        out[2 * it + 1] = rb[0] ^ sb[0]
        ctrl_r = sb[34] ^ rb[67]
        ctrl_s = sb[67] ^ rb[33]
        fb_r = rb[99]
        fb_s = sb[99]
        a_sel = fb_s & ~ctrl_s
        b_sel = fb_s & ctrl_s
        ra[0] = (ctrl_r & rb[0]) ^ (fb_r & rt[0])
        for i in range(1, 100):
            ra[i] = rb[i - 1] ^ (ctrl_r & rb[i]) ^ (fb_r & rt[i])
        sa[0] = (fb0m[0] & a_sel) | (fb1m[0] & b_sel)
        for i in range(1, 99):
            sa[i] = (
                sb[i - 1]
                ^ ((sb[i] ^ c0[i]) & (sb[i + 1] ^ c1[i]))
                ^ ((fb0m[i] & a_sel) | (fb1m[i] & b_sel))
            )
        sa[99] = sb[98] ^ ((fb0m[99] & a_sel) | (fb1m[99] & b_sel))



_M36 = (1 << 36) - 1
_MICKEY_PACKED = {
    "rt": (mickey._RTAPS_MASK & ((1 << 64) - 1), mickey._RTAPS_MASK >> 64),
    "c0": (mickey._COMP0_MASK & ((1 << 64) - 1), mickey._COMP0_MASK >> 64),
    "c1": (mickey._COMP1_MASK & ((1 << 64) - 1), mickey._COMP1_MASK >> 64),
    "fb0": (mickey._FB0_MASK & ((1 << 64) - 1), mickey._FB0_MASK >> 64),
    "fb1": (mickey._FB1_MASK & ((1 << 64) - 1), mickey._FB1_MASK >> 64),
    "range": (((1 << 64) - 1) ^ 1, (1 << 35) - 1),  # positions 1..98
}


@njit(**_JIT)
def _mickey_naive_loop(
    r0, r1, s0, s1, out,
    rt0, rt1, c00, c01, c10, c11, f00, f01, f10, f11, rg0, rg1,
):
    one = uint64(1)
    zero = uint64(0)
    m36 = uint64(_M36)
    for t in range(out.shape[0] * 8):
        z = (r0 ^ s0) & one
        out[t >> 3] |= z << uint64(7 - (t & 7))
        ctrl_r = ((s0 >> uint64(34)) ^ (r1 >> uint64(3))) & one
        ctrl_s = ((s1 >> uint64(3)) ^ (r0 >> uint64(33))) & one
        fb_r = (r1 >> uint64(35)) & one
        fb_s = (s1 >> uint64(35)) & one
        mr = zero - fb_r
        mc = zero - ctrl_r
        nr1 = ((r1 << one) | (r0 >> uint64(63))) & m36
        nr0 = r0 << one
        nr0 ^= (mr & rt0) ^ (mc & r0)
        nr1 ^= (mr & rt1) ^ (mc & r1)
        # shat = (s << 1) ^ ((s ^ c0) & ((s >> 1) ^ c1) & range)
        sl1 = ((s1 << one) | (s0 >> uint64(63))) & m36
        sl0 = s0 << one
        sr0 = (s0 >> one) | (s1 << uint64(63))
        sr1 = s1 >> one
        h0 = sl0 ^ ((s0 ^ c00) & (sr0 ^ c10) & rg0)
        h1 = sl1 ^ ((s1 ^ c01) & (sr1 ^ c11) & rg1)
        ms = zero - fb_s
        mk = zero - ctrl_s
        h0 ^= ms & ((f00 & ~mk) | (f10 & mk))
        h1 ^= ms & ((f01 & ~mk) | (f11 & mk))
        r0, r1, s0, s1 = nr0, nr1, h0, h1


_RT_B = np.array(mickey.RTAPS_BITS, dtype=np.uint8)
_C0_B = np.array(mickey.COMP0, dtype=np.uint8)
_C1_B = np.array(mickey.COMP1, dtype=np.uint8)
_FB0_B = np.array(mickey.FB0, dtype=np.uint8)
_FB1_B = np.array(mickey.FB1, dtype=np.uint8)


@njit(**_JIT)
def _mickey_naive_bitwise_loop(r, s, out, rt, c0, c1, fb0, fb1):
    """Bit-at-a-time naive model: one bit per state cell, per-bit updates."""
    r2 = np.empty(100, np.uint8)
    s2 = np.empty(100, np.uint8)
    for t in range(out.shape[0] * 8):
        z = r[0] ^ s[0]
        out[t >> 3] |= z << (7 - (t & 7))
        ctrl_r = s[34] ^ r[67]
        ctrl_s = s[67] ^ r[33]
        fb_r = r[99]
        fb_s = s[99]
        r2[0] = 0
        for i in range(1, 100):
            r2[i] = r[i - 1]
        if fb_r:
            for i in range(100):
                r2[i] ^= rt[i]
        if ctrl_r:
            for i in range(100):
                r2[i] ^= r[i]
        s2[0] = 0
        for i in range(1, 99):
            s2[i] = s[i - 1] ^ ((s[i] ^ c0[i]) & (s[i + 1] ^ c1[i]))
        s2[99] = s[98]
        if fb_s:
            if ctrl_s:
                for i in range(100):
                    s2[i] ^= fb1[i]
            else:
                for i in range(100):
                    s2[i] ^= fb0[i]
        for i in range(100):
            r[i] = r2[i]
            s[i] = s2[i]


def mickey_sliced_words(materials, nclocks: int, width: int = 64) -> np.ndarray:
    """Keystream words from the compiled sliced engine (pure init)."""
    eng = mickey.MickeySliced.from_key_ivs(materials, width)
    r = np.array(eng.rregs, dtype=np.uint64)
    s = np.array(eng.sregs, dtype=np.uint64)
    out = np.zeros(nclocks + nclocks % 2, dtype=np.uint64)  # kernel wants even
    _mickey_sliced_loop(r, s, out, _RT_M, _C0_M, _C1_M, _FB0_M, _FB1_M)
    if width < 64:
        # the constant complements run at full word width; unused high
        # lanes carry junk that a width mask removes
        out &= _U64((1 << width) - 1)
    return out[:nclocks]


def mickey_naive_bitwise_bytes(material, nbytes: int) -> bytes:
    """Bit-vector naive engine: the benchmark's bit-at-a-time baseline."""
    st = mickey.MickeyScalar.from_key_iv(material)
    r = np.array(st.r, dtype=np.uint8)
    s = np.array(st.s, dtype=np.uint8)
    out = np.zeros(nbytes, dtype=np.uint8)
    _mickey_naive_bitwise_loop(r, s, out, _RT_B, _C0_B, _C1_B, _FB0_B, _FB1_B)
    return out.tobytes()


def mickey_packed_bytes(material, nbytes: int) -> bytes:
    """Row-major word-packed scalar engine (the stronger, SWAR baseline)."""
    st = mickey.MickeyScalarPacked.from_key_iv(material)
    out = np.zeros(nbytes, dtype=np.uint8)
    p = _MICKEY_PACKED
    _mickey_naive_loop(
        _U64(st.r & ((1 << 64) - 1)), _U64(st.r >> 64),
        _U64(st.s & ((1 << 64) - 1)), _U64(st.s >> 64),
        out,
        _U64(p["rt"][0]), _U64(p["rt"][1]),
        _U64(p["c0"][0]), _U64(p["c0"][1]),
        _U64(p["c1"][0]), _U64(p["c1"][1]),
        _U64(p["fb0"][0]), _U64(p["fb0"][1]),
        _U64(p["fb1"][0]), _U64(p["fb1"][1]),
        _U64(p["range"][0]), _U64(p["range"][1]),
    )
    return out.tobytes()


# --- Grain v1 (kernel bodies generated from the cipher's constants) ---


def _grain_expr(arrays: bool, offset: str = "") -> tuple[str, str, str]:
    """(z_expr, fl_expr, fn_expr) over b[i]/s[i] or packed-word bit probes."""

    if arrays:
        def bit(reg, t):
            return f"{reg}[{offset}{t}]"
    else:
        def bit(reg, t):
            if t < 64:
                return f"(({reg}0 >> uint64({t})) & one)"
            return f"(({reg}1 >> uint64({t - 64})) & one)"

    x = [bit("s", grain.H_LFSR_TAPS[0]), bit("s", grain.H_LFSR_TAPS[1]),
         bit("s", grain.H_LFSR_TAPS[2]), bit("s", grain.H_LFSR_TAPS[3]),
         bit("b", grain.H_NFSR_TAP)]
    h_terms = [
        x[1], x[4],
        f"({x[0]} & {x[3]})", f"({x[2]} & {x[3]})", f"({x[3]} & {x[4]})",
        f"({x[0]} & {x[1]} & {x[2]})", f"({x[0]} & {x[2]} & {x[3]})",
        f"({x[0]} & {x[2]} & {x[4]})", f"({x[1]} & {x[2]} & {x[4]})",
        f"({x[2]} & {x[3]} & {x[4]})",
    ]
    z = " ^ ".join([bit("b", t) for t in grain.OUTPUT_TAPS] + h_terms)
    fl = " ^ ".join(bit("s", t) for t in grain.LFSR_TAPS)
    fn_terms = [bit("s", 0)]
    fn_terms += [bit("b", t) for t in grain.NFSR_LINEAR_TAPS]
    fn_terms += [
        "(" + " & ".join(bit("b", t) for t in term) + ")"
        for term in grain.NFSR_PRODUCT_TAPS
    ]
    return z, fl, " ^ ".join(fn_terms)


def _build_grain_sliced():
    # sliding window: 80 clocks run against static offsets into a 160-deep
    # buffer, then one copy realigns the window (amortised register swap)
    z, fl, fn = _grain_expr(arrays=True, offset="c + ")
    src = f"""
def _grain_sliced_loop(b, s, out):
    nclocks = out.shape[0]
    done = 0
    while done < nclocks:
        window = min(80, nclocks - done)
        for c in range(window):
            z = {z}
            out[done + c] = z
            fl = {fl}
            fn = {fn}
            s[c + 80] = fl
            b[c + 80] = fn
        for i in range(80):
            s[i] = s[i + window]
            b[i] = b[i + window]
        done += window
"""
    ns: dict = {}
    exec(compile(src, "<grain_sliced>", "exec"), ns)
    return njit(**_JIT_GEN)(ns["_grain_sliced_loop"])


def _build_grain_naive_bitwise():
    z, fl, fn = _grain_expr(arrays=True)
    src = f"""
def _grain_naive_bitwise_loop(b, s, out):
    for t in range(out.shape[0] * 8):
        z = {z}
        out[t >> 3] |= z << (7 - (t & 7))
        fl = {fl}
        fn = {fn}
        for i in range(79):
            s[i] = s[i + 1]
            b[i] = b[i + 1]
        s[79] = fl
        b[79] = fn
"""
    ns: dict = {}
    exec(compile(src, "<grain_naive_bitwise>", "exec"), ns)
    return njit(**_JIT_GEN)(ns["_grain_naive_bitwise_loop"])


def _build_grain_naive():
    z, fl, fn = _grain_expr(arrays=False)
    src = f"""
def _grain_naive_loop(b0, b1, s0, s1, out, one):
    for t in range(out.shape[0] * 8):
        z = {z}
        out[t >> 3] |= z << uint64(7 - (t & 7))
        fl = {fl}
        fn = {fn}
        s0 = (s0 >> one) | (s1 << uint64(63))
        s1 = ((s1 >> one) | (fl << uint64(15))) & uint64(0xFFFF)
        b0 = (b0 >> one) | (b1 << uint64(63))
        b1 = ((b1 >> one) | (fn << uint64(15))) & uint64(0xFFFF)
"""
    ns: dict = {"uint64": uint64}
    exec(compile(src, "<grain_naive>", "exec"), ns)
    return njit(**_JIT_GEN)(ns["_grain_naive_loop"])


_grain_sliced_loop = _build_grain_sliced()
_grain_naive_loop = _build_grain_naive()
_grain_naive_bitwise_loop = _build_grain_naive_bitwise()


def grain_sliced_words(materials, nclocks: int, width: int = 64) -> np.ndarray:
    eng = grain.GrainSliced.from_key_ivs(materials, width)
    b = np.zeros(160, dtype=np.uint64)
    s = np.zeros(160, dtype=np.uint64)
    b[:80] = eng.b
    s[:80] = eng.s
    out = np.zeros(nclocks, dtype=np.uint64)
    _grain_sliced_loop(b, s, out)
    return out


def grain_packed_bytes(material, nbytes: int) -> bytes:
    """Row-major word-packed scalar engine (the stronger, SWAR baseline)."""
    st = grain.GrainScalarPacked.from_key_iv(material)
    out = np.zeros(nbytes, dtype=np.uint8)
    _grain_naive_loop(
        _U64(st.b & ((1 << 64) - 1)), _U64(st.b >> 64),
        _U64(st.s & ((1 << 64) - 1)), _U64(st.s >> 64),
        out, _U64(1),
    )
    return out.tobytes()


def grain_naive_bitwise_bytes(material, nbytes: int) -> bytes:
    """Bit-vector naive engine: the benchmark's bit-at-a-time baseline."""
    st = grain.GrainScalar.from_key_iv(material)
    b = np.array(st.b, dtype=np.uint8)
    s = np.array(st.s, dtype=np.uint8)
    out = np.zeros(nbytes, dtype=np.uint8)
    _grain_naive_bitwise_loop(b, s, out)
    return out.tobytes()


# --- AES-128 CTR ---

_sbox_ns: dict = {}
exec(compile(aes_ctr.SBOX_SOURCE, "<sbox_gates_jit>", "exec"), _sbox_ns)
_sbox_gates_jit = njit(**_JIT_GEN)(_sbox_ns["sbox_gates"])

_SHIFT_ROWS_REG = np.array(
    [8 * aes_ctr.SHIFT_ROWS_PERM[i // 8] + i % 8 for i in range(128)],
    dtype=np.int64,
)


@njit(**_JIT)
def _aes_round_regs(regs, buf, rk_masks, rnd, last, ones):
    # SubBytes on all 16 byte groups
    for pos in range(16):
        o = 8 * pos
        s0, s1, s2, s3, s4, s5, s6, s7 = _sbox_gates_jit(
            regs[o + 7], regs[o + 6], regs[o + 5], regs[o + 4],
            regs[o + 3], regs[o + 2], regs[o + 1], regs[o + 0], ones,
        )
        regs[o + 0] = s7
        regs[o + 1] = s6
        regs[o + 2] = s5
        regs[o + 3] = s4
        regs[o + 4] = s3
        regs[o + 5] = s2
        regs[o + 6] = s1
        regs[o + 7] = s0
    # ShiftRows: pure register re-reference
    for i in range(128):
        buf[i] = regs[_SHIFT_ROWS_REG[i]]
    if not last:
        # MixColumns: fixed XOR network per column
        for c in range(4):
            base = 32 * c
            for bit in range(8):
                t = (
                    buf[base + bit]
                    ^ buf[base + 8 + bit]
                    ^ buf[base + 16 + bit]
                    ^ buf[base + 24 + bit]
                )
                for r in range(4):
                    u_idx = base + 8 * r
                    v_idx = base + 8 * ((r + 1) % 4)
                    # xtime(u ^ v) bit by bit, folded with u ^ t
                    if bit == 0:
                        x = buf[u_idx + 7] ^ buf[v_idx + 7]
                    elif bit in (1, 3, 4):
                        x = (
                            buf[u_idx + bit - 1]
                            ^ buf[v_idx + bit - 1]
                            ^ buf[u_idx + 7]
                            ^ buf[v_idx + 7]
                        )
                    else:
                        x = buf[u_idx + bit - 1] ^ buf[v_idx + bit - 1]
                    regs[u_idx + bit] = buf[u_idx + bit] ^ t ^ x
    else:
        for i in range(128):
            regs[i] = buf[i]
    for i in range(128):
        regs[i] ^= rk_masks[rnd, i]


@njit(**_JIT)
def _aes_ctr_sliced_loop(rk_masks, nonce_words, base_block, out_regs, width):
    ones = uint64(0xFFFFFFFFFFFFFFFF) if width == 64 else uint64(0xFFFFFFFF)
    nbatches = out_regs.shape[0]
    regs = np.empty(128, np.uint64)
    buf = np.empty(128, np.uint64)
    checksum = uint64(0)
    for batch in range(nbatches):
        for i in range(96):
            regs[i] = nonce_words[i]
        # counter bytes 12..15 hold the 32-bit block index, big-endian
        for k in range(4):
            shift_base = (3 - k) * 8
            for bit in range(8):
                w = uint64(0)
                for j in range(width):
                    ctr = uint64(base_block + batch * width + j)
                    w |= ((ctr >> uint64(shift_base + bit)) & uint64(1)) << uint64(j)
                regs[8 * (12 + k) + bit] = w
        for i in range(128):
            regs[i] ^= rk_masks[0, i]
        for rnd in range(1, 11):
            _aes_round_regs(regs, buf, rk_masks, rnd, rnd == 10, ones)
        for i in range(128):
            out_regs[batch, i] = regs[i]
            checksum ^= regs[i]
    return checksum


@njit(**_JIT)
def _aes_ctr_scalar_loop(rk_bits, nonce, base_block, out):
    nblocks = out.shape[0] // 16
    state = np.empty(16, np.uint8)
    tmp = np.empty(16, np.uint8)
    one = uint64(1)
    for blk in range(nblocks):
        ctr = base_block + blk
        for i in range(12):
            state[i] = nonce[i]
        state[12] = (ctr >> 24) & 0xFF
        state[13] = (ctr >> 16) & 0xFF
        state[14] = (ctr >> 8) & 0xFF
        state[15] = ctr & 0xFF
        for i in range(16):
            state[i] ^= rk_bits[0, i]
        for rnd in range(1, 11):
            # byte-serial SubBytes via the gate network (no table)
            for i in range(16):
                v = uint64(state[i])
                s0, s1, s2, s3, s4, s5, s6, s7 = _sbox_gates_jit(
                    (v >> uint64(7)) & one, (v >> uint64(6)) & one,
                    (v >> uint64(5)) & one, (v >> uint64(4)) & one,
                    (v >> uint64(3)) & one, (v >> uint64(2)) & one,
                    (v >> uint64(1)) & one, v & one, one,
                )
                state[i] = (
                    (s0 << uint64(7)) | (s1 << uint64(6)) | (s2 << uint64(5))
                    | (s3 << uint64(4)) | (s4 << uint64(3)) | (s5 << uint64(2))
                    | (s6 << uint64(1)) | s7
                )
            for i in range(16):
                tmp[i] = state[(i % 4) + 4 * ((i // 4 + i % 4) % 4)]
            if rnd < 10:
                for c in range(4):
                    a0 = tmp[4 * c]
                    a1 = tmp[4 * c + 1]
                    a2 = tmp[4 * c + 2]
                    a3 = tmp[4 * c + 3]
                    t = a0 ^ a1 ^ a2 ^ a3
                    for r in range(4):
                        u = tmp[4 * c + r]
                        v = tmp[4 * c + (r + 1) % 4]
                        x = u ^ v
                        x = ((x << 1) ^ 0x1B) & 0xFF if x & 0x80 else (x << 1) & 0xFF
                        state[4 * c + r] = u ^ t ^ x
            else:
                for i in range(16):
                    state[i] = tmp[i]
            for i in range(16):
                state[i] ^= rk_bits[rnd, i]
        for i in range(16):
            out[16 * blk + i] = state[i]


def _aes_rk_masks(key: bytes, width: int) -> np.ndarray:
    full = _U64(0xFFFFFFFFFFFFFFFF if width == 64 else 0xFFFFFFFF)
    rks = aes_ctr.key_expand(key)
    masks = np.zeros((11, 128), dtype=np.uint64)
    for r, rk in enumerate(rks):
        for i in range(128):
            if (rk[i // 8] >> (i % 8)) & 1:
                masks[r, i] = full
    return masks


def _nonce_words(nonce: bytes, width: int) -> np.ndarray:
    full = _U64(0xFFFFFFFFFFFFFFFF if width == 64 else 0xFFFFFFFF)
    words = np.zeros(96, dtype=np.uint64)
    for i in range(96):
        if (nonce[i // 8] >> (i % 8)) & 1:
            words[i] = full
    return words


def aes_ctr_sliced_regs(
    key: bytes, nonce: bytes, nblocks: int, start_block: int = 0, width: int = 64
) -> tuple[np.ndarray, int]:
    """Raw sliced output registers per batch, plus a fold checksum."""
    if start_block + nblocks > aes_ctr.COUNTER_SPACE:
        raise aes_ctr.CounterExhaustedError(
            f"{start_block + nblocks} blocks exceed the 2**32 counter space"
        )
    nbatches = (nblocks + width - 1) // width
    out = np.zeros((nbatches, 128), dtype=np.uint64)
    checksum = _aes_ctr_sliced_loop(
        _aes_rk_masks(key, width), _nonce_words(nonce, width),
        start_block, out, width,
    )
    return out, int(checksum)


def aes_regs_to_blocks(out_regs: np.ndarray, width: int) -> np.ndarray:
    """Transpose raw register batches back to 16-byte blocks (lane order)."""
    nbatches = out_regs.shape[0]
    lanes = np.arange(width, dtype=np.uint64)
    blocks = np.zeros((nbatches, width, 16), dtype=np.uint8)
    for i in range(128):
        byte, bit = divmod(i, 8)
        col = (out_regs[:, i: i + 1] >> lanes) & _U64(1)
        blocks[:, :, byte] |= (col << _U64(bit)).astype(np.uint8)
    return blocks.reshape(nbatches * width, 16)


def aes_ctr_sliced_bytes(
    key: bytes, nonce: bytes, nbytes: int, start_block: int = 0, width: int = 64
) -> bytes:
    nblocks = (nbytes + 15) // 16
    regs, _ = aes_ctr_sliced_regs(key, nonce, nblocks, start_block, width)
    return aes_regs_to_blocks(regs, width).tobytes()[:nbytes]


def aes_ctr_scalar_bytes(
    key: bytes, nonce: bytes, nbytes: int, start_block: int = 0
) -> bytes:
    """Byte-serial non-table scalar CTR keystream (compiled)."""
    nblocks = (nbytes + 15) // 16
    if start_block + nblocks > aes_ctr.COUNTER_SPACE:
        raise aes_ctr.CounterExhaustedError(
            f"{start_block + nblocks} blocks exceed the 2**32 counter space"
        )
    rks = aes_ctr.key_expand(key)
    rk_bits = np.array([list(rk) for rk in rks], dtype=np.uint8)
    out = np.zeros(nblocks * 16, dtype=np.uint8)
    _aes_ctr_scalar_loop(
        rk_bits, np.frombuffer(nonce, dtype=np.uint8), start_block, out
    )
    return out.tobytes()[:nbytes]


# --- lane extraction helpers ---


def words_to_lane_bits(words: np.ndarray, lane: int) -> np.ndarray:
    return ((words >> _U64(lane)) & _U64(1)).astype(np.uint8)


def words_to_lane_bytes(
    words: np.ndarray, lane: int, bit_order: str = "msb"
) -> bytes:
    bits = words_to_lane_bits(words, lane)
    if bit_order == "msb":
        return np.packbits(bits).tobytes()
    if bit_order == "lsb":
        return np.packbits(bits, bitorder="little").tobytes()
    raise ValueError(f"unknown bit order {bit_order!r}")


def words_lane_major_bytes(
    words: np.ndarray, lanes: int, bit_order: str = "msb"
) -> bytes:
    """All of lane 0's bytes, then lane 1's, ... (the documented order)."""
    return b"".join(
        words_to_lane_bytes(words, j, bit_order) for j in range(lanes)
    )
