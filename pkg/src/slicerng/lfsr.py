"""Generic LFSR engines, bit-serial and bitsliced.

An n-bit register is indexed 0..n-1 with index 0 as the output end;
stepping moves content toward index 0. The feedback polynomial
x^n + sum(x^t for t in taps) is described by its tap exponent set, which
must contain both 0 and n-1 (non-degenerate at both ends).

Fibonacci stepping XORs the tapped bits into the vacated top position;
Galois stepping XOR-injects the outgoing bit during the shift at the
mirrored positions n-1-t, which makes both configurations realise the
same feedback polynomial (and hence the same period structure). The
sliced engine advances W independent lanes per step using only k
full-width XORs plus origin bookkeeping - no bit-level shifts.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .bitslab import LANE_WIDTHS, SlicedBlock

FIBONACCI = "fibonacci"
GALOIS = "galois"

#: Primitive feedback tap sets (both end taps set), one per supported degree.
#: Validated by the brute-force period and polynomial-order tests.
PRIMITIVE_TAPS = {
    4: frozenset({0, 3}),
    8: frozenset({0, 1, 2, 7}),
    16: frozenset({0, 4, 13, 15}),
    24: frozenset({0, 17, 22, 23}),
}

PERIOD_DEGREE_LIMIT = 24


@dataclass(frozen=True)
class FeedbackSpec:
    """Feedback description: degree n, tap exponent set, configuration."""

    n: int
    taps: frozenset[int]
    config: str = FIBONACCI

    def __post_init__(self):
        object.__setattr__(self, "taps", frozenset(self.taps))
        if self.n < 2:
            raise ValueError("degree must be at least 2")
        if not self.taps:
            raise ValueError("tap set must be non-empty")
        if any(t < 0 or t >= self.n for t in self.taps):
            raise ValueError(f"taps must lie in [0, {self.n})")
        if 0 not in self.taps or self.n - 1 not in self.taps:
            raise ValueError("taps must include both 0 and n-1")
        if self.config not in (FIBONACCI, GALOIS):
            raise ValueError(f"unknown config {self.config!r}")

    @property
    def k(self) -> int:
        return len(self.taps)

    def galois_inject_positions(self) -> tuple[int, ...]:
        """Mirrored injection points realising this polynomial in Galois form."""
        return tuple(sorted(self.n - 1 - t for t in self.taps))

    def polynomial_text(self) -> str:
        terms = [f"x^{self.n}"]
        for t in sorted(self.taps, reverse=True):
            terms.append("1" if t == 0 else f"x^{t}")
        return "+".join(terms)


_TAPLIST_RE = re.compile(r"^\{(\d+(?:,\d+)*)\};n=(\d+)$")


def parse_spec(text: str, config: str = FIBONACCI) -> FeedbackSpec:
    """Parse "x^4+x^3+1" or "{0,3};n=4" into a FeedbackSpec."""
    text = text.strip().replace(" ", "").lower()
    m = _TAPLIST_RE.match(text)
    if m:
        taps = frozenset(int(t) for t in m.group(1).split(","))
        return FeedbackSpec(int(m.group(2)), taps, config)
    if "x" in text:
        exps = []
        for term in text.split("+"):
            if term == "1":
                exps.append(0)
            elif term == "x":
                exps.append(1)
            elif term.startswith("x^"):
                exps.append(int(term[2:]))
            else:
                raise ValueError(f"bad polynomial term {term!r}")
        n = max(exps)
        taps = frozenset(e for e in exps if e != n)
        return FeedbackSpec(n, taps, config)
    raise ValueError(f"unrecognised feedback spec {text!r}")


class ScalarLfsr:
    """Bit-serial reference LFSR over a list of 0/1 state bits."""

    def __init__(self, spec: FeedbackSpec, state):
        self.spec = spec
        state = list(state)
        if len(state) != spec.n:
            raise ValueError(f"state must have {spec.n} bits")
        self.state = state

    @classmethod
    def from_seed(cls, spec: FeedbackSpec, seed: int) -> "ScalarLfsr":
        return cls(spec, [(seed >> i) & 1 for i in range(spec.n)])

    def step(self) -> int:
        """Advance one clock; returns the emitted bit."""
        st = self.state
        out = st[0]
        if self.spec.config == FIBONACCI:
            fb = 0
            for t in self.spec.taps:
                fb ^= st[t]
            st = st[1:] + [fb]
        else:
            st = st[1:] + [0]
            if out:
                for t in self.spec.galois_inject_positions():
                    st[t] ^= 1
        self.state = st
        return out

    def run(self, count: int) -> list[int]:
        return [self.step() for _ in range(count)]


class SlicedLfsr:
    """W parallel LFSR lanes sharing one FeedbackSpec, column-major state.

    Register storage is a ring buffer: one step bumps the origin instead
    of moving any word, and the feedback costs k-1 (Fibonacci) or k
    (Galois) full-width XORs. xor_ops counts every word XOR executed.
    """

    def __init__(self, spec: FeedbackSpec, block: SlicedBlock):
        if block.depth != spec.n:
            raise ValueError(f"sliced state must have {spec.n} registers")
        self.spec = spec
        self.width = block.width
        self._regs = list(block.registers())
        self._base = 0
        self.xor_ops = 0

    @classmethod
    def from_seeds(cls, spec: FeedbackSpec, seeds, width: int = 64) -> "SlicedLfsr":
        if width not in LANE_WIDTHS:
            raise ValueError(f"lane width must be one of {LANE_WIDTHS}")
        seeds = list(seeds)
        if len(seeds) > width:
            raise ValueError(f"{len(seeds)} seeds exceed {width} lanes")
        regs = [0] * spec.n
        for j, seed in enumerate(seeds):
            for i in range(spec.n):
                if (seed >> i) & 1:
                    regs[i] |= 1 << j
        return cls(spec, SlicedBlock(width, tuple(regs)))

    @property
    def state(self) -> SlicedBlock:
        n = self.spec.n
        regs = tuple(self._regs[(self._base + i) % n] for i in range(n))
        return SlicedBlock(self.width, regs)

    def step(self) -> int:
        """Advance all lanes one clock; returns the output word."""
        n = self.spec.n
        regs = self._regs
        base = self._base
        out = regs[base]
        if self.spec.config == FIBONACCI:
            fb = 0
            first = True
            for t in self.spec.taps:
                w = regs[(base + t) % n]
                if first:
                    fb = w
                    first = False
                else:
                    fb = fb ^ w
                    self.xor_ops += 1
            self._base = (base + 1) % n
            regs[base] = fb  # vacated slot becomes the new top register
        else:
            self._base = (base + 1) % n
            regs[base] = 0
            for t in self.spec.galois_inject_positions():
                i = (self._base + t) % n
                regs[i] = regs[i] ^ out
                self.xor_ops += 1
        return out

    def run(self, count: int) -> list[int]:
        return [self.step() for _ in range(count)]

    def xor_ops_per_step(self) -> int:
        """Word XORs one step costs; Theta(k), independent of lane width."""
        before = self.xor_ops
        self.step()
        return self.xor_ops - before


def period_bruteforce(spec: FeedbackSpec, seed: int) -> int:
    """Smallest t > 0 returning the state to its start, by direct iteration."""
    if spec.n > PERIOD_DEGREE_LIMIT:
        raise ValueError(
            f"degree {spec.n} exceeds brute-force limit {PERIOD_DEGREE_LIMIT}"
        )
    mask = (1 << spec.n) - 1
    seed &= mask
    if seed == 0:
        raise ValueError("seed must be nonzero (zero state is absorbing)")
    if spec.config == FIBONACCI:
        tap_mask = sum(1 << t for t in spec.taps)
        top = 1 << (spec.n - 1)
        state = seed
        t = 0
        while True:
            fb = _parity(state & tap_mask)
            state = (state >> 1) | (top if fb else 0)
            t += 1
            if state == seed:
                return t
    else:
        inject = sum(1 << t for t in spec.galois_inject_positions())
        state = seed
        t = 0
        while True:
            out = state & 1
            state >>= 1
            if out:
                state ^= inject
            t += 1
            if state == seed:
                return t


def _parity(v: int) -> int:
    return bin(v).count("1") & 1


# --- GF(2) polynomial arithmetic (cross-check route for periods) ---


def poly_mul_mod(a: int, b: int, p: int, n: int) -> int:
    """(a*b) mod p over GF(2), p of degree n."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if (a >> n) & 1:
            a ^= p
    return r


def poly_pow_mod(a: int, e: int, p: int, n: int) -> int:
    r = 1
    while e:
        if e & 1:
            r = poly_mul_mod(r, a, p, n)
        a = poly_mul_mod(a, a, p, n)
        e >>= 1
    return r


def _prime_factors(m: int) -> set[int]:
    out = set()
    d = 2
    while d * d <= m:
        while m % d == 0:
            out.add(d)
            m //= d
        d += 1
    if m > 1:
        out.add(m)
    return out


def polynomial_order(spec: FeedbackSpec) -> int:
    """Multiplicative order of x modulo the feedback polynomial.

    Works for reducible polynomials too: the order is extracted from an
    exponent multiple of the quotient ring's unit group (lcm of 2^d - 1
    up to degree n, times a 2-power for repeated factors). Every per-seed
    state period divides this; primitive polynomials give exactly 2^n - 1.
    """
    n = spec.n
    p = (1 << n) | sum(1 << t for t in spec.taps)
    exponent = 1 << n.bit_length()  # covers repeated-factor components
    primes = {2}
    for d in range(1, n + 1):
        m = (1 << d) - 1
        exponent = exponent * m // math.gcd(exponent, m)
        primes |= _prime_factors(m)
    if poly_pow_mod(2, exponent, p, n) != 1:
        raise ValueError("x is not invertible mod p; polynomial is degenerate")
    order = exponent
    for q in primes:
        while order % q == 0 and poly_pow_mod(2, order // q, p, n) == 1:
            order //= q
    return order


def is_primitive(spec: FeedbackSpec) -> bool:
    try:
        return polynomial_order(spec) == (1 << spec.n) - 1
    except ValueError:
        return False
