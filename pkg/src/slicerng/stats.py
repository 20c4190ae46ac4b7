"""Statistical randomness tests (NIST SP 800-22 subset) and suite runner.

Nine tests are implemented: Frequency, BlockFrequency, CumulativeSums
(two directions), Runs, LongestRun, Rank, Serial (two p-values),
ApproximateEntropy and LinearComplexity. The spectral (FFT) and template
tests are intentionally not implemented; suite reports list them as
delegated to the official sts battery so coverage stays honest.

Per stream, a test yields one TestReport with one or two p-values; a
stream passes a row iff the p-value is >= alpha. Suite verdicts follow
the standard methodology: the pass proportion must fall inside
p_hat +/- 3*sqrt(p_hat*(1-p_hat)/s) with p_hat = 1 - alpha, and the
p-values across streams must look uniform (chi-square over ten bins,
threshold 1e-4).
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .special import igamc, erfc, normal_cdf

DELEGATED_TESTS = ("Fft", "NonOverlappingTemplate", "OverlappingTemplate")
UNIFORMITY_THRESHOLD = 1e-4


class StreamTooShortError(ValueError):
    def __init__(self, test: str, n: int, minimum: int):
        self.minimum = minimum
        super().__init__(f"{test} requires at least {minimum} bits, got {n}")


@dataclass(frozen=True)
class BitStream:
    """A packed bit sequence; bit i is bit (7 - i%8) of byte i//8."""

    data: bytes
    n: int

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError("stream must contain at least one bit")
        if self.n > 8 * len(self.data):
            raise ValueError("length exceeds packed data")

    @classmethod
    def from_bytes(cls, data: bytes, n: int | None = None) -> "BitStream":
        return cls(bytes(data), 8 * len(data) if n is None else n)

    @classmethod
    def from_bits(cls, bits) -> "BitStream":
        arr = np.asarray(list(bits), dtype=np.uint8)
        return cls(np.packbits(arr).tobytes(), len(arr))

    @classmethod
    def from_hex(cls, text: str, n: int | None = None) -> "BitStream":
        return cls.from_bytes(bytes.fromhex(text.strip()), n)

    def bits(self) -> np.ndarray:
        return np.unpackbits(np.frombuffer(self.data, dtype=np.uint8))[: self.n]

    def as_int_lsb_first(self) -> int:
        """The sequence as an int with bit i of the stream at bit i."""
        packed = np.packbits(self.bits(), bitorder="little").tobytes()
        return int.from_bytes(packed, "little")


@dataclass(frozen=True)
class TestReport:
    """Outcome of one test on one stream."""

    name: str
    p_values: tuple[float, ...]
    alpha: float
    details: dict = field(default_factory=dict)

    @property
    def p_value(self) -> float:
        return min(self.p_values)

    @property
    def passed(self) -> bool:
        return self.p_value >= self.alpha


def _require(test: str, n: int, minimum: int) -> None:
    if n < minimum:
        raise StreamTooShortError(test, n, minimum)


def frequency_test(s: BitStream, alpha: float = 0.01) -> TestReport:
    """Monobit balance of ones against zeros."""
    _require("Frequency", s.n, 100)
    ones = int(np.count_nonzero(s.bits()))
    s_n = 2 * ones - s.n
    s_obs = abs(s_n) / math.sqrt(s.n)
    p = erfc(s_obs / math.sqrt(2.0))
    return TestReport("Frequency", (p,), alpha, {"S_n": s_n})


def block_frequency_test(
    s: BitStream, block_len: int = 128, alpha: float = 0.01
) -> TestReport:
    """Proportion of ones within fixed-length blocks."""
    _require("BlockFrequency", s.n, 100)
    if block_len < 2 or block_len > s.n:
        raise ValueError("block length must be in [2, n]")
    nblocks = s.n // block_len
    bits = s.bits()[: nblocks * block_len]
    pi = bits.reshape(nblocks, block_len).mean(axis=1)
    chi2 = 4.0 * block_len * float(np.sum((pi - 0.5) ** 2))
    p = igamc(nblocks / 2.0, chi2 / 2.0)
    return TestReport("BlockFrequency", (p,), alpha, {"chi2": chi2, "N": nblocks})


def runs_test(s: BitStream, alpha: float = 0.01) -> TestReport:
    """Total number of uninterrupted runs of identical bits."""
    _require("Runs", s.n, 100)
    bits = s.bits()
    pi = float(bits.mean())
    tau = 2.0 / math.sqrt(s.n)
    if abs(pi - 0.5) >= tau:
        # frequency precondition failed; the test is decided without running
        return TestReport("Runs", (0.0,), alpha, {"pi": pi, "gated": True})
    v_obs = int(np.count_nonzero(bits[1:] != bits[:-1])) + 1
    num = abs(v_obs - 2.0 * s.n * pi * (1.0 - pi))
    den = 2.0 * math.sqrt(2.0 * s.n) * pi * (1.0 - pi)
    p = erfc(num / den)
    return TestReport("Runs", (p,), alpha, {"V_n": v_obs, "pi": pi})


_LONGEST_RUN_REGIMES = (
    # (min n, M, categories' upper run bounds, probabilities)
    (750000, 10000, (10, 11, 12, 13, 14, 15), (0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727)),
    (6272, 128, (4, 5, 6, 7, 8), (0.1174, 0.2430, 0.2493, 0.1752, 0.1027, 0.1124)),
    (128, 8, (1, 2, 3), (0.2148, 0.3672, 0.2305, 0.1875)),
)


def _longest_one_run(block_int: int) -> int:
    length = 0
    v = block_int
    while v:
        v &= v << 1
        length += 1
    return length


def longest_run_test(s: BitStream, alpha: float = 0.01) -> TestReport:
    """Distribution of the longest run of ones per block."""
    _require("LongestRun", s.n, 128)
    for min_n, m, bounds, probs in _LONGEST_RUN_REGIMES:
        if s.n >= min_n:
            break
    nblocks = s.n // m
    bits = s.bits()[: nblocks * m]
    packed = np.packbits(bits.reshape(nblocks, m), axis=1, bitorder="little")
    counts = [0] * len(probs)
    for row in packed:
        run = _longest_one_run(int.from_bytes(row.tobytes(), "little"))
        for cat, bound in enumerate(bounds):
            if run <= bound:
                counts[cat] += 1
                break
        else:
            counts[-1] += 1
    chi2 = sum(
        (counts[i] - nblocks * probs[i]) ** 2 / (nblocks * probs[i])
        for i in range(len(probs))
    )
    p = igamc((len(probs) - 1) / 2.0, chi2 / 2.0)
    return TestReport(
        "LongestRun", (p,), alpha, {"chi2": chi2, "M": m, "nu": tuple(counts)}
    )


def _rank_gf2(rows: list[int], ncols: int) -> int:
    rank = 0
    rows = list(rows)
    nrows = len(rows)
    for col in range(ncols):
        pivot = next(
            (i for i in range(rank, nrows) if (rows[i] >> col) & 1), None
        )
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pr = rows[rank]
        for i in range(rank + 1, nrows):
            if (rows[i] >> col) & 1:
                rows[i] ^= pr
        rank += 1
        if rank == nrows:
            break
    return rank


def _rank_probabilities(size: int) -> tuple[float, float, float]:
    """P(rank = size), P(rank = size-1), P(rank <= size-2) for square GF(2)."""

    def prob(r: int) -> float:
        log2 = (r * (2 * size - r) - size * size) * math.log(2.0)
        acc = 0.0
        for i in range(r):
            acc += math.log1p(-(2.0 ** (i - size))) * 2 - math.log1p(
                -(2.0 ** (i - r))
            )
        return math.exp(log2 + acc)

    p_full = prob(size)
    p_minus1 = prob(size - 1)
    return p_full, p_minus1, 1.0 - p_full - p_minus1


def rank_test(s: BitStream, alpha: float = 0.01) -> TestReport:
    """Ranks of disjoint 32x32 binary matrices over GF(2)."""
    size = 32
    per_matrix = size * size
    _require("Rank", s.n, 38 * per_matrix)
    nmat = s.n // per_matrix
    bits = s.bits()[: nmat * per_matrix]
    packed = np.packbits(
        bits.reshape(nmat, size, size), axis=2, bitorder="little"
    )
    rows_per_matrix = packed.reshape(nmat, size, size // 8)
    f_full = f_minus1 = 0
    for mat in rows_per_matrix:
        rows = [int.from_bytes(r.tobytes(), "little") for r in mat]
        r = _rank_gf2(rows, size)
        if r == size:
            f_full += 1
        elif r == size - 1:
            f_minus1 += 1
    rest = nmat - f_full - f_minus1
    p_full, p_minus1, p_rest = _rank_probabilities(size)
    chi2 = (
        (f_full - nmat * p_full) ** 2 / (nmat * p_full)
        + (f_minus1 - nmat * p_minus1) ** 2 / (nmat * p_minus1)
        + (rest - nmat * p_rest) ** 2 / (nmat * p_rest)
    )
    p = math.exp(-chi2 / 2.0)
    return TestReport(
        "Rank", (p,), alpha, {"chi2": chi2, "F_full": f_full, "F_minus1": f_minus1}
    )


def _pattern_counts(bits: np.ndarray, m: int) -> np.ndarray:
    """Counts of all 2^m overlapping cyclic m-bit windows."""
    n = len(bits)
    augmented = np.concatenate([bits, bits[: m - 1]]) if m > 1 else bits
    weights = (1 << np.arange(m, dtype=np.int64))
    codes = np.convolve(augmented.astype(np.int64), weights, mode="valid")[:n]
    return np.bincount(codes, minlength=1 << m)


def _psi_squared(bits: np.ndarray, m: int) -> float:
    if m <= 0:
        return 0.0
    n = len(bits)
    counts = _pattern_counts(bits, m)
    return float((1 << m) / n * np.sum(counts.astype(np.float64) ** 2) - n)


def serial_test(s: BitStream, m: int = 16, alpha: float = 0.01) -> TestReport:
    """Frequencies of overlapping m-bit patterns (two p-values)."""
    if m < 2:
        raise ValueError("serial test requires m >= 2")
    _require("Serial", s.n, 1 << (m + 2))
    bits = s.bits()
    psi_m = _psi_squared(bits, m)
    psi_m1 = _psi_squared(bits, m - 1)
    psi_m2 = _psi_squared(bits, m - 2)
    d1 = psi_m - psi_m1
    d2 = psi_m - 2.0 * psi_m1 + psi_m2
    p1 = igamc(2 ** (m - 2), d1 / 2.0)
    p2 = igamc(2 ** (m - 3), d2 / 2.0) if m > 2 else igamc(0.5, d2 / 2.0)
    return TestReport(
        "Serial", (p1, p2), alpha, {"del1": d1, "del2": d2, "m": m}
    )


def approximate_entropy_test(
    s: BitStream, m: int = 10, alpha: float = 0.01
) -> TestReport:
    """Compares frequencies of m- and (m+1)-bit overlapping patterns."""
    if m < 1:
        raise ValueError("approximate entropy requires m >= 1")
    _require("ApproximateEntropy", s.n, max(64, 1 << (m + 2)))
    bits = s.bits()
    n = s.n

    def phi(mm: int) -> float:
        counts = _pattern_counts(bits, mm).astype(np.float64)
        nz = counts[counts > 0] / n
        return float(np.sum(nz * np.log(nz)))

    apen = phi(m) - phi(m + 1)
    chi2 = 2.0 * n * (math.log(2.0) - apen)
    p = igamc(2 ** (m - 1), chi2 / 2.0)
    return TestReport(
        "ApproximateEntropy", (p,), alpha, {"ApEn": apen, "chi2": chi2, "m": m}
    )


def cumulative_sums_test(
    s: BitStream, direction: str = "forward", alpha: float = 0.01
) -> TestReport:
    """Maximal excursion of the +/-1 random walk."""
    _require("CumulativeSums", s.n, 100)
    if direction not in ("forward", "reverse"):
        raise ValueError(f"unknown direction {direction!r}")
    steps = 2 * s.bits().astype(np.int64) - 1
    if direction == "reverse":
        steps = steps[::-1]
    walk = np.cumsum(steps)
    z = int(np.max(np.abs(walk)))
    n = s.n
    sqrt_n = math.sqrt(n)
    ratio = n // z  # n/z truncated, as in the reference summation bounds

    def trunc4(v: int) -> int:
        return -((-v) // 4) if v < 0 else v // 4

    def phi_range(lo: int, hi: int, shift: int) -> float:
        total = 0.0
        for k in range(lo, hi + 1):
            total += normal_cdf((4 * k + shift) * z / sqrt_n) - normal_cdf(
                (4 * k + shift - 2) * z / sqrt_n
            )
        return total

    sum1 = phi_range(trunc4(-ratio + 1), trunc4(ratio - 1), 1)
    sum2 = phi_range(trunc4(-ratio - 3), trunc4(ratio - 1), 3)
    p = 1.0 - sum1 + sum2
    return TestReport(
        "CumulativeSums", (p,), alpha, {"z": z, "direction": direction}
    )


def linear_complexity(seq_int: int, length: int) -> int:
    """Length of the shortest LFSR generating the sequence.

    Incremental Berlekamp-Massey: the whole-sequence products s*B and s*C
    are maintained as integers so the discrepancy falls out of a single
    bit probe per step instead of an inner loop.
    """
    sb = sc = seq_int
    deg = 0
    m = 0
    for pos in range(length):
        disc = (sc >> m) & 1
        m += 1
        if disc:
            sc >>= m
            m = 0
            if 2 * deg <= pos:
                sb, sc = sc, sb
                deg = pos + 1 - deg
            sc ^= sb
    return deg


_LC_PROBS = (0.010417, 0.03125, 0.125, 0.5, 0.25, 0.0625, 0.020833)


def linear_complexity_test(
    s: BitStream, block_len: int = 500, alpha: float = 0.01
) -> TestReport:
    """Berlekamp-Massey linear complexity of fixed-length blocks."""
    if not 500 <= block_len <= 5000:
        raise ValueError("block length must be in [500, 5000]")
    _require("LinearComplexity", s.n, 200 * block_len)
    nblocks = s.n // block_len
    bits = s.bits()[: nblocks * block_len]
    m = block_len
    mu = (
        m / 2.0
        + (9.0 + (-1.0) ** (m + 1)) / 36.0
        - (m / 3.0 + 2.0 / 9.0) * 2.0 ** -m  # underflows harmlessly for big m
    )
    sign = 1.0 if m % 2 == 0 else -1.0
    nu = [0] * 7
    for b in range(nblocks):
        chunk = bits[b * m: (b + 1) * m]
        seq = int.from_bytes(
            np.packbits(chunk, bitorder="little").tobytes(), "little"
        )
        t = sign * (linear_complexity(seq, m) - mu) + 2.0 / 9.0
        if t <= -2.5:
            nu[0] += 1
        elif t > 2.5:
            nu[6] += 1
        else:
            nu[int(math.floor(t + 2.5)) + 1] += 1
    chi2 = sum(
        (nu[i] - nblocks * _LC_PROBS[i]) ** 2 / (nblocks * _LC_PROBS[i])
        for i in range(7)
    )
    p = igamc(3.0, chi2 / 2.0)
    return TestReport(
        "LinearComplexity", (p,), alpha, {"chi2": chi2, "nu": tuple(nu)}
    )


@dataclass(frozen=True)
class SuiteParams:
    """Per-test parameters (defaults follow the sts choices for 1 Mbit)."""

    block_frequency_len: int = 128
    serial_m: int = 16
    apen_m: int = 10
    linear_complexity_len: int = 500


def evaluate_stream(
    s: BitStream, alpha: float = 0.01, params: SuiteParams = SuiteParams()
) -> list[TestReport]:
    """All nine tests on one stream, in the suite's fixed row order."""
    return [
        frequency_test(s, alpha),
        block_frequency_test(s, params.block_frequency_len, alpha),
        cumulative_sums_test(s, "forward", alpha),
        cumulative_sums_test(s, "reverse", alpha),
        runs_test(s, alpha),
        longest_run_test(s, alpha),
        rank_test(s, alpha),
        serial_test(s, params.serial_m, alpha),
        approximate_entropy_test(s, params.apen_m, alpha),
        linear_complexity_test(s, params.linear_complexity_len, alpha),
    ]


@dataclass(frozen=True)
class SuiteRow:
    name: str
    p_values: tuple[float, ...]  # one per stream
    alpha: float

    @property
    def proportion(self) -> float:
        return sum(1 for p in self.p_values if p >= self.alpha) / len(self.p_values)

    @property
    def proportion_interval(self) -> tuple[float, float]:
        p_hat = 1.0 - self.alpha
        margin = 3.0 * math.sqrt(p_hat * self.alpha / len(self.p_values))
        return max(0.0, p_hat - margin), min(1.0, p_hat + margin)

    @property
    def uniformity_p(self) -> float:
        counts, _ = np.histogram(self.p_values, bins=10, range=(0.0, 1.0))
        expected = len(self.p_values) / 10.0
        chi2 = float(np.sum((counts - expected) ** 2 / expected))
        return igamc(4.5, chi2 / 2.0)

    @property
    def mean_p(self) -> float:
        return float(np.mean(self.p_values))

    @property
    def passed(self) -> bool:
        low, _ = self.proportion_interval
        return self.proportion >= low and self.uniformity_p >= UNIFORMITY_THRESHOLD


@dataclass(frozen=True)
class SuiteResult:
    rows: tuple[SuiteRow, ...]
    nstreams: int
    alpha: float
    delegated: tuple[str, ...] = DELEGATED_TESTS

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)

    def to_text(self) -> str:
        lines = [
            f"{'Test':24s} {'P-value':>10s} {'Proportion':>11s}  Result",
            "-" * 58,
        ]
        for row in self.rows:
            verdict = "Success" if row.passed else "Failure"
            lines.append(
                f"{row.name:24s} {row.uniformity_p:10.6f} {row.proportion:11.4f}  {verdict}"
            )
        for name in self.delegated:
            lines.append(f"{name:24s} {'-':>10s} {'-':>11s}  delegated: run official sts")
        lines.append("-" * 58)
        lines.append(
            f"streams={self.nstreams} alpha={self.alpha} "
            f"verdict={'PASS' if self.passed else 'FAIL'}"
        )
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(
            {
                "nstreams": self.nstreams,
                "alpha": self.alpha,
                "delegated": list(self.delegated),
                "passed": self.passed,
                "rows": [
                    {
                        "name": row.name,
                        "proportion": row.proportion,
                        "proportion_low": row.proportion_interval[0],
                        "uniformity_p": row.uniformity_p,
                        "mean_p": row.mean_p,
                        "passed": row.passed,
                        "p_values": list(row.p_values),
                    }
                    for row in self.rows
                ],
            },
            indent=2,
        )


def run_suite(
    streams,
    alpha: float = 0.01,
    params: SuiteParams = SuiteParams(),
    workers: int = 1,
) -> SuiteResult:
    """Evaluate every stream and aggregate per-row pass proportions."""
    streams = list(streams)
    if len(streams) < 2:
        raise ValueError("suite requires at least 2 streams")

    def job(s: BitStream):
        return evaluate_stream(s, alpha, params)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_stream = list(pool.map(job, streams))
    else:
        per_stream = [job(s) for s in streams]

    # expand reports into aligned rows (Serial contributes two)
    names: list[str] = []
    columns: list[list[float]] = []
    for reports in per_stream:
        idx = 0
        for rep in reports:
            labels = (
                [rep.name]
                if len(rep.p_values) == 1
                else [f"{rep.name}-{i + 1}" for i in range(len(rep.p_values))]
            )
            if rep.name == "CumulativeSums":
                labels = [f"CumulativeSums-{rep.details['direction']}"]
            for label, p in zip(labels, rep.p_values):
                if len(names) <= idx:
                    names.append(label)
                    columns.append([])
                columns[idx].append(p)
                idx += 1
    rows = tuple(
        SuiteRow(name, tuple(col), alpha) for name, col in zip(names, columns)
    )
    return SuiteResult(rows, len(streams), alpha)
