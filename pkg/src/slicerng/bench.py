"""Throughput harness comparing bitsliced against naive generation.

Measurement protocol: warmup runs first (also triggering JIT), then the
median wall time of the repeat runs. Before any timing, each engine's
first 4 KiB are checked against the pure-Python scalar reference - a
result is only reported for engines that generate correct streams.

Timing covers the keystream loop itself: lane-seed derivation,
initialisation and transposition of final output stay outside the timed
region (an end_to_end flag moves output transposition inside for the
sliced engines).

Implementation kinds:

* "naive"  - one instance, bit-vector state, one bit per clock
             (byte-serial gate-network scalar for AES);
* "packed" - one instance, row-major word-packed registers (reported for
             context; a much stronger baseline than "naive");
* "sliced" - W instances in column-major layout, word-wide logic.
"""

from __future__ import annotations

import json
import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .grain import GrainScalar
from .mickey import MickeyScalar
from .aes_ctr import ctr_keystream
from .seedgen import MasterSeed, derive_lane_material

ALGORITHMS = ("mickey", "grain", "aes-ctr")
IMPL_KINDS = ("naive", "packed", "sliced")
MIN_BYTES = 1 << 20
MIN_REPEATS = 3
GATE_BYTES = 4096

DEFAULT_SEED = bytes.fromhex(
    "9d36caba27d1194c0a30e8dbcecdbc0e75a7dc0d0ec31a4a94b4e0e327198d8e"
)


class BenchConfigError(ValueError):
    pass


class CorrectnessGateError(AssertionError):
    """An engine failed the pre-timing output equality check."""


@dataclass(frozen=True)
class BenchResult:
    algorithm: str
    impl: str
    width: int
    nbytes: int
    seconds: float
    runs: tuple[float, ...] = field(default_factory=tuple)
    speedup_vs_naive: float | None = None

    def __post_init__(self):
        if self.nbytes <= 0 or self.seconds <= 0:
            raise ValueError("bytes and time must be positive")

    @property
    def gbit_per_s(self) -> float:
        return self.nbytes * 8 / self.seconds / 1e9

    def to_record(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "impl": self.impl,
            "width": self.width,
            "nbytes": self.nbytes,
            "seconds": self.seconds,
            "gbit_per_s": self.gbit_per_s,
            "runs": list(self.runs),
            "speedup_vs_naive": self.speedup_vs_naive,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "BenchResult":
        return cls(
            rec["algorithm"], rec["impl"], rec["width"], rec["nbytes"],
            rec["seconds"], tuple(rec.get("runs", ())),
            rec.get("speedup_vs_naive"),
        )


def _lane_materials(algo: str, width: int):
    master = MasterSeed(DEFAULT_SEED, algo, lanes=width)
    return [derive_lane_material(master, j) for j in range(width)]


def _reference_prefix(algo: str, material, nbytes: int) -> bytes:
    if algo == "mickey":
        return MickeyScalar.from_key_iv(material).keystream_bytes(nbytes)
    if algo == "grain":
        return GrainScalar.from_key_iv(material).keystream_bytes(nbytes)
    key, nonce = material
    return ctr_keystream(key, nonce, nbytes, engine="scalar")


def _gate(algo: str, impl: str, width: int) -> None:
    """Compare a 4 KiB prefix of the engine's stream with the reference."""
    mats = _lane_materials(algo, width)
    if algo == "aes-ctr":
        key, nonce = mats[0]
        if impl == "naive":
            got = kernels.aes_ctr_scalar_bytes(key, nonce, GATE_BYTES)
        else:
            got = kernels.aes_ctr_sliced_bytes(key, nonce, GATE_BYTES, width=width)
        expected = _reference_prefix(algo, mats[0], GATE_BYTES)
    elif impl == "sliced":
        fn = (
            kernels.mickey_sliced_words
            if algo == "mickey"
            else kernels.grain_sliced_words
        )
        words = fn(mats, GATE_BYTES * 8, width)  # one bit per lane per clock
        got = kernels.words_to_lane_bytes(words, 0)
        expected = _reference_prefix(algo, mats[0], GATE_BYTES)
    else:
        fn = {
            ("mickey", "naive"): kernels.mickey_naive_bitwise_bytes,
            ("mickey", "packed"): kernels.mickey_packed_bytes,
            ("grain", "naive"): kernels.grain_naive_bitwise_bytes,
            ("grain", "packed"): kernels.grain_packed_bytes,
        }[(algo, impl)]
        got = fn(mats[0], GATE_BYTES)
        expected = _reference_prefix(algo, mats[0], GATE_BYTES)
    if got != expected:
        raise CorrectnessGateError(
            f"{algo}/{impl} failed the 4 KiB correctness gate"
        )


def _timed_run(algo: str, impl: str, nbytes: int, width: int,
               end_to_end: bool) -> float:
    mats = _lane_materials(algo, width)
    if algo == "aes-ctr":
        key, nonce = mats[0]
        nblocks = nbytes // 16
        if impl == "naive":
            t0 = time.perf_counter()
            out = kernels.aes_ctr_scalar_bytes(key, nonce, nbytes)
            dt = time.perf_counter() - t0
            _consume(out)
        elif end_to_end:
            t0 = time.perf_counter()
            out = kernels.aes_ctr_sliced_bytes(key, nonce, nbytes, width=width)
            dt = time.perf_counter() - t0
            _consume(out)
        else:
            rk = kernels._aes_rk_masks(key, width)
            nw = kernels._nonce_words(nonce, width)
            nbatches = (nblocks + width - 1) // width
            regs = np.zeros((nbatches, 128), dtype=np.uint64)
            t0 = time.perf_counter()
            checksum = kernels._aes_ctr_sliced_loop(rk, nw, 0, regs, width)
            dt = time.perf_counter() - t0
            _consume(checksum)
        return dt
    if impl == "sliced":
        nclocks = nbytes * 8 // width
        if algo == "mickey":
            from .mickey import MickeySliced

            eng = MickeySliced.from_key_ivs(mats, width)
            r = np.array(eng.rregs, dtype=np.uint64)
            s = np.array(eng.sregs, dtype=np.uint64)
            out = np.zeros(nclocks + nclocks % 2, dtype=np.uint64)
            t0 = time.perf_counter()
            kernels._mickey_sliced_loop(
                r, s, out, kernels._RT_M, kernels._C0_M, kernels._C1_M,
                kernels._FB0_M, kernels._FB1_M,
            )
            dt = time.perf_counter() - t0
        else:
            from .grain import GrainSliced

            eng = GrainSliced.from_key_ivs(mats, width)
            b = np.zeros(160, dtype=np.uint64)
            sreg = np.zeros(160, dtype=np.uint64)
            b[:80] = eng.b
            sreg[:80] = eng.s
            out = np.zeros(nclocks, dtype=np.uint64)
            t0 = time.perf_counter()
            kernels._grain_sliced_loop(b, sreg, out)
            dt = time.perf_counter() - t0
        if end_to_end:
            t0 = time.perf_counter()
            _consume(kernels.words_lane_major_bytes(out, width))
            dt += time.perf_counter() - t0
        else:
            _consume(int(out[-1]))
        return dt
    fn = {
        ("mickey", "naive"): kernels.mickey_naive_bitwise_bytes,
        ("mickey", "packed"): kernels.mickey_packed_bytes,
        ("grain", "naive"): kernels.grain_naive_bitwise_bytes,
        ("grain", "packed"): kernels.grain_packed_bytes,
    }[(algo, impl)]
    t0 = time.perf_counter()
    out = fn(mats[0], nbytes)
    dt = time.perf_counter() - t0
    _consume(out)
    return dt


_sink = 0


def _consume(value) -> None:
    """Keep a live reference so generation cannot be optimised away."""
    global _sink
    if isinstance(value, (bytes, bytearray)):
        _sink ^= value[0] ^ value[-1]
    else:
        _sink ^= int(value) & 0xFF


def measure(
    algo: str,
    impl: str,
    nbytes: int,
    warmup: int = 1,
    repeats: int = 5,
    width: int = 64,
    end_to_end: bool = False,
    workers: int = 1,
) -> BenchResult:
    """Median-of-repeats throughput for one engine configuration.

    With workers > 1, each worker thread runs an independent generator
    over nbytes/workers; the kernels release the GIL so throughput sums.
    """
    if algo not in ALGORITHMS:
        raise BenchConfigError(f"unknown algorithm {algo!r}")
    if impl not in IMPL_KINDS:
        raise BenchConfigError(f"unknown impl kind {impl!r}")
    if algo == "aes-ctr" and impl == "packed":
        raise BenchConfigError("aes-ctr has no packed scalar variant")
    if nbytes < MIN_BYTES:
        raise BenchConfigError(
            f"nbytes must be at least {MIN_BYTES} (timing noise floor)"
        )
    if repeats < MIN_REPEATS:
        raise BenchConfigError(f"repeats must be at least {MIN_REPEATS}")
    if workers < 1:
        raise BenchConfigError("workers must be at least 1")
    _gate(algo, impl, width)
    for _ in range(warmup):
        _timed_run(algo, impl, MIN_BYTES, width, end_to_end)
    if workers == 1:
        runs = tuple(
            _timed_run(algo, impl, nbytes, width, end_to_end)
            for _ in range(repeats)
        )
    else:
        from concurrent.futures import ThreadPoolExecutor

        per_worker = max(MIN_BYTES, nbytes // workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = []
            for _ in range(repeats):
                t0 = time.perf_counter()
                list(
                    pool.map(
                        lambda _: _timed_run(algo, impl, per_worker, width,
                                             end_to_end),
                        range(workers),
                    )
                )
                runs.append(time.perf_counter() - t0)
            nbytes = per_worker * workers
            runs = tuple(runs)
    return BenchResult(algo, impl, width, nbytes, statistics.median(runs), runs)


def compare_suite(
    nbytes: int = 1 << 26,
    repeats: int = 5,
    width: int = 64,
    algorithms=ALGORITHMS,
    impls=("naive", "sliced"),
    naive_nbytes: int | None = None,
    end_to_end: bool = False,
) -> list[BenchResult]:
    """One row per (algorithm x impl kind), with speedups vs naive."""
    results = []
    for algo in algorithms:
        naive_time_per_byte = None
        for impl in impls:
            size = nbytes if impl == "sliced" else (naive_nbytes or nbytes)
            res = measure(algo, impl, size, repeats=repeats, width=width,
                          end_to_end=end_to_end)
            if impl == "naive":
                naive_time_per_byte = res.seconds / res.nbytes
            elif naive_time_per_byte is not None:
                ratio = naive_time_per_byte / (res.seconds / res.nbytes)
                res = BenchResult(
                    res.algorithm, res.impl, res.width, res.nbytes,
                    res.seconds, res.runs, speedup_vs_naive=ratio,
                )
            results.append(res)
    return results


def format_table(results: list[BenchResult]) -> str:
    lines = [
        f"{'algorithm':10s} {'impl':8s} {'W':>3s} {'MiB':>8s} "
        f"{'Gbit/s':>10s} {'speedup':>9s}",
        "-" * 55,
    ]
    for r in results:
        speedup = f"{r.speedup_vs_naive:8.1f}x" if r.speedup_vs_naive else "        -"
        lines.append(
            f"{r.algorithm:10s} {r.impl:8s} {r.width:3d} "
            f"{r.nbytes / (1 << 20):8.1f} {r.gbit_per_s:10.3f} {speedup}"
        )
    ranked = sorted(
        (r for r in results if r.impl == "sliced"),
        key=lambda r: r.gbit_per_s,
        reverse=True,
    )
    if ranked:
        order = " > ".join(r.algorithm for r in ranked)
        lines.append(f"sliced throughput ranking: {order}")
    return "\n".join(lines)


def write_results(results: list[BenchResult], path) -> None:
    with open(path, "w") as fh:
        json.dump({"results": [r.to_record() for r in results]}, fh, indent=2)


def read_results(path) -> list[BenchResult]:
    with open(path) as fh:
        data = json.load(fh)
    return [BenchResult.from_record(rec) for rec in data["results"]]
