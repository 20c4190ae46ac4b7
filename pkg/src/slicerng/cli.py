"""Command-line entry point.

Subcommands: gen (emit keystream), vectors (verify test vectors), test
(statistical suite), bench (throughput harness), crc (worked example).

Exit codes: 0 success, 2 usage error (argparse), 3 vector mismatch,
4 statistical suite failure.

Output contract for gen: lane-major ordering (all of lane 0's bytes,
then lane 1's, ...), so `--impl naive` and `--impl sliced` produce
byte-identical streams for the same seed and lane count.
`--interleave bit` instead emits each clock's output word (lane j in
bit j, words little-endian), the natural sliced wire order.
"""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from . import __version__, bench, kernels, stats, vectors
from .aes_ctr import ctr_keystream
from .bitops import parse_hex
from .crc8 import CrcSpec, crc8_scalar, crc8_sliced
from .grain import GrainKeyIv, GrainScalar
from .mickey import IV_BUDGET_LOG2, MickeyKeyIv, MickeyScalar
from .seedgen import MasterSeed, derive_lane_material

log = logging.getLogger("slicerng")

EXIT_OK = 0
EXIT_VECTOR_MISMATCH = 3
EXIT_SUITE_FAILURE = 4

ALGOS = ("mickey", "grain", "aes-ctr")


def _material_for(algo: str, args, lane: int):
    if args.key is not None:
        if algo == "mickey":
            return MickeyKeyIv(parse_hex(args.key, 10, "key"),
                               parse_hex(args.iv or "", what="iv"))
        if algo == "grain":
            return GrainKeyIv(parse_hex(args.key, 10, "key"),
                              parse_hex(args.iv or "00" * 8, 8, "iv"))
        return (parse_hex(args.key, 16, "key"),
                parse_hex(args.nonce or "00" * 12, 12, "nonce"))
    seed = parse_hex(args.seed, 32, "seed")
    master = MasterSeed(seed, algo, lanes=max(args.lanes, lane + 1))
    return derive_lane_material(master, lane)


def _gen_lfsr(args, nbytes: int) -> bytes:
    from .lfsr import SlicedLfsr, parse_spec

    log.warning(
        "raw parallel LFSR lanes are not cryptographic output; mix them "
        "through a non-linear generator before sensitive use"
    )
    from .aes_ctr import AesScalarTable

    spec = parse_spec(args.spec)
    seed = parse_hex(args.seed, 32, "seed")
    expander = AesScalarTable(seed[:16])
    seeds = []
    for j in range(args.lanes):
        block = expander.encrypt_block(seed[16:28] + j.to_bytes(4, "big"))
        lane_seed = int.from_bytes(block, "big") & ((1 << spec.n) - 1)
        seeds.append(lane_seed or 1)
    width = 64 if args.lanes > 32 else 32
    eng = SlicedLfsr.from_seeds(spec, seeds, width=width)
    per_lane = nbytes // args.lanes
    words = np.array(eng.run(per_lane * 8), dtype=np.uint64)
    return b"".join(
        kernels.words_to_lane_bytes(words, j) for j in range(args.lanes)
    )


def _gen_lane_stream(algo: str, material, nbytes: int, impl: str) -> bytes:
    if algo == "aes-ctr":
        key, nonce = material
        if impl == "sliced":
            return kernels.aes_ctr_sliced_bytes(key, nonce, nbytes)
        return kernels.aes_ctr_scalar_bytes(key, nonce, nbytes)
    naive = {
        "mickey": kernels.mickey_naive_bitwise_bytes,
        "grain": kernels.grain_naive_bitwise_bytes,
    }[algo]
    if impl == "naive":
        return naive(material, nbytes)
    sliced = {
        "mickey": kernels.mickey_sliced_words,
        "grain": kernels.grain_sliced_words,
    }[algo]
    words = sliced([material], nbytes * 8)
    return kernels.words_to_lane_bytes(words, 0)


def cmd_gen(args) -> int:
    nbytes = args.bits // 8
    if args.bits % 8:
        raise SystemExit("--bits must be a multiple of 8")
    if args.bits > (1 << IV_BUDGET_LOG2):
        log.warning(
            "request exceeds 2**%d bits for one key/IV; rotate material",
            IV_BUDGET_LOG2,
        )
    if args.algo == "lfsr":
        if not args.spec:
            raise SystemExit("--algo lfsr requires --spec (e.g. \"x^24+x^23+x^22+x^17+1\")")
        _emit(_gen_lfsr(args, nbytes), args)
        return EXIT_OK
    if args.interleave == "bit":
        if args.algo == "aes-ctr":
            raise SystemExit("--interleave bit applies to the lfsr ciphers only")
        mats = [_material_for(args.algo, args, j) for j in range(args.lanes)]
        fn = {
            "mickey": kernels.mickey_sliced_words,
            "grain": kernels.grain_sliced_words,
        }[args.algo]
        nclocks = (nbytes + 7) // 8  # one 64-bit output word per clock
        words = fn(mats, nclocks)
        if args.lanes < 64:
            words = words & np.uint64((1 << args.lanes) - 1)  # unused lanes read 0
        data = words.astype("<u8").tobytes()[:nbytes]
    else:
        per_lane = nbytes // args.lanes
        if per_lane * args.lanes != nbytes:
            raise SystemExit("--bits must split evenly across --lanes")
        chunks = []
        if args.impl == "sliced" and args.algo != "aes-ctr":
            mats = [_material_for(args.algo, args, j) for j in range(args.lanes)]
            fn = {
                "mickey": kernels.mickey_sliced_words,
                "grain": kernels.grain_sliced_words,
            }[args.algo]
            words = fn(mats, per_lane * 8)
            chunks = [
                kernels.words_to_lane_bytes(words, j) for j in range(args.lanes)
            ]
        else:
            for j in range(args.lanes):
                material = _material_for(args.algo, args, j)
                chunks.append(
                    _gen_lane_stream(args.algo, material, per_lane, args.impl)
                )
        data = b"".join(chunks)
    _emit(data, args)
    return EXIT_OK


def _emit(data: bytes, args) -> None:
    if args.out:
        mode = "w" if args.format == "hex" else "wb"
        with open(args.out, mode) as fh:
            fh.write(data.hex() if args.format == "hex" else data)
        return
    if args.format == "raw":
        if sys.stdout.isatty() and not args.force_raw:
            raise SystemExit(
                "refusing raw bytes on a terminal (use --format hex, "
                "--out FILE, or --force-raw)"
            )
        sys.stdout.buffer.write(data)
    else:
        print(data.hex())


def cmd_vectors(args) -> int:
    records = None
    if args.file:
        with open(args.file) as fh:
            records = vectors.parse_vector_file(
                fh.read(), args.algo, args.bit_order
            )
    checked, failures = vectors.verify_vectors(args.algo, records=records)
    for failure in failures:
        print(f"MISMATCH: {failure}")
    print(f"{checked} vector(s) checked, {len(failures)} mismatch(es)")
    return EXIT_VECTOR_MISMATCH if failures else EXIT_OK


def _suite_streams(args) -> list[stats.BitStream]:
    if args.files:
        streams = []
        for path in args.files:
            if path == "-":  # piped raw bytes, e.g. from `slicerng gen`
                streams.append(
                    stats.BitStream.from_bytes(sys.stdin.buffer.read())
                )
            elif path.endswith(".hex"):
                with open(path) as fh:
                    streams.append(stats.BitStream.from_hex(fh.read()))
            else:
                with open(path, "rb") as fh:
                    streams.append(stats.BitStream.from_bytes(fh.read()))
        if len(streams) == 1 and args.streams > 1:
            # one long piped stream: split into the requested count
            whole = streams[0]
            per = whole.n // args.streams
            if per == 0:
                raise SystemExit("piped stream too short to split")
            bits = whole.bits()
            streams = [
                stats.BitStream.from_bits(bits[i * per: (i + 1) * per])
                for i in range(args.streams)
            ]
        return streams
    if args.algo != "mickey":
        raise SystemExit("generated suite streams currently come from mickey")
    seed = parse_hex(args.seed, 32, "seed")
    streams = []
    remaining = args.streams
    batch_index = 0
    nclocks = args.stream_bits
    while remaining:
        lanes = min(64, remaining)
        batch_seed = bytes([seed[0] ^ batch_index]) + seed[1:]
        master = MasterSeed(batch_seed, "mickey", lanes=lanes)
        mats = [derive_lane_material(master, j) for j in range(lanes)]
        words = kernels.mickey_sliced_words(mats, nclocks, width=64)
        for j in range(lanes):
            bits = kernels.words_to_lane_bits(words, j)
            streams.append(
                stats.BitStream(np.packbits(bits).tobytes(), nclocks)
            )
        remaining -= lanes
        batch_index += 1
    return streams


def cmd_test(args) -> int:
    streams = _suite_streams(args)
    params = stats.SuiteParams(
        block_frequency_len=args.block_len,
        serial_m=args.serial_m,
        apen_m=args.apen_m,
        linear_complexity_len=args.lc_len,
    )
    result = stats.run_suite(
        streams, alpha=args.alpha, params=params, workers=args.workers
    )
    print(f"# seed={args.seed} streams={result.nstreams} alpha={result.alpha}")
    print(result.to_text())
    if args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(result.to_json())
    return EXIT_OK if result.passed else EXIT_SUITE_FAILURE


def cmd_bench(args) -> int:
    results = bench.compare_suite(
        nbytes=args.mib << 20,
        repeats=args.repeats,
        width=args.width,
        algorithms=tuple(args.algos),
        impls=tuple(args.impls),
        naive_nbytes=(args.naive_mib << 20) if args.naive_mib else None,
        end_to_end=args.end_to_end,
    )
    print(bench.format_table(results))
    if args.json_out:
        bench.write_results(results, args.json_out)
    return EXIT_OK


def cmd_crc(args) -> int:
    spec = CrcSpec(args.poly, init=args.init, reflect=args.reflect,
                   final_xor=args.final_xor)
    text = sys.stdin.read() if args.file == "-" else open(args.file).read()
    messages = [
        bytes.fromhex(line.strip())
        for line in text.splitlines()
        if line.strip()
    ]
    if args.impl == "sliced":
        # equal-length groups slice together; order is preserved on output
        sums = [0] * len(messages)
        by_length: dict[int, list[int]] = {}
        for idx, msg in enumerate(messages):
            by_length.setdefault(len(msg), []).append(idx)
        for indices in by_length.values():
            for start in range(0, len(indices), 64):
                group = indices[start: start + 64]
                width = 64 if len(group) > 32 else 32
                batch = crc8_sliced(spec, [messages[i] for i in group], width)
                for idx, value in zip(group, batch):
                    sums[idx] = value
    else:
        sums = [crc8_scalar(spec, m) for m in messages]
    for value in sums:
        print(f"{value:02x}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="slicerng",
        description="bitsliced keystream generators, statistics and benchmarks",
    )
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate keystream bytes")
    g.add_argument("--algo", choices=(*ALGOS, "lfsr"), default="mickey")
    g.add_argument("--impl", choices=("naive", "sliced"), default="sliced")
    g.add_argument("--spec", help='lfsr feedback: "x^4+x^3+1" or "{0,3};n=4"')
    g.add_argument("--bits", type=int, required=True)
    g.add_argument("--seed", default="11" * 32,
                   help="256-bit master seed (hex) for lane derivation")
    g.add_argument("--key", help="explicit key (hex); bypasses the seed")
    g.add_argument("--iv", help="explicit IV (hex, mickey/grain)")
    g.add_argument("--nonce", help="explicit nonce (hex, aes-ctr)")
    g.add_argument("--lanes", type=int, default=1)
    g.add_argument("--format", choices=("raw", "hex"), default="hex")
    g.add_argument("--interleave", choices=("lane", "bit"), default="lane")
    g.add_argument("--force-raw", action="store_true")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("vectors", help="verify embedded or file test vectors")
    v.add_argument("--algo", choices=ALGOS)
    v.add_argument("--file", help="vector file: key=<hex> iv=<hex> ks=<hex>")
    v.add_argument("--bit-order", choices=("msb", "lsb"), default="msb")
    v.set_defaults(func=cmd_vectors)

    t = sub.add_parser("test", help="run the statistical suite")
    t.add_argument("files", nargs="*", help="stream files (.hex or raw)")
    t.add_argument("--algo", choices=ALGOS, default="mickey")
    t.add_argument("--seed", default="11" * 32)
    t.add_argument("--streams", type=int, default=100)
    t.add_argument("--stream-bits", type=int, default=1_000_000)
    t.add_argument("--alpha", type=float, default=0.01)
    t.add_argument("--block-len", type=int, default=128)
    t.add_argument("--serial-m", type=int, default=16)
    t.add_argument("--apen-m", type=int, default=10)
    t.add_argument("--lc-len", type=int, default=500)
    t.add_argument("--workers", type=int, default=1)
    t.add_argument("--json-out")
    t.set_defaults(func=cmd_test)

    b = sub.add_parser("bench", help="bitsliced vs naive throughput")
    b.add_argument("--mib", type=int, default=64)
    b.add_argument("--naive-mib", type=int,
                   help="smaller size for the naive engines")
    b.add_argument("--repeats", type=int, default=5)
    b.add_argument("--width", type=int, choices=(32, 64), default=64)
    b.add_argument("--algos", nargs="+", choices=ALGOS, default=list(ALGOS))
    b.add_argument("--impls", nargs="+", choices=bench.IMPL_KINDS,
                   default=["naive", "sliced"])
    b.add_argument("--end-to-end", action="store_true",
                   help="include output transposition in the timed region")
    b.add_argument("--json-out")
    b.set_defaults(func=cmd_bench)

    c = sub.add_parser("crc", help="CRC-8 worked example")
    c.add_argument("--file", default="-",
                   help="newline-delimited hex messages ('-' for stdin)")
    c.add_argument("--impl", choices=("scalar", "sliced"), default="sliced")
    c.add_argument("--poly", type=lambda v: int(v, 0), default=0x07)
    c.add_argument("--init", type=lambda v: int(v, 0), default=0x00)
    c.add_argument("--reflect", action="store_true")
    c.add_argument("--final-xor", type=lambda v: int(v, 0), default=0x00)
    c.set_defaults(func=cmd_crc)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
