"""Command-line front end: multiply, gen, verify, bench.

Exit codes: 0 success / verified, 1 algorithm or verification failure,
2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass

from . import driver
from .fingerprint import equality_test
from .instances import InstanceSpec, gen_instance
from .polyfile import PolyFileError, parse_poly_file, write_poly_file
from .seeding import MULTIPLY_STREAM, VERIFY_STREAM, resolve_seed, substream
from .vectors import (EnvelopeError, SparseVector, embed_for_product,
                      poly_multiply_dense, poly_multiply_naive)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_BAD_INPUT = 2

ALGOS = ("naive", "dense", "sparse")


@dataclass(frozen=True)
class BenchRecord:
    """One benchmark measurement, serialized as a JSON line."""

    algo: str
    n: int
    s_in: int
    k_out: int | None
    wall_millis: float
    seed: int
    success: bool

    def to_json(self) -> str:
        return json.dumps(asdict(self))


def _run_algo(algo: str, u: SparseVector, v: SparseVector, seed: int,
              fallback_dense: bool = False) -> SparseVector:
    if algo == "naive":
        return poly_multiply_naive(u, v)
    if algo == "dense":
        return poly_multiply_dense(u, v)
    if algo == "sparse":
        rng = substream(seed, MULTIPLY_STREAM)
        try:
            return driver.sparse_multiply(u, v, rng)
        except driver.MultiplicationFailed:
            if fallback_dense:
                return poly_multiply_dense(u, v)
            raise
    raise ValueError(f"unknown algorithm {algo!r}")


def _cmd_multiply(args) -> int:
    seed = resolve_seed(args.seed)
    u = parse_poly_file(args.a)
    v = parse_poly_file(args.b)
    try:
        product = _run_algo(args.algo, u, v, seed,
                            fallback_dense=args.fallback_dense)
    except driver.MultiplicationFailed as exc:
        print(f"multiplication failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    if args.output:
        write_poly_file(product, args.output)
    print(product.l0)
    return EXIT_OK


def _cmd_gen(args) -> int:
    seed = resolve_seed(args.seed)
    spec = InstanceSpec(n=args.n, terms=args.terms, coeff_bound=args.coeff_bound,
                        cancel_fraction=args.cancel_fraction, seed=seed)
    u, v = gen_instance(spec)
    write_poly_file(u, args.out_a)
    write_poly_file(v, args.out_b)
    return EXIT_OK


def _cmd_verify(args) -> int:
    seed = resolve_seed(args.seed)
    u = parse_poly_file(args.a)
    v = parse_poly_file(args.b)
    claimed = parse_poly_file(args.product)
    x, y = embed_for_product(u, v)
    if claimed.length != x.length:
        print(f"product dimension must be {x.length}, got {claimed.length}",
              file=sys.stderr)
        return EXIT_BAD_INPUT
    rng = substream(seed, VERIFY_STREAM)
    if equality_test(x, y, claimed, args.delta, rng):
        print("yes")
        return EXIT_OK
    print("no")
    return EXIT_FAILED


def _cmd_bench(args) -> int:
    seed = resolve_seed(args.seed)
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    for algo in algos:
        if algo not in ALGOS:
            raise ValueError(f"unknown algorithm {algo!r}")
    spec = InstanceSpec(n=args.n, terms=args.terms, coeff_bound=args.coeff_bound,
                        cancel_fraction=args.cancel_fraction, seed=seed)
    u, v = gen_instance(spec)
    records = []
    for algo in algos:
        for _ in range(args.repeats):
            start = time.perf_counter()
            k_out: int | None
            try:
                product = _run_algo(algo, u, v, seed)
                k_out = product.l0
                success = True
            except driver.MultiplicationFailed:
                k_out = None
                success = False
            wall = (time.perf_counter() - start) * 1000.0
            records.append(BenchRecord(algo=algo, n=spec.n,
                                       s_in=u.l0 + v.l0, k_out=k_out,
                                       wall_millis=wall, seed=seed,
                                       success=success))
    lines = [r.to_json() for r in records]
    for line in lines:
        print(line)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as handle:
            handle.write("\n".join(lines) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparseconv",
        description="Output-sensitive sparse polynomial multiplication")
    sub = parser.add_subparsers(dest="command", required=True)

    p_mul = sub.add_parser("multiply", help="multiply two polynomial files")
    p_mul.add_argument("a")
    p_mul.add_argument("b")
    p_mul.add_argument("-o", "--output", help="write the product here")
    p_mul.add_argument("--algo", choices=ALGOS, default="sparse")
    p_mul.add_argument("--seed", type=int, default=None)
    p_mul.add_argument("--fallback-dense", action="store_true",
                       help="fall back to the dense FFT if recovery fails")
    p_mul.set_defaults(func=_cmd_multiply)

    p_gen = sub.add_parser("gen", help="generate a seeded instance")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--terms", type=int, required=True)
    p_gen.add_argument("--coeff-bound", type=int, default=100)
    p_gen.add_argument("--cancel-fraction", type=float, default=0.0)
    p_gen.add_argument("--seed", type=int, default=None)
    p_gen.add_argument("-o", "--out-a", required=True)
    p_gen.add_argument("-o2", "--out-b", required=True)
    p_gen.set_defaults(func=_cmd_gen)

    p_ver = sub.add_parser("verify", help="check a claimed product file")
    p_ver.add_argument("a")
    p_ver.add_argument("b")
    p_ver.add_argument("product")
    p_ver.add_argument("--delta", type=float, default=0.01)
    p_ver.add_argument("--seed", type=int, default=None)
    p_ver.set_defaults(func=_cmd_verify)

    p_bench = sub.add_parser("bench", help="time backends on one instance")
    p_bench.add_argument("--n", type=int, required=True)
    p_bench.add_argument("--terms", type=int, required=True)
    p_bench.add_argument("--coeff-bound", type=int, default=100)
    p_bench.add_argument("--cancel-fraction", type=float, default=0.0)
    p_bench.add_argument("--algos", default="naive,dense,sparse")
    p_bench.add_argument("--repeats", type=int, default=1)
    p_bench.add_argument("--seed", type=int, default=None)
    p_bench.add_argument("--json", help="also write the records to this file")
    p_bench.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PolyFileError, EnvelopeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
