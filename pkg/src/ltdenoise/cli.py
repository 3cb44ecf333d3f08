"""Command-line front end: ``gen``, ``denoise``, ``bench`` and ``profile``."""
from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace

import numpy as np

from . import errors
from .baselines import SsaParams, moving_average, ssa_denoise
from .experiments import KINDS, ALGORITHMS, add_noise, aggregate, dolan_more_profile, generate_exact, run_suite
from .fileformats import read_results, read_signal, results_document, write_profile, write_results, write_signal, write_trace
from .ltd import DEFAULT_HIGH_NOISE_THRESHOLD, default_params, denoise, finalize, hybrid_denoise

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3

_USAGE_ERRORS = (errors.BadParamsError, errors.BadWindowError, errors.BadKindError)
_DATA_ERRORS = (errors.ParseError, errors.SchemaError, errors.TooShortError,
                errors.DimensionMismatchError, errors.EmptyRecordsError,
                errors.IncompleteMatrixError, OSError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _csv_list(cast):
    def parse(text):
        try:
            return [cast(part) for part in text.split(",") if part.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad list {text!r}") from None
    return parse


def cmd_gen(args) -> int:
    exact = generate_exact(args.kind, args.n, args.seed)
    noisy = add_noise(exact, args.noise_std, args.seed + 1)
    write_signal(args.out_exact, exact)
    write_signal(args.out_noisy, noisy)
    print(f"wrote {args.n} samples to {args.out_exact} and {args.out_noisy}")
    return EXIT_OK


def _ltd_params(args, n):
    overrides = {"seed": args.seed}
    for name in ("kmax", "delta", "ratio", "window", "max_outer"):
        if getattr(args, name) is not None:
            overrides[name] = getattr(args, name)
    if args.no_discrepancy:
        overrides["discrepancy"] = None
    return replace(default_params(n), **overrides)


def cmd_denoise(args) -> int:
    noisy = read_signal(args.input)
    if noisy.size < 3:
        raise errors.TooShortError(f"{args.input}: need at least 3 samples, got {noisy.size}")
    exact = read_signal(args.exact) if args.exact else None
    start = time.perf_counter()
    iterations = "-"
    result = None
    if args.algo in ("ltd", "hybrid"):
        params = _ltd_params(args, noisy.size)
        if args.algo == "ltd":
            result = denoise(noisy, params)
        else:
            result = hybrid_denoise(noisy, params, args.threshold)
        out = result.denoised
        iterations = str(result.iterations_total)
    elif args.algo == "ma":
        out = moving_average(noisy, args.window or 3)
    else:
        default = SsaParams.default_for(noisy.size)
        out = ssa_denoise(noisy, SsaParams(args.embed_dim or default.embed_dim, args.rank or default.rank))
    elapsed = time.perf_counter() - start

    write_signal(args.output, out)
    if args.trace:
        if result is None:
            raise errors.BadParamsError("--trace is only available for --algo ltd or hybrid")
        write_trace(args.trace, result.accepted_trace())
    report = f"algo={args.algo} n={noisy.size} iterations={iterations} elapsed={elapsed:.6f}s"
    if result is not None and "branch" in result.metadata:
        report += f" branch={result.metadata['branch']}"
    if exact is not None:
        mse1, mse2 = finalize(exact, noisy, out)
        report += f" mse1={mse1:.6g} mse2={mse2:.6g}"
    print(report)
    return EXIT_OK


def _print_table(rows, algos):
    by_key = {(r.n, r.algorithm): r for r in rows}
    sizes = sorted({r.n for r in rows})
    header = ["n"] + [f"{a} time" for a in algos] + [f"{a} MSE" for a in algos]
    print("  ".join(f"{h:>12}" for h in header))
    for n in sizes:
        cells = [f"{n:>12d}"]
        cells += [f"{by_key[(n, a)].mean_time:>12.4f}" for a in algos]
        cells += [f"{by_key[(n, a)].mean_mse2:>12.4f}" for a in algos]
        print("  ".join(cells))


def cmd_bench(args) -> int:
    records = run_suite(args.sizes, args.trials, args.algos, noise_std=args.noise_std,
                        base_seed=args.seed, kind=args.kind, workers=args.workers)
    rows = aggregate(records)
    config = {
        "sizes": args.sizes,
        "trials": args.trials,
        "algorithms": args.algos,
        "noise_std": args.noise_std,
        "base_seed": args.seed,
        "kind": args.kind,
        "algorithm_params": {
            "ltd": "kmax/delta from the suggested-parameter table by nearest n; ratio 0.7, window 3, max_outer 50",
            "hybrid": f"ltd params; high_noise_threshold {DEFAULT_HIGH_NOISE_THRESHOLD}",
            "ma": "window 3",
            "ssa": "embed_dim min(n // 4, 50), rank 2",
        },
    }
    write_results(args.output, results_document(config, records, rows))
    _print_table(rows, args.algos)
    failures = sum(r.failed for r in records)
    if failures:
        print(f"{failures} trial(s) failed", file=sys.stderr)
    return EXIT_OK


def cmd_profile(args) -> int:
    _, records = read_results(args.results)
    curves = dolan_more_profile(records)
    write_profile(args.output, curves)
    print(f"wrote {sum(len(c.points) for c in curves)} profile points for {len(curves)} algorithm(s)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ltdenoise", description="LTD signal denoising and benchmarks")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="generate an exact/noisy signal pair")
    p.add_argument("--kind", choices=KINDS, default="sine")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--noise-std", type=float, default=0.1)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-exact", required=True)
    p.add_argument("--out-noisy", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("denoise", help="denoise a signal file")
    p.add_argument("--algo", choices=("ltd", "ma", "ssa", "hybrid"), default="ltd")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--exact", help="exact signal; adds mse1/mse2 to the report")
    p.add_argument("--trace", help="write accepted (pass,k,E) records as CSV")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--kmax", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--ratio", type=float)
    p.add_argument("--window", type=int)
    p.add_argument("--max-outer", type=int)
    p.add_argument("--no-discrepancy", action="store_true",
                   help="do not stop at the estimated noise level")
    p.add_argument("--threshold", type=float, default=DEFAULT_HIGH_NOISE_THRESHOLD,
                   help="hybrid smoothing threshold on fitted std / signal range")
    p.add_argument("--embed-dim", type=int)
    p.add_argument("--rank", type=int)
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("bench", help="run a seeded benchmark suite")
    p.add_argument("--sizes", type=_csv_list(int), required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--algos", type=_csv_list(str), default=["ltd", "ssa"])
    p.add_argument("--noise-std", type=float, default=0.1)
    p.add_argument("--kind", choices=KINDS, default="sine")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", dest="output", required=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("profile", help="Dolan-More time profiles from a results document")
    p.add_argument("--results", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.set_defaults(func=cmd_profile)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "algos", None):
            unknown = [a for a in args.algos if a not in ALGORITHMS]
            if unknown:
                raise UsageError(f"unknown algorithm(s): {', '.join(unknown)}")
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (errors.LtdError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
