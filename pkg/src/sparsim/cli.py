"""Command-line interface: run circuit files, sweep benchmarks, fit scaling."""

from __future__ import annotations

import argparse
import sys

from . import bench
from .circuit import ENGINE_KINDS, ParseError, parse, run
from .state import CapacityError, NormalizationError, dump_lines

EXIT_PARSE = 1
EXIT_CAPACITY = 2
EXIT_INTERNAL = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sparsim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a circuit file")
    p_run.add_argument("file")
    p_run.add_argument("--engine", choices=ENGINE_KINDS, default="bitwise")
    p_run.add_argument("--seed", type=int, default=0, help="base seed; 0 means entropy-seeded")
    p_run.add_argument("--shots", type=int, default=1,
                       help="number of executions; shot k reseeds as seed+k; 0 dumps a single run")
    p_run.add_argument("--dump-state", action="store_true",
                       help="print the final-state dump of the last shot")

    p_bench = sub.add_parser("bench", help="emit scaling benchmark CSV on stdout")
    p_bench.add_argument("scenario", choices=bench.SCENARIOS)
    p_bench.add_argument("--n", required=True,
                         help="sizes: a range 'a..b' or a comma list '8,16,32,64'")
    p_bench.add_argument("--engines", default="bitwise",
                         help="comma list of engines (bitwise,dense,density)")
    p_bench.add_argument("--repeats", type=int, default=5)
    p_bench.add_argument("--seed", type=int, default=1)

    p_fit = sub.add_parser("fit", help="classify scaling from a bench CSV")
    p_fit.add_argument("csv")
    return parser


def _parse_sizes(spec: str) -> list[int]:
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(tok) for tok in spec.split(",") if tok]


def _shot_seed(base: int, shot: int) -> int:
    # Seed 0 stays 0 (entropy) for every shot; otherwise each shot reseeds.
    return 0 if base == 0 else base + shot


def cmd_run(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as handle:
            source = handle.read()
    except OSError as exc:
        print(f"sparsim: cannot read {args.file}: {exc.strerror}", file=sys.stderr)
        return EXIT_PARSE
    try:
        circuit = parse(source)
    except ParseError as exc:
        print(f"sparsim: {args.file}: {exc}", file=sys.stderr)
        return EXIT_PARSE

    try:
        if args.shots <= 0:
            state, _, _ = run(circuit, args.engine, args.seed)
            print("\n".join(dump_lines(state)))
            return 0
        state = None
        for shot in range(args.shots):
            state, _, outcome = run(circuit, args.engine, _shot_seed(args.seed, shot))
            if outcome is not None:
                print(outcome)
        if args.dump_state:
            print("\n".join(dump_lines(state)))
    except CapacityError as exc:
        print(f"sparsim: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except NormalizationError as exc:
        print(f"sparsim: internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return 0


def cmd_bench(args) -> int:
    try:
        sizes = _parse_sizes(args.n)
    except ValueError:
        print(f"sparsim: bad size spec {args.n!r}", file=sys.stderr)
        return EXIT_PARSE
    engines = [e for e in args.engines.split(",") if e]
    records = bench.sweep(args.scenario, sizes, engines, repeats=args.repeats, seed=args.seed)
    bench.write_csv(records, sys.stdout)
    return 0


def cmd_fit(args) -> int:
    try:
        with open(args.csv, encoding="utf-8") as handle:
            records = bench.read_csv(handle)
    except OSError as exc:
        print(f"sparsim: cannot read {args.csv}: {exc.strerror}", file=sys.stderr)
        return EXIT_PARSE
    try:
        fits = bench.fit_scaling(records)
    except ValueError as exc:
        print(f"sparsim: {exc}", file=sys.stderr)
        return EXIT_PARSE
    print("scenario,engine,points,linear_slope,log2_slope,classification")
    for fit in fits:
        print(
            f"{fit.scenario},{fit.engine},{fit.points},"
            f"{fit.linear_slope:.6g},{fit.log2_slope:.6g},{fit.classification}"
        )
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return cmd_run(args)
    if args.command == "bench":
        return cmd_bench(args)
    return cmd_fit(args)


if __name__ == "__main__":
    sys.exit(main())
