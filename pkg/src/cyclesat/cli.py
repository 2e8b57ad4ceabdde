"""Command-line front end: enumerate, verify, stats."""

from __future__ import annotations

import argparse
import json
import sys

from .errors import DatabaseParseError, PropagatorContractViolation
from .oracle import verify_database
from .run import RunConfig, render_stats_table, run_enumerate, write_solutions, write_stats


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclesat",
        description="Exhaustive isomorph-free enumeration of non-degenerate cycle sets",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    enum = sub.add_parser("enumerate", help="enumerate lexicographically minimal cycle sets")
    enum.add_argument("--size", "-n", type=int, required=True, help="size of the cycle sets")
    enum.add_argument("--diagonal", default="all", help="cycle notation, e.g. '(1 2)(3 4)', or 'all'")
    enum.add_argument("--backend", choices=["backtrack", "incremental"], default="incremental")
    enum.add_argument("--freq", type=int, help="run the partial minimality check every FREQ-th decision")
    enum.add_argument("--node-limit", type=int, default=200, help="node budget of a partial backtracking check")
    enum.add_argument("--conflict-limit", type=int, default=10, help="conflict budget of a partial oracle check")
    enum.add_argument("--eo", choices=["binary", "commander"], default="binary", help="ExactlyOne encoding")
    enum.add_argument("--workers", type=int, default=1, help="processes over diagonals")
    enum.add_argument("--out", default="-", help="solutions file ('-' for stdout)")
    enum.add_argument("--stats-out", help="write per-diagonal statistics JSON here")
    enum.add_argument("--seed", type=int, default=0)
    enum.add_argument("--dimacs-dump", metavar="DIR", help="dump the axiom CNFs and variable maps here")
    enum.add_argument("--trace", metavar="PATH", help="append a conflict/restart log here")
    enum.add_argument("--raw-order", action="store_true", help="emit solutions in solver order instead of sorting")

    ver = sub.add_parser("verify", help="check a solution database file")
    ver.add_argument("path")
    ver.add_argument("--size", "-n", type=int, required=True)
    ver.add_argument("--diagonal", help="require every entry to carry exactly this diagonal")
    ver.add_argument("--json", action="store_true", help="print the machine-readable report")

    st = sub.add_parser("stats", help="render a statistics JSON file as a table")
    st.add_argument("path")
    return parser


def _cmd_enumerate(args) -> int:
    try:
        config = RunConfig(
            n=args.size,
            diagonal=args.diagonal,
            backend=args.backend,
            freq=args.freq,
            node_limit=args.node_limit,
            conflict_limit=args.conflict_limit,
            eo_method=args.eo,
            workers=args.workers,
            out_path=args.out,
            stats_path=args.stats_out,
            seed=args.seed,
            dimacs_dir=args.dimacs_dump,
            trace_path=args.trace,
            sorted_output=not args.raw_order,
        )
    except ValueError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 2
    try:
        if config.diagonal not in (None, "all"):
            from .symmetry import Diagonal

            Diagonal.parse(config.diagonal, config.n)
    except ValueError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 2
    try:
        solutions, stats = run_enumerate(config)
    except PropagatorContractViolation as exc:
        print(f"internal contract violation: {exc}", file=sys.stderr)
        return 3
    write_solutions(solutions, config.out_path)
    if config.stats_path:
        write_stats(stats, config.stats_path)
    return 0


def _cmd_verify(args) -> int:
    try:
        report = verify_database(args.path, args.size, per_diagonal=args.diagonal)
    except DatabaseParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cannot read {args.path}: {exc}", file=sys.stderr)
        return 2
    if args.json:
        print(report.to_json(), end="")
    else:
        print(report.to_text(), end="")
    return 0 if report.clean else 1


def _cmd_stats(args) -> int:
    try:
        with open(args.path, "r", encoding="utf-8") as fh:
            stats = json.load(fh)
        if not isinstance(stats, dict):
            raise ValueError("top level must be an object keyed by diagonal")
        print(render_stats_table(stats), end="")
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"malformed stats input: {exc}", file=sys.stderr)
        return 2
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "enumerate":
        return _cmd_enumerate(args)
    if args.command == "verify":
        return _cmd_verify(args)
    return _cmd_stats(args)


if __name__ == "__main__":
    sys.exit(main())
