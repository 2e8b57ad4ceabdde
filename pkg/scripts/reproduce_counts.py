#!/usr/bin/env python3
"""Reproduce the solution counts per size and per diagonal.

Runs the enumeration for a range of sizes and prints total and
per-diagonal counts with wall times.  Sizes up to 7 finish in minutes in
pure Python; pass --max-size 8 for the long run (ten-plus minutes).
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from cyclesat.run import RunConfig, enumerate_diagonal
from cyclesat.symmetry import representative_diagonals

KNOWN_TOTALS = {2: 2, 3: 5, 4: 23, 5: 88, 6: 595, 7: 3456, 8: 34530}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--min-size", type=int, default=2)
    parser.add_argument("--max-size", type=int, default=7)
    parser.add_argument("--backend", choices=["backtrack", "incremental"], default="backtrack")
    args = parser.parse_args()

    ok = True
    for n in range(args.min_size, args.max_size + 1):
        t0 = time.perf_counter()
        total = 0
        print(f"size {n} ({args.backend}):")
        for diag in representative_diagonals(n):
            t1 = time.perf_counter()
            sols, st = enumerate_diagonal(RunConfig(n=n, backend=args.backend), diag)
            total += len(sols)
            print(
                f"  {diag.label():18s} {len(sols):8d} solutions"
                f"  {time.perf_counter() - t1:7.2f}s"
                f"  (partial checks {st.partial_checks}, complete checks {st.complete_checks})"
            )
        known = KNOWN_TOTALS.get(n)
        verdict = ""
        if known is not None:
            verdict = "ok" if total == known else f"MISMATCH (expected {known})"
            ok = ok and total == known
        print(f"  total {total:8d}  {time.perf_counter() - t0:7.2f}s  {verdict}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
