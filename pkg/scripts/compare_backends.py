#!/usr/bin/env python3
"""Compare the two minimality-check backends on the same sizes.

Prints per-size wall times, minimality-check time shares, and verifies the
two backends produce identical sorted solution sets.
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from cyclesat.run import RunConfig, run_enumerate


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--min-size", type=int, default=3)
    parser.add_argument("--max-size", type=int, default=6)
    args = parser.parse_args()

    for n in range(args.min_size, args.max_size + 1):
        outputs = {}
        for backend in ("backtrack", "incremental"):
            t0 = time.perf_counter()
            sols, stats = run_enumerate(RunConfig(n=n, backend=backend))
            elapsed = time.perf_counter() - t0
            mc = sum(sum(st["time"].values()) for st in stats.values())
            checks = sum(st["partial_checks"] + st["complete_checks"] for st in stats.values())
            outputs[backend] = [c.to_line() for c in sols]
            print(
                f"n={n} {backend:11s}: {len(sols):6d} solutions  {elapsed:7.2f}s"
                f"  mincheck {mc:6.2f}s over {checks} checks"
            )
        same = outputs["backtrack"] == outputs["incremental"]
        print(f"n={n} outputs identical: {same}")
        if not same:
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
