#!/usr/bin/env python3
"""
Benchmark script for the exact algebra checks
Times the commutator tables per family and worker count.
"""
import argparse
import statistics
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from metaward.metawardpy.reps import Family, verify_structure_constants  # noqa: E402


def bench(family: Family, n_max: int, threads: int, repeats: int) -> list[float]:
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        report = verify_structure_constants(family, n_max, threads=threads)
        times.append(time.perf_counter() - start)
        if not report.all_zero:
            print(f"ERROR: {family} failed {len(report.failures())} identities")
            sys.exit(1)
    return times


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nmax", type=int, default=4)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--threads", type=int, nargs="+", default=[1, 4])
    args = parser.parse_args()

    print("=" * 60)
    print(f"Algebra benchmark, n_max={args.nmax}")
    print("=" * 60)
    for family in Family:
        for threads in args.threads:
            times = bench(family, args.nmax, threads, args.repeats)
            print(f"  {str(family):<14} threads={threads:<3} "
                  f"median {statistics.median(times) * 1000:8.1f} ms  "
                  f"min {min(times) * 1000:8.1f} ms")


if __name__ == "__main__":
    main()
