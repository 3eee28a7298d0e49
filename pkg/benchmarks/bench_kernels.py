#!/usr/bin/env python3
"""Compare the compiled and pure-Python participation-scan kernels.

The scan is the O(|D|^k) inner loop behind the polynomial repair-core
computation.  Usage:

    python benchmarks/bench_kernels.py [--sizes 50,100,200,400] [--reps 5]
"""

from __future__ import annotations

import argparse
import time

from dbexplain import parse_query
from dbexplain.fastpath import participating_sets
from dbexplain.kernels import available_backends
from dbexplain.synth import SCALING_QUERY_TEXT, scaling_instance


def time_backend(instance, query, backend: str, reps: int) -> float:
    participating_sets(instance, query, backend=backend)  # warm-up
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        participating_sets(instance, query, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="50,100,200,400")
    ap.add_argument("--reps", type=int, default=5)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    backends = available_backends()

    header = ["|D|"] + [f"{b} (ms)" for b in backends]
    if len(backends) == 2:
        header.append("speedup")
    rows = [header]
    for n in sizes:
        instance = scaling_instance(n)
        query = parse_query(SCALING_QUERY_TEXT, instance)
        times = {b: time_backend(instance, query, b, args.reps) for b in backends}
        row = [str(n)] + [f"{times[b] * 1e3:.2f}" for b in backends]
        if len(backends) == 2:
            row.append(f"{times['python'] / times['compiled']:.1f}x")
        rows.append(row)

    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    for i, row in enumerate(rows):
        print("  ".join(v.rjust(w) for v, w in zip(row, widths)))
        if i == 0:
            print("  ".join("-" * w for w in widths))
    if len(backends) < 2:
        print("\ncompiled kernel not built; only the fallback was timed")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
