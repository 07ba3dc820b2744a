#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs each hot kernel at a few sizes under both backends and prints a
throughput table. Usage:

    python3 benchmarks/bench_kernels.py [--repeats 5]

The numba timings exclude the first (compilation) call.
"""

import argparse
import os
import time

import numpy as np

from quadcong import backends


def _time(fn, repeats):
    fn()  # warm-up / JIT compile
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


CASES = [
    ("box_histogram q=9999 M=N=464", lambda: backends.box_histogram(1, 464, 464, 9999)),
    ("box_histogram q=99999 M=N=2155", lambda: backends.box_histogram(1, 2155, 2155, 99999)),
    ("pair_count q=999 M=N=999", lambda: backends.pair_count(999, 999, 999, 1)),
    ("uv_histogram q=3999", lambda: backends.uv_histogram(3999)),
    (
        "t_counts s=2000 X=2000",
        lambda: backends.t_counts(
            2000,
            np.arange(1, 2000, dtype=np.int64),
            np.arange(1, 2000, dtype=np.int64),
            np.full(1999, 1500, dtype=np.int64),
        ),
    ),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    chosen = ["numpy"]
    if backends.HAVE_NUMBA:
        chosen.insert(0, "numba")
    else:
        print("numba not importable; timing the numpy path only")

    results = {}
    for name in chosen:
        os.environ[backends.ENV_VAR] = name
        for label, fn in CASES:
            results[(name, label)] = _time(fn, args.repeats)

    width = max(len(label) for label, _ in CASES)
    header = f"{'kernel':<{width}}  " + "".join(f"{n:>12}" for n in chosen)
    if len(chosen) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for label, _ in CASES:
        row = f"{label:<{width}}  "
        for name in chosen:
            row += f"{results[(name, label)] * 1e3:>10.2f}ms"
        if len(chosen) == 2:
            row += f"{results[('numpy', label)] / results[('numba', label)]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
