"""Compare the compiled fold kernel against the numpy fallback.

Usage: python benchmarks/bench_fold.py [--rows 1000000] [--repeat 5]

Simulates the engine's two hot shapes: folding fact rows into base cells
(6 coordinate columns) and folding base cells into a 2-level group-by.
"""

import argparse
import time

import numpy as np

from starcube.cube import fold, fold_py

try:
    from starcube.cube import _foldc
except ImportError:
    _foldc = None


def make_case(rng, rows, d, cardinalities, measures=2):
    codes = np.column_stack([
        rng.integers(0, cardinalities[i % len(cardinalities)], size=rows)
        for i in range(d)]).astype(np.int64)
    values = rng.integers(0, 4_000_000, size=(rows, measures)).astype(np.int64)
    addv = np.column_stack([values, np.ones(rows, dtype=np.int64)])
    return codes, addv, values


def run_lane(lane_module, codes, addv, mm, repeat):
    order = np.lexsort(tuple(codes[:, i]
                             for i in range(codes.shape[1] - 1, -1, -1)))
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        lane_module.fold_sorted(codes, order, addv, mm, mm)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--rows", type=int, default=1_000_000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(7)
    cases = [
        ("base-cell build (6 cols)", make_case(
            rng, args.rows, 6, [2000, 16, 18, 1400, 1400, 1400])),
        ("2-level group-by", make_case(rng, args.rows, 2, [4, 48])),
        ("high-cardinality group", make_case(rng, args.rows, 2, [2000, 1400])),
    ]

    print(f"rows={args.rows:,}  repeat={args.repeat}  "
          f"active lane: {fold.active_lane()}")
    header = f"{'case':28} {'numpy (ms)':>12} {'compiled (ms)':>14} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, (codes, addv, values) in cases:
        numpy_s = run_lane(fold_py, codes, addv, values, args.repeat)
        if _foldc is not None:
            compiled_s = run_lane(_foldc, codes, addv, values, args.repeat)
            speedup = f"{numpy_s / compiled_s:7.2f}x"
            compiled_ms = f"{compiled_s * 1000:14.1f}"
        else:
            compiled_ms = f"{'n/a':>14}"
            speedup = f"{'n/a':>8}"
        print(f"{name:28} {numpy_s * 1000:12.1f} {compiled_ms} {speedup}")

    # sanity: both lanes agree on the last case
    if _foldc is not None:
        codes, addv, values = cases[-1][1]
        a = fold.fold_groups(codes, addv, values, values)
        b = fold.fold_groups(codes, addv, values, values, lane="python")
        assert all(np.array_equal(x, y) for x, y in zip(a, b))
        print("\nlanes agree on the high-cardinality case")


if __name__ == "__main__":
    main()
