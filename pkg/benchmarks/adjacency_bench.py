#!/usr/bin/env python3
"""Benchmark the compiled box-pair kernel against the pure-Python one.

Times the all-pairs adjacency scan on synthetic room grids of growing
size with both kernels and prints the speedup. Run from the repository
root:  python benchmarks/adjacency_bench.py
"""

from __future__ import annotations

import math
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import numpy as np  # noqa: E402

from bimql.geom import _boxpairs_py  # noqa: E402

try:
    from bimql.geom import _boxpairs as compiled
except ImportError:
    compiled = None


def grid_boxes(n: int) -> tuple[np.ndarray, np.ndarray]:
    side = math.ceil(math.sqrt(n))
    mins = np.zeros((n, 3))
    for i in range(n):
        mins[i] = ((i % side) * 1.05, (i // side) * 1.05, 0.0)
    return mins, mins + 1.0


def timed(fn, *args, repeats: int = 3) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    print(f"{'n':>6} {'pairs':>12} {'python (s)':>12} {'compiled (s)':>13} {'speedup':>8}")
    for n in (250, 500, 1000, 2000):
        mins, maxs = grid_boxes(n)
        pure = timed(_boxpairs_py.scan_pairs, mins, maxs, 0.05, True)
        if compiled is None:
            print(f"{n:>6} {n * (n - 1) // 2:>12} {pure:>12.4f} {'not built':>13} {'-':>8}")
            continue
        fast = timed(compiled.scan_pairs, mins, maxs, 0.05, True)
        assert list(compiled.scan_pairs(mins, maxs, 0.05, True)) == list(
            _boxpairs_py.scan_pairs(mins, maxs, 0.05, True)
        )
        print(
            f"{n:>6} {n * (n - 1) // 2:>12} {pure:>12.4f} {fast:>13.5f} "
            f"{pure / fast:>7.1f}x"
        )


if __name__ == "__main__":
    main()
