"""Pure-Python fallback for the all-pairs adjacency scan.

Mirrors ``_boxpairs.pyx`` decision for decision; both kernels must stay
in agreement (covered by tests that run the scan under each).
"""

from __future__ import annotations


def _pair_adjacent(mins, maxs, i: int, j: int, eps: float, gamma: bool) -> bool:
    if gamma:
        hit = True
        for k in range(3):
            if not (
                maxs[i, k] >= mins[j, k] - eps and mins[i, k] <= maxs[j, k] + eps
            ):
                hit = False
                break
        if hit:
            return True
        c1 = True
        c2 = True
        for k in range(3):
            if not (mins[i, k] <= mins[j, k] + eps and maxs[i, k] >= maxs[j, k] - eps):
                c1 = False
            if not (mins[j, k] <= mins[i, k] + eps and maxs[j, k] >= maxs[i, k] - eps):
                c2 = False
        if c1 or c2:
            return True
    for k in range(3):
        d1 = maxs[i, k] - mins[j, k]
        d2 = maxs[j, k] - mins[i, k]
        if abs(d1) < eps or abs(d2) < eps:
            overlap = True
            for m in range(3):
                if m == k:
                    continue
                if not (
                    mins[i, m] < maxs[j, m] - eps and maxs[i, m] > mins[j, m] + eps
                ):
                    overlap = False
                    break
            if overlap:
                return True
    return False


def scan_pairs(mins, maxs, eps: float, gamma: bool) -> list[int]:
    n = mins.shape[0]
    out: list[int] = []
    for i in range(n):
        for j in range(i + 1, n):
            if _pair_adjacent(mins, maxs, i, j, eps, gamma):
                out.append(i)
                out.append(j)
    return out
