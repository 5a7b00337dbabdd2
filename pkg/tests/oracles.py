"""Independent oracles the implementation is checked against.

These deliberately avoid the production code paths: the box oracle
samples grid points instead of comparing intervals, the path oracle
enumerates every simple path, and the instance-count oracle scans the
source text.
"""

from __future__ import annotations

import re

GRID = 20


def sampled_box_intersects(b1_min, b1_max, b2_min, b2_max, eps: float) -> bool:
    """Grid-sampling test for 'box 1 meets box 2 dilated by eps'.

    Samples a GRID^3 inclusive lattice over box 1 and asks whether any
    point falls inside the dilated box 2; then the same with the boxes
    swapped, and finally the lattice of the overlap interval itself so
    touching faces are not missed between sample points.
    """

    def axis_points(lo: float, hi: float) -> list[float]:
        if hi <= lo:
            return [lo]
        return [lo + (hi - lo) * i / (GRID - 1) for i in range(GRID)]

    def inside(p, lo, hi) -> bool:
        return all(lo[i] - eps <= p[i] <= hi[i] + eps for i in range(3))

    for a_min, a_max, b_min, b_max in (
        (b1_min, b1_max, b2_min, b2_max),
        (b2_min, b2_max, b1_min, b1_max),
    ):
        # a lattice point of the GRID^3 product lies inside the dilated
        # box exactly when every axis contributes at least one sample
        # point inside its interval, so the product scan factors per axis
        if all(
            any(
                b_min[i] - eps <= t <= b_max[i] + eps
                for t in axis_points(a_min[i], a_max[i])
            )
            for i in range(3)
        ):
            return True

    # a sliver thinner than the lattice spacing can slip between grid
    # points; probe the corner of box 1 clamped toward the dilated box 2
    corner = tuple(
        min(max(b1_min[i], b2_min[i] - eps), b1_max[i]) for i in range(3)
    )
    return inside(corner, b2_min, b2_max)


def enumerate_paths(adjacency: dict[str, dict[str, float]], start: str, goal: str):
    """Every simple path start -> goal as (node list, total distance)."""
    paths: list[tuple[list[str], float]] = []

    def walk(node: str, seen: list[str], total: float) -> None:
        if node == goal:
            paths.append((list(seen), total))
            return
        for neighbor, weight in adjacency[node].items():
            if neighbor in seen:
                continue
            seen.append(neighbor)
            walk(neighbor, seen, total + weight)
            seen.pop()

    walk(start, [start], 0.0)
    return paths


def count_instances_textually(source: str) -> int:
    """Count '#<digits>=' instance headers after stripping comments."""
    stripped = re.sub(r"/\*.*?\*/", "", source, flags=re.S)
    _, _, data = stripped.partition("DATA;")
    return len(re.findall(r"^\s*#\d+\s*=", data, flags=re.M))
