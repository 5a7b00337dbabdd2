"""Bounding-box adjacency checks.

``boxes_adjacent`` is the literal check order used during graph
construction: with the containment flag set, an epsilon-slack
intersection test runs first, then a bidirectional containment test,
then per-axis face contact with strict overlap on the other two axes.
The containment branch cannot fire when the intersection branch runs
first; it is kept so each verdict stays testable in isolation.

The all-pairs scan over n boxes is the quadratic hot loop. A compiled
kernel is used when the extension built; set ``BIMQL_PURE_ADJACENCY=1``
to force the pure-Python kernel.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from bimql.geom._boxpairs_py import scan_pairs as _scan_pairs_py

try:
    from bimql.geom._boxpairs import scan_pairs as _scan_pairs_compiled
except ImportError:  # extension not built
    _scan_pairs_compiled = None

KERNEL = "compiled" if _scan_pairs_compiled is not None else "python"
if os.environ.get("BIMQL_PURE_ADJACENCY") == "1":
    KERNEL = "python"

KIND_NONE = "none"
KIND_INTERSECT = "intersect"
KIND_CONTAINMENT = "containment"
KIND_FACE = "face-adjacency"


@dataclass(frozen=True)
class AdjacencyVerdict:
    adjacent: bool
    kind: str


_NONE = AdjacencyVerdict(False, KIND_NONE)
_INTERSECT = AdjacencyVerdict(True, KIND_INTERSECT)
_CONTAINMENT = AdjacencyVerdict(True, KIND_CONTAINMENT)
_FACE = AdjacencyVerdict(True, KIND_FACE)


def boxes_adjacent(b1, b2, eps: float, gamma: bool) -> AdjacencyVerdict:
    """Decide whether two boxes are adjacent under tolerance ``eps``.

    ``gamma`` enables the intersection and containment tests; without it
    only face contact counts.
    """
    if eps < 0:
        raise ValueError("tolerance must be non-negative")
    m1, ma1 = b1.min, b1.max
    m2, ma2 = b2.min, b2.max

    if gamma:
        if all(
            ma1[i] >= m2[i] - eps and m1[i] <= ma2[i] + eps for i in range(3)
        ):
            return _INTERSECT
        c1 = all(m1[i] <= m2[i] + eps and ma1[i] >= ma2[i] - eps for i in range(3))
        c2 = all(m2[i] <= m1[i] + eps and ma2[i] >= ma1[i] - eps for i in range(3))
        if c1 or c2:
            return _CONTAINMENT

    for k in range(3):
        touching = abs(ma1[k] - m2[k]) < eps or abs(ma2[k] - m1[k]) < eps
        if touching:
            overlap = all(
                m1[j] < ma2[j] - eps and ma1[j] > m2[j] + eps
                for j in range(3)
                if j != k
            )
            if overlap:
                return _FACE
    return _NONE


def adjacent_pairs(
    mins: np.ndarray, maxs: np.ndarray, eps: float, gamma: bool = True
) -> list[tuple[int, int]]:
    """Indices (i, j), i < j, of adjacent boxes among n(n-1)/2 pairs."""
    mins = np.ascontiguousarray(mins, dtype=np.float64)
    maxs = np.ascontiguousarray(maxs, dtype=np.float64)
    if mins.shape != maxs.shape or mins.ndim != 2 or mins.shape[1] != 3:
        raise ValueError("expected (n, 3) min and max arrays")
    if KERNEL == "compiled":
        flat = _scan_pairs_compiled(mins, maxs, float(eps), bool(gamma))
    else:
        flat = _scan_pairs_py(mins, maxs, float(eps), bool(gamma))
    return [(int(flat[i]), int(flat[i + 1])) for i in range(0, len(flat), 2)]
