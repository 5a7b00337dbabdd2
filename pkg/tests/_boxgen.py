"""Shared random box-pair generator for adjacency tests."""

from __future__ import annotations

import random

from bimql.geom.core import Aabb

EPS_CHOICES = (0.0, 0.01, 0.05)


def random_box_pairs(count: int, seed: int):
    """Yield (box1, box2, eps) with mixed scales from 0.1 to 10 meters."""
    rng = random.Random(seed)
    for _ in range(count):
        boxes = []
        for _ in range(2):
            lo = [rng.uniform(-10, 10) for _ in range(3)]
            extent = [rng.uniform(0.1, 10.0) for _ in range(3)]
            boxes.append(
                Aabb(tuple(lo), tuple(l + e for l, e in zip(lo, extent)))
            )
        yield boxes[0], boxes[1], rng.choice(EPS_CHOICES)
