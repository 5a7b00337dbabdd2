from __future__ import annotations

import math
import random

import pytest

from bimql.errors import EmptyMeshError
from bimql.geom.core import (
    Aabb,
    Mesh,
    box_mesh,
    extrude_polygon,
    is_closed,
    mesh_aabb,
    mesh_volume,
    triangulate_polygon,
)


def test_unit_cube_extrusion():
    mesh = extrude_polygon([(0, 0), (1, 0), (1, 1), (0, 1)], 1.0)
    assert len(mesh.faces) == 12
    box = mesh_aabb(mesh)
    assert box.min == (0.0, 0.0, 0.0)
    assert box.max == (1.0, 1.0, 1.0)
    volume, approximate = mesh_volume(mesh)
    assert volume == pytest.approx(1.0)
    assert not approximate


def test_translated_cube_aabb():
    mesh = box_mesh((2.0, 0.0, 0.0), (3.0, 1.0, 1.0))
    box = mesh_aabb(mesh)
    assert box.min == (2.0, 0.0, 0.0)
    assert box.max == (3.0, 1.0, 1.0)


def test_open_mesh_falls_back_to_box_volume():
    mesh = extrude_polygon([(0, 0), (1, 0), (1, 1), (0, 1)], 1.0)
    mesh.faces = mesh.faces[2:]  # drop the bottom cap
    assert not is_closed(mesh)
    volume, approximate = mesh_volume(mesh)
    assert volume == pytest.approx(1.0)
    assert approximate


def test_aabb_centroid_and_degenerate():
    box = Aabb((0, 0, 0), (2, 4, 6))
    assert box.centroid == (1.0, 2.0, 3.0)
    point = Aabb((1, 2, 3), (1, 2, 3))
    assert point.centroid == (1.0, 2.0, 3.0)
    assert point.volume() == 0.0


def test_mesh_aabb_rejects_empty():
    with pytest.raises(EmptyMeshError):
        mesh_aabb(Mesh())
    with pytest.raises(EmptyMeshError):
        mesh_volume(Mesh())


def test_aabb_validation():
    with pytest.raises(ValueError):
        Aabb((1, 0, 0), (0, 1, 1))
    with pytest.raises(ValueError):
        Aabb((0, 0, 0), (1, 1, float("inf")))


def test_nonconvex_profile_ear_clipping():
    # L-shaped polygon: area 3, prism height 2 -> volume 6
    profile = [(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]
    triangles = triangulate_polygon(profile)
    assert len(triangles) == len(profile) - 2
    mesh = extrude_polygon(profile, 2.0)
    volume, approximate = mesh_volume(mesh)
    assert volume == pytest.approx(6.0)
    assert not approximate


def test_pentagon_prism_volume_exact():
    # gabled cross-section: rectangle 4x1 plus triangle height 2
    profile = [(0, 0), (4, 0), (4, 1), (2, 3), (0, 1)]
    mesh = extrude_polygon(profile, 10.0)
    volume, _ = mesh_volume(mesh)
    assert volume == pytest.approx((4 * 1 + 0.5 * 4 * 2) * 10.0)


def test_volume_invariant_under_rotation_translation():
    rng = random.Random(7)
    mesh = extrude_polygon([(0, 0), (3, 0), (3, 2), (0, 2)], 1.5)
    reference, _ = mesh_volume(mesh)
    for _ in range(10):
        angle = rng.uniform(0, 2 * math.pi)
        ca, sa = math.cos(angle), math.sin(angle)
        tx, ty, tz = (rng.uniform(-50, 50) for _ in range(3))
        moved = Mesh(
            vertices=[
                (ca * x - sa * y + tx, sa * x + ca * y + ty, z + tz)
                for x, y, z in mesh.vertices
            ],
            faces=list(mesh.faces),
        )
        volume, _ = mesh_volume(moved)
        assert abs(volume - reference) / reference < 1e-9


def test_reversed_winding_still_positive():
    profile = [(0, 1), (1, 1), (1, 0), (0, 0)]  # clockwise input
    mesh = extrude_polygon(profile, 1.0)
    volume, _ = mesh_volume(mesh)
    assert volume == pytest.approx(1.0)
