"""Axis-aligned boxes, triangle meshes, and derived quantities."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from bimql.errors import EmptyMeshError

Point = tuple[float, float, float]


@dataclass(frozen=True)
class Aabb:
    min: Point
    max: Point

    def __post_init__(self) -> None:
        for lo, hi in zip(self.min, self.max):
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise ValueError("box coordinates must be finite")
            if lo > hi:
                raise ValueError(f"box min {self.min} exceeds max {self.max}")

    @property
    def centroid(self) -> Point:
        return (
            (self.min[0] + self.max[0]) / 2.0,
            (self.min[1] + self.max[1]) / 2.0,
            (self.min[2] + self.max[2]) / 2.0,
        )

    @property
    def extents(self) -> Point:
        return (
            self.max[0] - self.min[0],
            self.max[1] - self.min[1],
            self.max[2] - self.min[2],
        )

    def volume(self) -> float:
        dx, dy, dz = self.extents
        return dx * dy * dz


@dataclass
class Mesh:
    """Triangulated surface in absolute meters."""

    vertices: list[Point] = field(default_factory=list)
    faces: list[tuple[int, int, int]] = field(default_factory=list)

    def validate(self) -> None:
        n = len(self.vertices)
        for face in self.faces:
            a, b, c = face
            if a >= n or b >= n or c >= n:
                raise ValueError(f"face {face} references a missing vertex")
            if a == b or b == c or a == c:
                raise ValueError(f"degenerate face {face}")


def mesh_aabb(mesh: Mesh) -> Aabb:
    if not mesh.vertices:
        raise EmptyMeshError("cannot take the bounding box of an empty mesh")
    xs = [v[0] for v in mesh.vertices]
    ys = [v[1] for v in mesh.vertices]
    zs = [v[2] for v in mesh.vertices]
    return Aabb((min(xs), min(ys), min(zs)), (max(xs), max(ys), max(zs)))


def is_closed(mesh: Mesh) -> bool:
    """True when every undirected edge is shared by exactly two faces."""
    if not mesh.faces:
        return False
    edge_count: dict[tuple[int, int], int] = {}
    for a, b, c in mesh.faces:
        for u, v in ((a, b), (b, c), (c, a)):
            key = (u, v) if u < v else (v, u)
            edge_count[key] = edge_count.get(key, 0) + 1
    return all(count == 2 for count in edge_count.values())


def mesh_volume(mesh: Mesh) -> tuple[float, bool]:
    """Volume in cubic meters plus an ``approximate`` flag.

    Closed meshes get the signed tetrahedron sum; open meshes fall back
    to the bounding-box volume with the flag set.
    """
    if not mesh.vertices:
        raise EmptyMeshError("cannot take the volume of an empty mesh")
    if not is_closed(mesh):
        return mesh_aabb(mesh).volume(), True
    total = 0.0
    verts = mesh.vertices
    for a, b, c in mesh.faces:
        ax, ay, az = verts[a]
        bx, by, bz = verts[b]
        cx, cy, cz = verts[c]
        total += (
            ax * (by * cz - bz * cy)
            - ay * (bx * cz - bz * cx)
            + az * (bx * cy - by * cx)
        )
    return abs(total) / 6.0, False


def _polygon_area_2d(points: list[tuple[float, float]]) -> float:
    total = 0.0
    n = len(points)
    for i in range(n):
        x1, y1 = points[i]
        x2, y2 = points[(i + 1) % n]
        total += x1 * y2 - x2 * y1
    return total / 2.0


def _point_in_triangle(
    p: tuple[float, float],
    a: tuple[float, float],
    b: tuple[float, float],
    c: tuple[float, float],
) -> bool:
    def cross(o, u, v):
        return (u[0] - o[0]) * (v[1] - o[1]) - (u[1] - o[1]) * (v[0] - o[0])

    d1, d2, d3 = cross(a, b, p), cross(b, c, p), cross(c, a, p)
    has_neg = d1 < 0 or d2 < 0 or d3 < 0
    has_pos = d1 > 0 or d2 > 0 or d3 > 0
    return not (has_neg and has_pos)


def triangulate_polygon(points: list[tuple[float, float]]) -> list[tuple[int, int, int]]:
    """Ear-clipping triangulation of a simple polygon.

    Convex polygons reduce to a fan from the first vertex.
    """
    n = len(points)
    if n < 3:
        raise ValueError("a polygon needs at least three vertices")
    if n == 3:
        return [(0, 1, 2)]

    area = _polygon_area_2d(points)
    order = list(range(n))
    if area < 0:
        order.reverse()

    def convex(i_prev: int, i_cur: int, i_next: int) -> bool:
        ax, ay = points[i_prev]
        bx, by = points[i_cur]
        cx, cy = points[i_next]
        return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax) > 1e-15

    triangles: list[tuple[int, int, int]] = []
    remaining = order[:]
    guard = 0
    while len(remaining) > 3 and guard < n * n:
        guard += 1
        clipped = False
        for k in range(len(remaining)):
            i_prev = remaining[k - 1]
            i_cur = remaining[k]
            i_next = remaining[(k + 1) % len(remaining)]
            if not convex(i_prev, i_cur, i_next):
                continue
            ear = True
            for other in remaining:
                if other in (i_prev, i_cur, i_next):
                    continue
                if _point_in_triangle(
                    points[other], points[i_prev], points[i_cur], points[i_next]
                ):
                    ear = False
                    break
            if ear:
                triangles.append((i_prev, i_cur, i_next))
                remaining.pop(k)
                clipped = True
                break
        if not clipped:
            # numerically stuck polygon: fall back to a fan
            break
    if len(remaining) == 3:
        triangles.append((remaining[0], remaining[1], remaining[2]))
    elif len(remaining) > 3:
        for k in range(1, len(remaining) - 1):
            triangles.append((remaining[0], remaining[k], remaining[k + 1]))
    return triangles


def extrude_polygon(
    profile: list[tuple[float, float]], depth: float
) -> Mesh:
    """Closed prism over a simple polygon, extruded along +Z of the profile."""
    if depth <= 0:
        raise ValueError("extrusion depth must be positive")
    pts = list(profile)
    if len(pts) > 1 and pts[0] == pts[-1]:
        pts = pts[:-1]
    if _polygon_area_2d(pts) < 0:
        pts.reverse()
    n = len(pts)
    bottom = [(x, y, 0.0) for x, y in pts]
    top = [(x, y, depth) for x, y in pts]
    mesh = Mesh(vertices=bottom + top)
    cap = triangulate_polygon(pts)
    for a, b, c in cap:
        mesh.faces.append((a, c, b))           # bottom, outward -Z
        mesh.faces.append((n + a, n + b, n + c))  # top, outward +Z
    for i in range(n):
        j = (i + 1) % n
        mesh.faces.append((i, j, n + j))
        mesh.faces.append((i, n + j, n + i))
    return mesh


def box_mesh(lo: Point, hi: Point) -> Mesh:
    mesh = extrude_polygon(
        [(lo[0], lo[1]), (hi[0], lo[1]), (hi[0], hi[1]), (lo[0], hi[1])],
        hi[2] - lo[2],
    )
    mesh.vertices = [(x, y, z + lo[2]) for x, y, z in mesh.vertices]
    return mesh
