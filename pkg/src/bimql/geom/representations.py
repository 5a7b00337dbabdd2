"""Meshing for the supported subset of IFC shape representations.

Supported: extruded area solids over rectangle or arbitrary closed
profiles, faceted breps, polygonal/triangulated face sets, mapped items,
and boolean clipping results (first operand only, flagged approximate).
Free-form curves, surfaces, and swept solids are rejected with
UnsupportedRepresentationError rather than approximated silently.
"""

from __future__ import annotations

import numpy as np

from bimql.errors import UnsupportedRepresentationError
from bimql.geom.core import Mesh, triangulate_polygon
from bimql.ifc.placement import axis2placement2d, axis2placement3d
from bimql.step.model import UNSET, EntityRef, EnumToken, StepEntity, StepFile

ATTR_REPRESENTATION = 6


def _as_float(value) -> float:
    return float(value)


def _profile_points(file: StepFile, profile: StepEntity, scale: float) -> list[tuple[float, float]]:
    kind = profile.type_name
    if kind == "IFCRECTANGLEPROFILEDEF":
        xdim = _as_float(profile.attr(3)) * scale / 2.0
        ydim = _as_float(profile.attr(4)) * scale / 2.0
        corners = [(-xdim, -ydim), (xdim, -ydim), (xdim, ydim), (-xdim, ydim)]
        position = profile.attr(2)
        if isinstance(position, EntityRef):
            t = axis2placement2d(file.get(position), file)
            t = t.copy()
            t[:2, 2] *= scale
            corners = [
                (
                    float(t[0, 0] * x + t[0, 1] * y + t[0, 2]),
                    float(t[1, 0] * x + t[1, 1] * y + t[1, 2]),
                )
                for x, y in corners
            ]
        return corners
    if kind == "IFCARBITRARYCLOSEDPROFILEDEF":
        curve = file.get(profile.attr(2))
        if curve.type_name != "IFCPOLYLINE":
            raise UnsupportedRepresentationError(curve.type_name)
        points = []
        for ref in curve.attr(0):
            coords = file.get(ref).attr(0)
            points.append((_as_float(coords[0]) * scale, _as_float(coords[1]) * scale))
        if len(points) > 1 and points[0] == points[-1]:
            points = points[:-1]
        return points
    raise UnsupportedRepresentationError(kind)


def _mesh_extruded_area_solid(
    file: StepFile, solid: StepEntity, scale: float
) -> Mesh:
    profile = file.get(solid.attr(0))
    points = _profile_points(file, profile, scale)
    depth = _as_float(solid.attr(3)) * scale
    direction = file.get(solid.attr(2)).attr(0)
    dvec = np.array([_as_float(direction[i]) if i < len(direction) else 0.0 for i in range(3)])
    norm = float(np.linalg.norm(dvec))
    if norm < 1e-12 or abs(dvec[2]) < 1e-9:
        raise UnsupportedRepresentationError("in-plane extrusion direction")
    dvec = dvec / norm

    n = len(points)
    bottom = [(x, y, 0.0) for x, y in points]
    offset = dvec * depth
    top = [(x + offset[0], y + offset[1], offset[2]) for x, y in points]
    mesh = Mesh(vertices=bottom + top)
    for a, b, c in triangulate_polygon(points):
        mesh.faces.append((a, c, b))
        mesh.faces.append((n + a, n + b, n + c))
    for i in range(n):
        j = (i + 1) % n
        mesh.faces.append((i, j, n + j))
        mesh.faces.append((i, n + j, n + i))

    position = solid.attr(1)
    if isinstance(position, EntityRef):
        frame = axis2placement3d(file.get(position), file, scale)
        mesh.vertices = [
            tuple(float(c) for c in (frame @ np.array([x, y, z, 1.0]))[:3])
            for x, y, z in mesh.vertices
        ]
    return mesh


def _mesh_faceted_brep(file: StepFile, brep: StepEntity, scale: float) -> Mesh:
    shell = file.get(brep.attr(0))
    mesh = Mesh()
    index_of: dict[tuple[float, float, float], int] = {}

    def vertex_index(point: tuple[float, float, float]) -> int:
        if point not in index_of:
            index_of[point] = len(mesh.vertices)
            mesh.vertices.append(point)
        return index_of[point]

    for face_ref in shell.attr(0):
        face = file.get(face_ref)
        for bound_ref in face.attr(0):
            bound = file.get(bound_ref)
            if bound.type_name not in ("IFCFACEOUTERBOUND", "IFCFACEBOUND"):
                raise UnsupportedRepresentationError(bound.type_name)
            loop = file.get(bound.attr(0))
            if loop.type_name != "IFCPOLYLOOP":
                raise UnsupportedRepresentationError(loop.type_name)
            polygon = []
            for pref in loop.attr(0):
                coords = file.get(pref).attr(0)
                polygon.append(
                    (
                        _as_float(coords[0]) * scale,
                        _as_float(coords[1]) * scale,
                        _as_float(coords[2]) * scale,
                    )
                )
            orientation = bound.attr(1)
            if isinstance(orientation, EnumToken) and orientation.name == "F":
                polygon.reverse()
            indices = [vertex_index(p) for p in polygon]
            mesh.faces.extend(_triangulate_3d(polygon, indices))
            break  # outer bound only; holes are out of scope
    return mesh


def _triangulate_3d(
    polygon: list[tuple[float, float, float]], indices: list[int]
) -> list[tuple[int, int, int]]:
    """Project a planar 3D polygon to its dominant plane and ear-clip."""
    pts = np.asarray(polygon)
    if len(pts) == 3:
        return [(indices[0], indices[1], indices[2])]
    normal = np.zeros(3)
    for i in range(len(pts)):
        a, b = pts[i], pts[(i + 1) % len(pts)]
        normal += np.cross(a, b)
    drop = int(np.argmax(np.abs(normal)))
    keep = [i for i in range(3) if i != drop]
    planar = [(p[keep[0]], p[keep[1]]) for p in polygon]
    if normal[drop] < 0:
        planar = [(x, -y) for x, y in planar]
    return [
        (indices[a], indices[b], indices[c]) for a, b, c in triangulate_polygon(planar)
    ]


def _mesh_point_list_faces(
    file: StepFile, coords_entity: StepEntity, face_indices: list[list[int]], scale: float
) -> Mesh:
    mesh = Mesh(
        vertices=[
            (
                _as_float(p[0]) * scale,
                _as_float(p[1]) * scale,
                _as_float(p[2]) * scale,
            )
            for p in coords_entity.attr(0)
        ]
    )
    for polygon in face_indices:
        zero_based = [i - 1 for i in polygon]
        if len(zero_based) == 3:
            mesh.faces.append(tuple(zero_based))
        else:
            poly_points = [mesh.vertices[i] for i in zero_based]
            mesh.faces.extend(_triangulate_3d(poly_points, zero_based))
    return mesh


def _mesh_polygonal_face_set(file: StepFile, item: StepEntity, scale: float) -> Mesh:
    coords = file.get(item.attr(0))
    faces = []
    for face_ref in item.attr(2):
        face = file.get(face_ref)
        if face.type_name != "IFCINDEXEDPOLYGONALFACE":
            raise UnsupportedRepresentationError(face.type_name)
        faces.append([int(i) for i in face.attr(0)])
    return _mesh_point_list_faces(file, coords, faces, scale)


def _mesh_triangulated_face_set(file: StepFile, item: StepEntity, scale: float) -> Mesh:
    coords = file.get(item.attr(0))
    faces = [[int(i) for i in tri] for tri in item.attr(3)]
    return _mesh_point_list_faces(file, coords, faces, scale)


def _cartesian_operator(file: StepFile, op: StepEntity, scale: float) -> np.ndarray:
    if op.type_name != "IFCCARTESIANTRANSFORMATIONOPERATOR3D":
        raise UnsupportedRepresentationError(op.type_name)
    origin_coords = file.get(op.attr(2)).attr(0)
    origin = [
        _as_float(origin_coords[i]) * scale if i < len(origin_coords) else 0.0
        for i in range(3)
    ]
    factor = op.attr(3)
    s = 1.0 if factor is UNSET else _as_float(factor)

    def axis(ref, default):
        if not isinstance(ref, EntityRef):
            return np.asarray(default, dtype=float)
        ratios = file.get(ref).attr(0)
        v = np.array([_as_float(r) for r in ratios])
        return v / np.linalg.norm(v)

    x = axis(op.attr(0), (1.0, 0.0, 0.0))
    y = axis(op.attr(1), (0.0, 1.0, 0.0))
    z = axis(op.attr(4) if len(op.attributes) > 4 else UNSET, (0.0, 0.0, 1.0))
    transform = np.eye(4)
    transform[:3, 0] = x * s
    transform[:3, 1] = y * s
    transform[:3, 2] = z * s
    transform[:3, 3] = origin
    return transform


def _mesh_item(file: StepFile, item: StepEntity, scale: float) -> tuple[Mesh, bool]:
    kind = item.type_name
    if kind == "IFCEXTRUDEDAREASOLID":
        return _mesh_extruded_area_solid(file, item, scale), False
    if kind == "IFCFACETEDBREP":
        return _mesh_faceted_brep(file, item, scale), False
    if kind == "IFCPOLYGONALFACESET":
        return _mesh_polygonal_face_set(file, item, scale), False
    if kind == "IFCTRIANGULATEDFACESET":
        return _mesh_triangulated_face_set(file, item, scale), False
    if kind == "IFCMAPPEDITEM":
        rep_map = file.get(item.attr(0))
        origin = axis2placement3d(file.get(rep_map.attr(0)), file, scale)
        target = _cartesian_operator(file, file.get(item.attr(1)), scale)
        source_rep = file.get(rep_map.attr(1))
        inner, approx = _mesh_representation_items(file, source_rep, scale)
        transform = target @ origin
        inner.vertices = [
            tuple(float(c) for c in (transform @ np.array([x, y, z, 1.0]))[:3])
            for x, y, z in inner.vertices
        ]
        return inner, approx
    if kind == "IFCBOOLEANCLIPPINGRESULT":
        first = file.get(item.attr(1))
        mesh, _ = _mesh_item(file, first, scale)
        return mesh, True
    raise UnsupportedRepresentationError(kind)


def _mesh_representation_items(
    file: StepFile, shape_rep: StepEntity, scale: float
) -> tuple[Mesh, bool]:
    combined = Mesh()
    approximate = False
    for item_ref in shape_rep.attr(3):
        mesh, approx = _mesh_item(file, file.get(item_ref), scale)
        offset = len(combined.vertices)
        combined.vertices.extend(mesh.vertices)
        combined.faces.extend(
            (a + offset, b + offset, c + offset) for a, b, c in mesh.faces
        )
        approximate = approximate or approx
    return combined, approximate


def has_representation(file: StepFile, element: StepEntity) -> bool:
    return isinstance(element.attr(ATTR_REPRESENTATION), EntityRef)


def mesh_from_representation(
    file: StepFile,
    element: StepEntity,
    placement: np.ndarray,
    unit_scale: float,
) -> tuple[Mesh, bool]:
    """Absolute-meter triangle mesh for an element's body representation.

    Returns the mesh plus an ``approximate`` flag raised when a boolean
    clipping result was reduced to its first operand.
    """
    shape_ref = element.attr(ATTR_REPRESENTATION)
    if not isinstance(shape_ref, EntityRef):
        raise UnsupportedRepresentationError("element has no representation")
    product_shape = file.get(shape_ref)
    combined = Mesh()
    approximate = False
    for rep_ref in product_shape.attr(2):
        shape_rep = file.get(rep_ref)
        identifier = shape_rep.attr(1)
        if isinstance(identifier, str) and identifier not in ("Body", ""):
            continue
        mesh, approx = _mesh_representation_items(file, shape_rep, unit_scale)
        offset = len(combined.vertices)
        combined.vertices.extend(mesh.vertices)
        combined.faces.extend(
            (a + offset, b + offset, c + offset) for a, b, c in mesh.faces
        )
        approximate = approximate or approx
    if not combined.vertices:
        raise UnsupportedRepresentationError("no body representation")
    combined.vertices = [
        tuple(float(c) for c in (placement @ np.array([x, y, z, 1.0]))[:3])
        for x, y, z in combined.vertices
    ]
    combined.validate()
    return combined, approximate
