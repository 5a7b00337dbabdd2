"""Resolution of nested local placements into absolute transforms."""

from __future__ import annotations

import numpy as np

from bimql.errors import CyclicPlacementError, MalformedPlacementError
from bimql.step.model import UNSET, EntityRef, StepEntity, StepFile

ORTHO_TOL = 1e-3

# IfcProduct: GlobalId, OwnerHistory, Name, Description, ObjectType,
# ObjectPlacement, Representation, ...
ATTR_OBJECT_PLACEMENT = 5


def identity() -> np.ndarray:
    return np.eye(4)


def translation(x: float, y: float, z: float) -> np.ndarray:
    t = np.eye(4)
    t[:3, 3] = (x, y, z)
    return t


def compose(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    return outer @ inner


def apply_point(transform: np.ndarray, point) -> tuple[float, float, float]:
    v = transform @ np.array([point[0], point[1], point[2], 1.0])
    return (float(v[0]), float(v[1]), float(v[2]))


def apply_vector(transform: np.ndarray, vector) -> tuple[float, float, float]:
    v = transform[:3, :3] @ np.asarray(vector, dtype=float)
    return (float(v[0]), float(v[1]), float(v[2]))


def _vector(entity_or_unset, file: StepFile, default) -> np.ndarray:
    if entity_or_unset is UNSET or entity_or_unset is None:
        return np.asarray(default, dtype=float)
    entity = file.get(entity_or_unset)
    ratios = entity.attr(0)
    vec = np.array([float(v) for v in ratios] + [0.0] * (3 - len(ratios)))
    return vec


def _normalize(v: np.ndarray, what: str) -> np.ndarray:
    norm = float(np.linalg.norm(v))
    if norm < 1e-12:
        raise MalformedPlacementError(f"{what} direction has zero length")
    return v / norm


def axis2placement3d(entity: StepEntity, file: StepFile, scale: float) -> np.ndarray:
    """4x4 transform for an IfcAxis2Placement3D.

    Axis defaults to +Z and RefDirection to +X when unset. The axes are
    corrected by Gram-Schmidt; if they stay non-orthogonal beyond the
    1e-3 tolerance the placement is rejected.
    """
    location = file.get(entity.attr(0))
    coords = location.attr(0)
    origin = np.array(
        [float(coords[i]) * scale if i < len(coords) else 0.0 for i in range(3)]
    )
    z_axis = _normalize(_vector(entity.attr(1), file, (0.0, 0.0, 1.0)), "axis")
    x_hint = _vector(entity.attr(2), file, (1.0, 0.0, 0.0))

    x_axis = x_hint - np.dot(x_hint, z_axis) * z_axis
    if float(np.linalg.norm(x_axis)) < ORTHO_TOL:
        raise MalformedPlacementError(
            "reference direction is parallel to the axis"
        )
    x_axis = _normalize(x_axis, "reference")
    y_axis = np.cross(z_axis, x_axis)

    transform = np.eye(4)
    transform[:3, 0] = x_axis
    transform[:3, 1] = y_axis
    transform[:3, 2] = z_axis
    transform[:3, 3] = origin
    return transform


def axis2placement2d(entity: StepEntity, file: StepFile) -> np.ndarray:
    """3x3 planar transform for an IfcAxis2Placement2D (profile space)."""
    location = file.get(entity.attr(0))
    coords = location.attr(0)
    origin = np.array([float(coords[0]), float(coords[1])])
    ref = entity.attr(1)
    if ref is UNSET:
        x_axis = np.array([1.0, 0.0])
    else:
        ratios = file.get(ref).attr(0)
        x_axis = _normalize(
            np.array([float(ratios[0]), float(ratios[1])]), "reference"
        )
    transform = np.eye(3)
    transform[:2, 0] = x_axis
    transform[:2, 1] = (-x_axis[1], x_axis[0])
    transform[:2, 2] = origin
    return transform


def resolve_placement(
    file: StepFile, element: StepEntity, scale: float = 1.0
) -> np.ndarray:
    """Accumulate the relative placement chain of an element.

    Follows IfcLocalPlacement.PlacementRelTo up to the root, composing
    each IfcAxis2Placement3D. Cycles raise CyclicPlacementError.
    """
    placement_ref = element.attr(ATTR_OBJECT_PLACEMENT)
    if placement_ref is UNSET or not isinstance(placement_ref, EntityRef):
        return identity()

    transform = np.eye(4)
    seen: set[int] = set()
    current = placement_ref
    while isinstance(current, EntityRef):
        if current.id in seen:
            raise CyclicPlacementError(
                f"placement chain revisits #{current.id}"
            )
        seen.add(current.id)
        local = file.get(current)
        if local.type_name != "IFCLOCALPLACEMENT":
            raise MalformedPlacementError(
                f"#{local.id} is {local.type_name}, expected IFCLOCALPLACEMENT"
            )
        relative = local.attr(1)
        if isinstance(relative, EntityRef):
            transform = axis2placement3d(file.get(relative), file, scale) @ transform
        current = local.attr(0)
    return transform


def check_orthonormal(transform: np.ndarray, tol: float = 1e-6) -> bool:
    rot = transform[:3, :3]
    return bool(np.allclose(rot @ rot.T, np.eye(3), atol=tol))
