"""Extraction of the relational concept set from a parsed STEP file."""

from __future__ import annotations

import json
import logging

from bimql.errors import (
    BimqlError,
    NoBuildingError,
    NoStoreysError,
    UnsupportedRepresentationError,
)
from bimql.geom.core import Aabb, mesh_aabb, mesh_volume
from bimql.geom.representations import has_representation, mesh_from_representation
from bimql.ifc.placement import apply_point, resolve_placement
from bimql.ifc.records import (
    CANONICAL_IFC_NAMES,
    PREDEFINED_CAPTURED,
    BuildingRecord,
    ElementRecord,
    ExtractedModel,
    MeshRecord,
    PropertyRecord,
    StoreyRecord,
)
from bimql.ifc.units import length_unit_scale
from bimql.step.model import UNSET, EntityRef, EnumToken, StepEntity, StepFile, TypedValue

logger = logging.getLogger(__name__)

STOREY_TOL = 1e-6

#: IFC type token -> relational class (subtypes included explicitly)
CLASS_OF_TYPE = {
    "IFCSPACE": "room",
    "IFCWALL": "wall",
    "IFCWALLSTANDARDCASE": "wall",
    "IFCWALLELEMENTEDCASE": "wall",
    "IFCDOOR": "door",
    "IFCDOORSTANDARDCASE": "door",
    "IFCWINDOW": "window",
    "IFCWINDOWSTANDARDCASE": "window",
    "IFCSLAB": "slab",
    "IFCSLABSTANDARDCASE": "slab",
    "IFCSLABELEMENTEDCASE": "slab",
    "IFCCOLUMN": "column",
    "IFCCOLUMNSTANDARDCASE": "column",
    "IFCBEAM": "beam",
    "IFCBEAMSTANDARDCASE": "beam",
    "IFCROOF": "roof",
    "IFCSTAIR": "stair",
    "IFCRAILING": "railing",
    "IFCCOVERING": "ceiling",  # CEILING predefined type only, see below
    "IFCRAMP": "ramp",
    "IFCTRANSPORTELEMENT": "transport",
}

ATTR_GLOBAL_ID = 0
ATTR_NAME = 2
ATTR_DESCRIPTION = 3
ATTR_OBJECT_TYPE = 4
ATTR_LONG_NAME = 7
ATTR_STOREY_ELEVATION = 9
ATTR_PREDEFINED = {
    "door": 9,  # IFC4 IfcDoor.PredefinedType
    "slab": 7,
    "ceiling": 7,
    "roof": 7,
}


def _opt_text(value) -> str | None:
    return value if isinstance(value, str) and value != "" else None


def _warn(model: ExtractedModel, severity: str, entity_id: int | None, message: str) -> None:
    record = {"severity": severity, "entity_id": entity_id, "message": message}
    model.warnings.append(record)
    logger.warning(json.dumps(record))


def assign_storey(aabb: Aabb, storeys: list[StoreyRecord]) -> str:
    """Representative storey: greatest elevation at or below the centroid.

    Elements below the lowest storey clamp to it.
    """
    if not storeys:
        raise NoStoreysError("cannot assign an element without storeys")
    centroid_z = aabb.centroid[2]
    best = None
    for storey in storeys:
        if storey.elevation <= centroid_z + STOREY_TOL:
            if best is None or storey.elevation > best.elevation:
                best = storey
    if best is None:
        best = min(storeys, key=lambda s: s.elevation)
    return best.storey_id


def stringify_property_value(value) -> str | None:
    """Table-ready text for an IfcPropertySingleValue nominal value."""
    if isinstance(value, TypedValue):
        inner = value.value
        if isinstance(inner, EnumToken):  # IFCBOOLEAN(.T.) / IFCLOGICAL
            if inner.name == "T":
                return "True"
            if inner.name == "F":
                return "False"
            return inner.name
        value = inner
    if value is UNSET or value is None:
        return None
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return value if value else None
    if isinstance(value, EnumToken):
        return value.name
    return None


def extract_properties(
    file: StepFile,
    element: StepEntity,
    element_type: str,
    rel_index: dict[int, list[StepEntity]] | None = None,
) -> list[PropertyRecord]:
    """Property rows for one element via its property-set relations."""
    guid = element.attr(ATTR_GLOBAL_ID)
    if not isinstance(guid, str):
        return []
    relations = (
        rel_index.get(element.id, [])
        if rel_index is not None
        else [
            rel
            for rel in file.by_type("IFCRELDEFINESBYPROPERTIES")
            if isinstance(rel.attr(4), tuple)
            and any(
                isinstance(r, EntityRef) and r.id == element.id for r in rel.attr(4)
            )
        ]
    )
    rows: list[PropertyRecord] = []
    for rel in relations:
        pset_ref = rel.attr(5)
        if not isinstance(pset_ref, EntityRef):
            continue
        pset = file.get(pset_ref)
        if pset.type_name != "IFCPROPERTYSET":
            continue
        for prop_ref in pset.attr(4):
            prop = file.get(prop_ref)
            if prop.type_name != "IFCPROPERTYSINGLEVALUE":
                continue
            name = prop.attr(0)
            text = stringify_property_value(prop.attr(2))
            if not isinstance(name, str) or text is None:
                continue
            rows.append(
                PropertyRecord(
                    element_id=guid,
                    element_type=element_type,
                    property_name=name,
                    property_value=text,
                )
            )
    return rows


def _rel_defines_index(file: StepFile) -> dict[int, list[StepEntity]]:
    index: dict[int, list[StepEntity]] = {}
    for rel in file.by_type("IFCRELDEFINESBYPROPERTIES"):
        related = rel.attr(4)
        if not isinstance(related, tuple):
            continue
        for ref in related:
            if isinstance(ref, EntityRef):
                index.setdefault(ref.id, []).append(rel)
    return index


def _aggregate_parents(file: StepFile) -> dict[int, int]:
    parents: dict[int, int] = {}
    for rel in file.by_type("IFCRELAGGREGATES"):
        parent = rel.attr(4)
        children = rel.attr(5)
        if not isinstance(parent, EntityRef) or not isinstance(children, tuple):
            continue
        for child in children:
            if isinstance(child, EntityRef):
                parents[child.id] = parent.id
    return parents


def _predefined_text(element: StepEntity, ifc_class: str) -> str | None:
    index = ATTR_PREDEFINED.get(ifc_class)
    if index is None:
        return None
    value = element.attr(index)
    if isinstance(value, EnumToken):
        return value.name
    return _opt_text(value)


def extract_model(file: StepFile) -> ExtractedModel:
    """Pull buildings, storeys, elements, properties, and meshes.

    Aborts only when no IfcBuilding exists; per-element failures are
    downgraded to ingest warnings with a placement-origin fallback.
    """
    model = ExtractedModel()
    scale_warnings: list[str] = []
    scale = length_unit_scale(file, scale_warnings)
    for message in scale_warnings:
        _warn(model, "warning", None, message)

    buildings = list(file.by_type("IFCBUILDING"))
    if not buildings:
        raise NoBuildingError("the file contains no IfcBuilding")
    for b in buildings:
        model.buildings.append(
            BuildingRecord(
                building_id=b.attr(ATTR_GLOBAL_ID),
                name=_opt_text(b.attr(ATTR_NAME)),
                description=_opt_text(b.attr(ATTR_DESCRIPTION)),
                long_name=_opt_text(b.attr(ATTR_LONG_NAME)),
                object_type=_opt_text(b.attr(ATTR_OBJECT_TYPE)),
            )
        )

    parents = _aggregate_parents(file)
    building_guid_of: dict[int, str] = {b.id: b.attr(ATTR_GLOBAL_ID) for b in buildings}

    def owning_building(storey: StepEntity) -> str:
        node = storey.id
        for _ in range(32):
            parent = parents.get(node)
            if parent is None:
                break
            if parent in building_guid_of:
                return building_guid_of[parent]
            node = parent
        _warn(
            model,
            "warning",
            storey.id,
            "storey is not aggregated under a building; attached to the first",
        )
        return model.buildings[0].building_id

    seen_elevations: dict[str, set[float]] = {}
    for storey in file.by_type("IFCBUILDINGSTOREY"):
        elevation_raw = storey.attr(ATTR_STOREY_ELEVATION)
        elevation = (
            float(elevation_raw) * scale if elevation_raw is not UNSET else 0.0
        )
        building_id = owning_building(storey)
        bucket = seen_elevations.setdefault(building_id, set())
        if any(abs(elevation - e) < STOREY_TOL for e in bucket):
            _warn(
                model,
                "warning",
                storey.id,
                f"duplicate storey elevation {elevation} in building {building_id}",
            )
        bucket.add(elevation)
        model.storeys.append(
            StoreyRecord(
                storey_id=storey.attr(ATTR_GLOBAL_ID),
                name=_opt_text(storey.attr(ATTR_NAME)),
                elevation=elevation,
                building_id=building_id,
                long_name=_opt_text(storey.attr(ATTR_LONG_NAME)),
                description=_opt_text(storey.attr(ATTR_DESCRIPTION)),
            )
        )

    if not model.storeys:
        _warn(model, "warning", None, "model has no storeys; elements get a synthetic one")
        model.storeys.append(
            StoreyRecord(
                storey_id="SYNTHETIC_STOREY_______",
                name="Level 0",
                elevation=0.0,
                building_id=model.buildings[0].building_id,
            )
        )

    rel_index = _rel_defines_index(file)

    for eid in sorted(file.entities):
        entity = file.entities[eid]
        ifc_class = CLASS_OF_TYPE.get(entity.type_name)
        if ifc_class is None:
            continue
        if entity.type_name == "IFCCOVERING":
            predefined = _predefined_text(entity, "ceiling")
            if predefined != "CEILING":
                continue
        guid = entity.attr(ATTR_GLOBAL_ID)
        if not isinstance(guid, str):
            _warn(model, "warning", eid, "element has no GUID; skipped")
            continue

        try:
            placement = resolve_placement(file, entity, scale)
        except BimqlError as exc:
            _warn(model, "warning", eid, f"placement failed: {exc}")
            placement = None

        mesh = None
        approximate = False
        if placement is not None and has_representation(file, entity):
            try:
                mesh, approximate = mesh_from_representation(
                    file, entity, placement, scale
                )
            except (BimqlError, ValueError) as exc:
                _warn(model, "warning", eid, f"geometry failed: {exc}")
                mesh = None

        if mesh is not None and mesh.vertices:
            aabb = mesh_aabb(mesh)
            volume, open_mesh = mesh_volume(mesh)
            approximate = approximate or open_mesh
            model.meshes.append(
                MeshRecord(
                    element_id=guid,
                    element_type=CANONICAL_IFC_NAMES[ifc_class],
                    vertices=mesh.vertices,
                    faces=mesh.faces,
                )
            )
        else:
            if placement is not None:
                origin = apply_point(placement, (0.0, 0.0, 0.0))
            else:
                origin = (0.0, 0.0, 0.0)
            aabb = Aabb(origin, origin)
            volume = 0.0
            _warn(model, "warning", eid, "element has no usable geometry")

        try:
            record = ElementRecord(
                element_id=guid,
                ifc_class=ifc_class,
                name=_opt_text(entity.attr(ATTR_NAME)),
                description=_opt_text(entity.attr(ATTR_DESCRIPTION)),
                storey_id=assign_storey(aabb, model.storeys),
                centroid=aabb.centroid,
                aabb=aabb,
                volume=volume,
                predefined_type=(
                    _predefined_text(entity, ifc_class)
                    if ifc_class in PREDEFINED_CAPTURED
                    else None
                ),
                approximate=approximate,
            )
        except ValueError as exc:
            _warn(model, "warning", eid, f"record rejected: {exc}")
            continue
        model.elements.append(record)
        model.properties.extend(
            extract_properties(file, entity, CANONICAL_IFC_NAMES[ifc_class], rel_index)
        )

    return model
