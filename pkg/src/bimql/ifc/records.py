"""Record types produced by model extraction."""

from __future__ import annotations

from dataclasses import dataclass, field

from bimql.geom.core import Aabb, Point

#: Relational class names, in table order.
ELEMENT_CLASSES = (
    "beam",
    "ceiling",
    "column",
    "door",
    "railing",
    "ramp",
    "roof",
    "room",
    "slab",
    "stair",
    "transport",
    "wall",
    "window",
)

#: element classes that become topology-graph nodes
NAVIGABLE_CLASSES = ("room", "door", "stair", "ramp")

#: classes whose predefined type is kept on the record
PREDEFINED_CAPTURED = ("door", "slab", "ceiling", "roof")

#: relational class -> canonical IFC class name used in property rows
CANONICAL_IFC_NAMES = {
    "beam": "IfcBeam",
    "ceiling": "IfcCovering",
    "column": "IfcColumn",
    "door": "IfcDoor",
    "railing": "IfcRailing",
    "ramp": "IfcRamp",
    "roof": "IfcRoof",
    "room": "IfcSpace",
    "slab": "IfcSlab",
    "stair": "IfcStair",
    "transport": "IfcTransportElement",
    "wall": "IfcWall",
    "window": "IfcWindow",
}


@dataclass(frozen=True)
class BuildingRecord:
    building_id: str
    name: str | None = None
    description: str | None = None
    long_name: str | None = None
    object_type: str | None = None


@dataclass(frozen=True)
class StoreyRecord:
    storey_id: str
    name: str | None
    elevation: float
    building_id: str
    long_name: str | None = None
    description: str | None = None


@dataclass(frozen=True)
class ElementRecord:
    element_id: str
    ifc_class: str
    name: str | None
    description: str | None
    storey_id: str
    centroid: Point
    aabb: Aabb
    volume: float
    predefined_type: str | None = None
    approximate: bool = False

    def __post_init__(self) -> None:
        if self.ifc_class not in ELEMENT_CLASSES:
            raise ValueError(f"unknown element class {self.ifc_class!r}")
        if self.volume < 0:
            raise ValueError("volume must be non-negative")
        for c, lo, hi in zip(self.centroid, self.aabb.min, self.aabb.max):
            if not (lo - 1e-9 <= c <= hi + 1e-9):
                raise ValueError("centroid lies outside the bounding box")


@dataclass(frozen=True)
class PropertyRecord:
    element_id: str
    element_type: str
    property_name: str
    property_value: str


@dataclass
class MeshRecord:
    element_id: str
    element_type: str
    vertices: list[Point]
    faces: list[tuple[int, int, int]]


@dataclass
class ExtractedModel:
    buildings: list[BuildingRecord] = field(default_factory=list)
    storeys: list[StoreyRecord] = field(default_factory=list)
    elements: list[ElementRecord] = field(default_factory=list)
    properties: list[PropertyRecord] = field(default_factory=list)
    meshes: list[MeshRecord] = field(default_factory=list)
    warnings: list[dict] = field(default_factory=list)

    def elements_of_class(self, ifc_class: str) -> list[ElementRecord]:
        return [e for e in self.elements if e.ifc_class == ifc_class]

    def navigable_elements(self) -> list[ElementRecord]:
        return [e for e in self.elements if e.ifc_class in NAVIGABLE_CLASSES]
