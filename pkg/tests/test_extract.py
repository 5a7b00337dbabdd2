from __future__ import annotations

import re

import pytest

from bimql.errors import NoBuildingError, NoStoreysError
from bimql.geom.core import Aabb
from bimql.ifc.extract import assign_storey, extract_model, stringify_property_value
from bimql.ifc.records import StoreyRecord
from bimql.step.model import EnumToken, TypedValue
from bimql.step.parser import parse_step

from .test_step_parser import wrap


def storey(sid: str, elevation: float) -> StoreyRecord:
    return StoreyRecord(sid, sid, elevation, "B" * 22)


def box_at(z: float) -> Aabb:
    return Aabb((0, 0, z - 0.5), (1, 1, z + 0.5))


class TestAssignStorey:
    STOREYS = [storey("S0", 0.0), storey("S1", 2.7)]

    def test_between_floors_goes_down(self):
        assert assign_storey(box_at(1.25), self.STOREYS) == "S0"

    def test_boundary_is_inclusive(self):
        assert assign_storey(box_at(2.7), self.STOREYS) == "S1"

    def test_below_lowest_clamps(self):
        assert assign_storey(box_at(-0.2), self.STOREYS) == "S0"

    def test_no_storeys_rejected(self):
        with pytest.raises(NoStoreysError):
            assign_storey(box_at(0.0), [])


def test_stringify_property_values():
    assert stringify_property_value(TypedValue("IFCBOOLEAN", EnumToken("T"))) == "True"
    assert stringify_property_value(TypedValue("IFCBOOLEAN", EnumToken("F"))) == "False"
    assert (
        stringify_property_value(
            TypedValue("IFCTHERMALTRANSMITTANCEMEASURE", 1.4)
        )
        == "1.4"
    )
    assert stringify_property_value(TypedValue("IFCLABEL", "x")) == "x"
    assert stringify_property_value("") is None


# --- full-model extraction on the bundled house -----------------------------


def test_reference_counts(fzk_model):
    assert len(fzk_model.storeys) == 2
    assert len(fzk_model.elements_of_class("room")) == 7
    assert len(fzk_model.elements_of_class("door")) == 5
    assert len(fzk_model.elements_of_class("stair")) == 1
    assert len(fzk_model.elements_of_class("wall")) == 13
    assert len(fzk_model.elements_of_class("window")) == 11


def test_building_name(fzk_model):
    assert [b.name for b in fzk_model.buildings] == ["FZK-Haus"]


def test_property_row_count(fzk_model):
    assert len(fzk_model.properties) == 321


def test_haustuer_properties(fzk_model):
    door = next(e for e in fzk_model.elements if e.name == "Haustuer")
    props = {
        p.property_name: p.property_value
        for p in fzk_model.properties
        if p.element_id == door.element_id
    }
    assert props["IsExternal"] == "True"
    assert props["ThermalTransmittance"] == "1.4"


def test_element_without_relations_has_no_properties(fzk_model):
    with_props = {p.element_id for p in fzk_model.properties}
    all_ids = {e.element_id for e in fzk_model.elements}
    assert with_props == all_ids  # every fixture element carries a pset


def test_referential_closure(fzk_model):
    storey_ids = {s.storey_id for s in fzk_model.storeys}
    building_ids = {b.building_id for b in fzk_model.buildings}
    assert all(e.storey_id in storey_ids for e in fzk_model.elements)
    assert all(s.building_id in building_ids for s in fzk_model.storeys)


def test_element_record_invariants(fzk_model):
    for element in fzk_model.elements:
        lo, hi = element.aabb.min, element.aabb.max
        assert all(a <= b for a, b in zip(lo, hi))
        assert all(
            lo[i] - 1e-9 <= element.centroid[i] <= hi[i] + 1e-9 for i in range(3)
        )
        assert element.volume >= 0


def test_guids_are_well_formed(fzk_model):
    pattern = re.compile(r"^[0-9A-Za-z_$]{22}$")
    for element in fzk_model.elements:
        assert pattern.match(element.element_id), element.element_id


def test_mesh_records_valid(fzk_model):
    assert fzk_model.meshes
    for mesh in fzk_model.meshes:
        n = len(mesh.vertices)
        for face in mesh.faces:
            assert len(set(face)) == 3
            assert all(i < n for i in face)


def test_no_warnings_on_clean_fixture(fzk_model):
    assert fzk_model.warnings == []


def test_building_without_elements_is_fine():
    doc = wrap(
        "#1=IFCBUILDING('0000000000000000000abc',$,'Empty',$,$,$,$,$,$,$,$,$);"
    )
    model = extract_model(parse_step(doc))
    assert model.elements == []
    assert len(model.storeys) == 1  # synthetic fallback storey


def test_no_building_aborts():
    doc = wrap("#1=IFCWALL('0000000000000000000abd',$,'W',$,$,$,$,$,$);")
    with pytest.raises(NoBuildingError):
        extract_model(parse_step(doc))


def test_element_without_geometry_falls_back_to_placement(fzk_bytes):
    text = fzk_bytes.decode()
    # strip the stair's representation reference; keep the placement
    match = re.search(r"#(\d+)=IFCSTAIR\(([^;]*)\);", text)
    assert match
    original = match.group(0)
    crippled = re.sub(r",#\d+,\$,\.SPIRAL_STAIR\.\)", ",$,$,.SPIRAL_STAIR.)", original)
    assert crippled != original
    model = extract_model(parse_step(text.replace(original, crippled)))
    stair = model.elements_of_class("stair")[0]
    assert stair.volume == 0.0
    assert stair.aabb.min == stair.aabb.max
    assert any("no usable geometry" in w["message"] for w in model.warnings)


def test_translation_equivariance(fzk_file, fzk_model):
    """Translating the placement root shifts every record by that vector."""
    from dataclasses import replace as dc_replace

    from bimql.step.model import StepFile, serialize_file

    delta_mm = (11000.0, -3000.0, 2000.0)
    entities = dict(fzk_file.entities)
    site = next(fzk_file.by_type("IFCSITE"))
    local = fzk_file.get(site.attr(5))
    axis = fzk_file.get(local.attr(1))
    location = fzk_file.get(axis.attr(0))
    shifted_coords = tuple(
        c + d for c, d in zip(location.attr(0), delta_mm)
    )
    entities[location.id] = dc_replace(location, attributes=(shifted_coords,))
    shifted_file = parse_step(
        serialize_file(StepFile(fzk_file.header, entities))
    )
    shifted = extract_model(shifted_file)

    delta = tuple(d / 1000.0 for d in delta_mm)
    base = {e.element_id: e for e in fzk_model.elements}
    assert len(shifted.elements) == len(base)
    for element in shifted.elements:
        reference = base[element.element_id]
        for i in range(3):
            assert element.centroid[i] - reference.centroid[i] == pytest.approx(
                delta[i], abs=1e-6
            )
            assert element.aabb.min[i] - reference.aabb.min[i] == pytest.approx(
                delta[i], abs=1e-6
            )
            assert element.aabb.max[i] - reference.aabb.max[i] == pytest.approx(
                delta[i], abs=1e-6
            )


def _scaled_variant(fzk_file, factor: float):
    """The same model re-authored with lengths multiplied by ``factor``
    and the unit prefix switched from MILLI to plain meters."""
    from dataclasses import replace as dc_replace

    from bimql.step.model import StepFile, UNSET, serialize_file

    def scale_value(value):
        if isinstance(value, float):
            return value * factor
        if isinstance(value, tuple):
            return tuple(scale_value(v) for v in value)
        return value

    entities = {}
    for eid, entity in fzk_file.entities.items():
        attrs = list(entity.attributes)
        kind = entity.type_name
        if kind == "IFCCARTESIANPOINT" or kind == "IFCCARTESIANPOINTLIST3D":
            attrs[0] = scale_value(attrs[0])
        elif kind == "IFCRECTANGLEPROFILEDEF":
            attrs[3] = scale_value(attrs[3])
            attrs[4] = scale_value(attrs[4])
        elif kind == "IFCEXTRUDEDAREASOLID":
            attrs[3] = scale_value(attrs[3])
        elif kind == "IFCBUILDINGSTOREY":
            attrs[9] = scale_value(attrs[9])
        elif kind in ("IFCDOOR", "IFCWINDOW"):
            attrs[8] = scale_value(attrs[8])
            attrs[9] = scale_value(attrs[9])
        elif kind == "IFCSIUNIT" and len(attrs) > 3:
            attrs[2] = UNSET  # MILLI prefix dropped: plain meters
        entities[eid] = dc_replace(entity, attributes=tuple(attrs))
    return parse_step(serialize_file(StepFile(fzk_file.header, entities)))


def test_unit_invariance(fzk_file, fzk_model):
    """The same model authored in meters yields identical records."""
    other = extract_model(_scaled_variant(fzk_file, 0.001))
    base = {e.element_id: e for e in fzk_model.elements}
    assert len(other.elements) == len(base)
    for element in other.elements:
        reference = base[element.element_id]
        assert element.storey_id == reference.storey_id
        assert element.volume == pytest.approx(reference.volume, abs=1e-6)
        for i in range(3):
            assert element.centroid[i] == pytest.approx(
                reference.centroid[i], abs=1e-6
            )
            assert element.aabb.min[i] == pytest.approx(
                reference.aabb.min[i], abs=1e-6
            )


def test_duplicate_storey_elevation_warns_not_errors():
    doc = wrap(
        "#1=IFCBUILDING('0000000000000000000abc',$,'B',$,$,$,$,$,$,$,$,$);\n"
        "#2=IFCBUILDINGSTOREY('0000000000000000000ab1',$,'EG',$,$,$,$,$,$,0.);\n"
        "#3=IFCBUILDINGSTOREY('0000000000000000000ab2',$,'EG2',$,$,$,$,$,$,0.);\n"
        "#4=IFCRELAGGREGATES('0000000000000000000ab3',$,$,$,#1,(#2,#3));"
    )
    model = extract_model(parse_step(doc))
    assert len(model.storeys) == 2
    assert any("duplicate storey elevation" in w["message"] for w in model.warnings)
