from __future__ import annotations

import pytest

from bimql.errors import (
    DanglingReferenceError,
    FileTooLargeError,
    MissingSectionError,
    StepSyntaxError,
)
from bimql.step.model import (
    DERIVED,
    UNSET,
    EntityRef,
    EnumToken,
    TypedValue,
    serialize_file,
)
from bimql.step.parser import parse_step
from bimql.step.subtypes import entities_of_type

from .oracles import count_instances_textually


def wrap(body: str) -> str:
    return (
        "ISO-10303-21;\nHEADER;\n"
        "FILE_DESCRIPTION((''),'2;1');\n"
        "FILE_NAME('','',(''),(''),'','','');\n"
        "FILE_SCHEMA(('IFC4'));\nENDSEC;\nDATA;\n"
        f"{body}\nENDSEC;\nEND-ISO-10303-21;\n"
    )


def test_wall_instance_attributes():
    doc = wrap(
        "#1=IFCWALL('2O2Fr$t4X7Zf8NOew3FL9r',$,'W1',$,$,#5,#20,$);\n"
        "#5=IFCLOCALPLACEMENT($,#6);\n"
        "#6=IFCAXIS2PLACEMENT3D(#2,$,$);\n"
        "#2=IFCCARTESIANPOINT((0.,0.,0.));\n"
        "#20=IFCPRODUCTDEFINITIONSHAPE($,$,());"
    )
    file = parse_step(doc)
    wall = file.entities[1]
    assert wall.type_name == "IFCWALL"
    assert wall.attributes[0] == "2O2Fr$t4X7Zf8NOew3FL9r"
    assert wall.attributes[2] == "W1"
    assert wall.attributes[1] is UNSET
    assert wall.attributes[5] == EntityRef(5)


def test_cartesian_point_is_list_of_reals():
    file = parse_step(wrap("#2=IFCCARTESIANPOINT((0.,0.,0.));"))
    point = file.entities[2]
    assert point.attributes[0] == (0.0, 0.0, 0.0)
    assert all(isinstance(c, float) for c in point.attributes[0])


def test_dangling_reference_reported():
    doc = wrap("#3=IFCDOOR($,$,$,$,$,#99,$,$,$,$,$,$);")
    with pytest.raises(DanglingReferenceError) as err:
        parse_step(doc)
    assert err.value.missing_ids == frozenset({99})


def test_missing_data_section():
    doc = (
        "ISO-10303-21;\nHEADER;\nFILE_DESCRIPTION((''),'2;1');\n"
        "FILE_NAME('','',(''),(''),'','','');\nFILE_SCHEMA(('IFC4'));\n"
        "ENDSEC;\nEND-ISO-10303-21;\n"
    )
    with pytest.raises(MissingSectionError):
        parse_step(doc)


def test_syntax_error_carries_position():
    with pytest.raises(StepSyntaxError) as err:
        parse_step(wrap("#1=IFCWALL('unterminated;"))
    assert err.value.line > 0 and err.value.column > 0


def test_duplicate_id_rejected():
    doc = wrap("#1=IFCWALL($,$,$,$,$,$,$,$,$);\n#1=IFCDOOR($,$,$,$,$,$,$,$,$,$,$,$);")
    with pytest.raises(StepSyntaxError):
        parse_step(doc)


def test_real_forms_and_enums_and_typed_values():
    doc = wrap(
        "#1=IFCTEST(1.,1.0E-2,-0.5,.LENGTHUNIT.,IFCBOOLEAN(.T.),*,12);"
    )
    entity = parse_step(doc).entities[1]
    assert entity.attributes[0] == 1.0
    assert entity.attributes[1] == pytest.approx(0.01)
    assert entity.attributes[2] == -0.5
    assert entity.attributes[3] == EnumToken("LENGTHUNIT")
    assert entity.attributes[4] == TypedValue("IFCBOOLEAN", EnumToken("T"))
    assert entity.attributes[5] is DERIVED
    assert entity.attributes[6] == 12 and isinstance(entity.attributes[6], int)


def test_string_escapes_decoded():
    doc = wrap(
        "#1=IFCTEST('it''s','a\\\\b','\\S\\d','\\X\\E4','\\X2\\00E400FC\\X0\\');"
    )
    entity = parse_step(doc).entities[1]
    assert entity.attributes[0] == "it's"
    assert entity.attributes[1] == "a\\b"
    assert entity.attributes[2] == chr(ord("d") + 128)
    assert entity.attributes[3] == "ä"
    assert entity.attributes[4] == "äü"


def test_comments_and_whitespace_ignored():
    doc = wrap(
        "/* leading */ #1 = IFCWALL( $ , $, 'W' /* inline */, $,$,$,$,$,$);"
    )
    file = parse_step(doc)
    assert file.entities[1].attributes[2] == "W"


def test_latin1_fallback():
    doc = wrap("#1=IFCTEST('m\xfcnchen');").encode("latin-1")
    assert parse_step(doc).entities[1].attributes[0] == "münchen"


def test_header_schema_identifier():
    file = parse_step(wrap("#1=IFCWALL($,$,$,$,$,$,$,$,$);"))
    assert file.header.schema_identifiers == ("IFC4",)


def test_parse_serialize_parse_fixpoint(fzk_bytes, fzk_file):
    once = parse_step(serialize_file(fzk_file))
    assert once.entities == fzk_file.entities
    twice = parse_step(serialize_file(once))
    assert twice.entities == once.entities


def test_instance_count_matches_text_scan(fzk_bytes, fzk_file):
    expected = count_instances_textually(fzk_bytes.decode())
    assert len(fzk_file.entities) == expected


def test_parser_is_pure(fzk_bytes):
    assert parse_step(fzk_bytes).entities == parse_step(fzk_bytes).entities


def test_file_size_guard():
    class HugeBytes(bytes):
        def __len__(self) -> int:
            return 3 * 1024**3

    with pytest.raises(FileTooLargeError):
        parse_step(HugeBytes(b"ISO-10303-21;"))


def test_entities_of_type_exact_and_subtypes(fzk_file):
    spaces = entities_of_type(fzk_file, "IFCSPACE")
    assert len(spaces) == 7
    assert [e.id for e in spaces] == sorted(e.id for e in spaces)
    # 9 IFCWALL + 5 IFCWALLSTANDARDCASE authored in the fixture
    plain = entities_of_type(fzk_file, "IFCWALL")
    merged = entities_of_type(fzk_file, "IFCWALL", include_subtypes=True)
    standard = entities_of_type(fzk_file, "IFCWALLSTANDARDCASE")
    assert len(standard) == 5
    assert len(merged) == len(plain) + len(standard) == 13
    assert entities_of_type(fzk_file, "IFCNOSUCHTYPE") == []


def test_empty_data_section():
    doc = wrap("").replace("\n\nENDSEC;", "\nENDSEC;")
    file = parse_step(doc)
    assert file.entities == {}
    assert entities_of_type(file, "IFCSPACE") == []
