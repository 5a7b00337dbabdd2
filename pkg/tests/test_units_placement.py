from __future__ import annotations

import numpy as np
import pytest

from bimql.errors import CyclicPlacementError, MalformedPlacementError
from bimql.ifc.placement import check_orthonormal, resolve_placement
from bimql.ifc.units import length_unit_scale
from bimql.step.parser import parse_step

from .test_step_parser import wrap


def test_si_millimetre_scale():
    doc = wrap(
        "#1=IFCUNITASSIGNMENT((#2));\n"
        "#2=IFCSIUNIT(*,.LENGTHUNIT.,.MILLI.,.METRE.);"
    )
    assert length_unit_scale(parse_step(doc)) == pytest.approx(0.001)


def test_si_plain_metre_scale():
    doc = wrap(
        "#1=IFCUNITASSIGNMENT((#2));\n#2=IFCSIUNIT(*,.LENGTHUNIT.,$,.METRE.);"
    )
    assert length_unit_scale(parse_step(doc)) == pytest.approx(1.0)


def test_conversion_based_inch():
    # hand-computed: 25.4 mm * 0.001 = 0.0254 m
    doc = wrap(
        "#1=IFCUNITASSIGNMENT((#2));\n"
        "#2=IFCCONVERSIONBASEDUNIT(#5,.LENGTHUNIT.,'INCH',#3);\n"
        "#3=IFCMEASUREWITHUNIT(IFCRATIOMEASURE(25.4),#4);\n"
        "#4=IFCSIUNIT(*,.LENGTHUNIT.,.MILLI.,.METRE.);\n"
        "#5=IFCDIMENSIONALEXPONENTS(1,0,0,0,0,0,0);"
    )
    assert length_unit_scale(parse_step(doc)) == pytest.approx(0.0254)


def test_missing_unit_defaults_to_meters_with_warning():
    warnings: list[str] = []
    doc = wrap("#1=IFCWALL($,$,$,$,$,$,$,$,$);")
    assert length_unit_scale(parse_step(doc), warnings) == 1.0
    assert warnings


def place(body: str) -> tuple:
    file = parse_step(wrap(body))
    element = next(file.by_type("IFCWALL"))
    return file, element


def test_two_translations_compose():
    file, element = place(
        "#1=IFCWALL($,$,$,$,$,#10,$,$,$);\n"
        "#10=IFCLOCALPLACEMENT(#20,#11);\n"
        "#11=IFCAXIS2PLACEMENT3D(#12,$,$);\n"
        "#12=IFCCARTESIANPOINT((1.,0.,0.));\n"
        "#20=IFCLOCALPLACEMENT($,#21);\n"
        "#21=IFCAXIS2PLACEMENT3D(#22,$,$);\n"
        "#22=IFCCARTESIANPOINT((0.,0.,2.7));"
    )
    transform = resolve_placement(file, element)
    assert transform[:3, 3] == pytest.approx([1.0, 0.0, 2.7])


def test_unset_placement_is_identity():
    file, element = place("#1=IFCWALL($,$,$,$,$,$,$,$,$);")
    assert np.allclose(resolve_placement(file, element), np.eye(4))


def test_cycle_detected():
    file, element = place(
        "#1=IFCWALL($,$,$,$,$,#10,$,$,$);\n"
        "#10=IFCLOCALPLACEMENT(#20,#11);\n"
        "#11=IFCAXIS2PLACEMENT3D(#12,$,$);\n"
        "#12=IFCCARTESIANPOINT((0.,0.,0.));\n"
        "#20=IFCLOCALPLACEMENT(#10,#11);"
    )
    with pytest.raises(CyclicPlacementError):
        resolve_placement(file, element)


def test_parallel_axis_and_refdirection_rejected():
    file, element = place(
        "#1=IFCWALL($,$,$,$,$,#10,$,$,$);\n"
        "#10=IFCLOCALPLACEMENT($,#11);\n"
        "#11=IFCAXIS2PLACEMENT3D(#12,#13,#13);\n"
        "#12=IFCCARTESIANPOINT((0.,0.,0.));\n"
        "#13=IFCDIRECTION((0.,0.,1.));"
    )
    with pytest.raises(MalformedPlacementError):
        resolve_placement(file, element)


def test_rotated_placement_is_orthonormal():
    file, element = place(
        "#1=IFCWALL($,$,$,$,$,#10,$,$,$);\n"
        "#10=IFCLOCALPLACEMENT($,#11);\n"
        "#11=IFCAXIS2PLACEMENT3D(#12,#13,#14);\n"
        "#12=IFCCARTESIANPOINT((5.,6.,7.));\n"
        "#13=IFCDIRECTION((0.,1.,0.));\n"
        "#14=IFCDIRECTION((1.,0.,0.1));"  # slightly off-plane hint
    )
    transform = resolve_placement(file, element)
    assert check_orthonormal(transform)


def test_composition_associativity():
    rng = np.random.default_rng(3)
    mats = []
    for _ in range(3):
        q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        m = np.eye(4)
        m[:3, :3] = q
        m[:3, 3] = rng.normal(size=3)
        mats.append(m)
    a, b, c = mats
    assert np.allclose((a @ b) @ c, a @ (b @ c), atol=1e-9)
    assert np.allclose(np.eye(4) @ a, a)


def test_dachgeschoss_element_at_local_origin(fzk_file, fzk_model):
    """An attic element placed at storey-local z=0 lands at 2.7 m."""
    storeys = {s.name: s for s in fzk_model.storeys}
    assert storeys["Dachgeschoss"].elevation == pytest.approx(2.7)
    room7 = next(e for e in fzk_model.elements if e.name == "7")
    assert room7.aabb.min[2] == pytest.approx(2.7, abs=1e-9)
