"""Type filtering with a minimal hard-coded subtype table.

The table covers only the element set this pipeline extracts; any other
type requires an exact name match.
"""

from __future__ import annotations

from bimql.step.model import StepEntity, StepFile

SUBTYPES: dict[str, frozenset[str]] = {
    "IFCWALL": frozenset({"IFCWALLSTANDARDCASE", "IFCWALLELEMENTEDCASE"}),
    "IFCSLAB": frozenset({"IFCSLABSTANDARDCASE", "IFCSLABELEMENTEDCASE"}),
    "IFCDOOR": frozenset({"IFCDOORSTANDARDCASE"}),
    "IFCWINDOW": frozenset({"IFCWINDOWSTANDARDCASE"}),
    "IFCBEAM": frozenset({"IFCBEAMSTANDARDCASE"}),
    "IFCCOLUMN": frozenset({"IFCCOLUMNSTANDARDCASE"}),
}


def entities_of_type(
    file: StepFile, type_name: str, include_subtypes: bool = False
) -> list[StepEntity]:
    """All instances of a type, in stable instance-id order."""
    wanted = {type_name.upper()}
    if include_subtypes:
        wanted |= SUBTYPES.get(type_name.upper(), frozenset())
    return [
        file.entities[eid]
        for eid in sorted(file.entities)
        if file.entities[eid].type_name in wanted
    ]
