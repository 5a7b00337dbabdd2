"""Length-unit normalization to meters."""

from __future__ import annotations

import logging

from bimql.step.model import EnumToken, StepFile, TypedValue, UNSET, EntityRef

logger = logging.getLogger(__name__)

SI_PREFIXES = {
    "EXA": 1e18, "PETA": 1e15, "TERA": 1e12, "GIGA": 1e9, "MEGA": 1e6,
    "KILO": 1e3, "HECTO": 1e2, "DECA": 1e1, "DECI": 1e-1, "CENTI": 1e-2,
    "MILLI": 1e-3, "MICRO": 1e-6, "NANO": 1e-9, "PICO": 1e-12,
    "FEMTO": 1e-15, "ATTO": 1e-18,
}


def _enum_name(value) -> str | None:
    return value.name if isinstance(value, EnumToken) else None


def _si_unit_scale(entity) -> float | None:
    # IfcSIUnit: Dimensions*, UnitType, Prefix, Name
    if _enum_name(entity.attr(1)) != "LENGTHUNIT":
        return None
    name = _enum_name(entity.attr(3))
    if name != "METRE":
        return None
    prefix = _enum_name(entity.attr(2))
    return SI_PREFIXES.get(prefix, 1.0) if prefix else 1.0


def length_unit_scale(file: StepFile, warnings: list | None = None) -> float:
    """Factor converting model length values to meters.

    Missing unit assignments default to 1.0 with an ingest warning.
    """
    for assignment in file.by_type("IFCUNITASSIGNMENT"):
        units = assignment.attr(0)
        if not isinstance(units, tuple):
            continue
        for ref in units:
            if not isinstance(ref, EntityRef):
                continue
            unit = file.get(ref)
            if unit.type_name == "IFCSIUNIT":
                scale = _si_unit_scale(unit)
                if scale is not None:
                    return scale
            elif unit.type_name == "IFCCONVERSIONBASEDUNIT":
                # Dimensions, UnitType, Name, ConversionFactor
                if _enum_name(unit.attr(1)) != "LENGTHUNIT":
                    continue
                measure = file.get(unit.attr(3))  # IfcMeasureWithUnit
                value = measure.attr(0)
                if isinstance(value, TypedValue):
                    value = value.value
                base = file.get(measure.attr(1))
                base_scale = _si_unit_scale(base)
                if base_scale is not None and value is not UNSET:
                    return float(value) * base_scale
    message = "no length unit assignment found, assuming meters"
    logger.warning(message)
    if warnings is not None:
        warnings.append(message)
    return 1.0
