"""In-memory model for ISO 10303-21 instance files.

Attribute values are plain Python where possible (int, float, str, tuple)
plus small wrapper types for the STEP-specific notions: enumeration tokens,
entity references, typed values, and the ``$``/``*`` placeholders.
Serialization back to SPF text lives here so that value types and their
textual form stay in one place.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union


class _Marker:
    __slots__ = ("_label",)

    def __init__(self, label: str):
        self._label = label

    def __repr__(self) -> str:
        return self._label


#: Value of an attribute written as ``$`` (unset).
UNSET = _Marker("UNSET")
#: Value of an attribute written as ``*`` (derived).
DERIVED = _Marker("DERIVED")


@dataclass(frozen=True)
class EnumToken:
    """A ``.TOKEN.`` enumeration literal."""

    name: str


@dataclass(frozen=True)
class EntityRef:
    """A ``#n`` reference to another instance."""

    id: int


@dataclass(frozen=True)
class TypedValue:
    """A select wrapper such as ``IFCBOOLEAN(.T.)``."""

    type_name: str
    value: "StepValue"


StepValue = Union[
    int, float, str, EnumToken, EntityRef, TypedValue, tuple, _Marker
]


@dataclass(frozen=True)
class StepEntity:
    id: int
    type_name: str
    attributes: tuple

    def attr(self, index: int) -> StepValue:
        if index >= len(self.attributes):
            return UNSET
        return self.attributes[index]


@dataclass
class StepHeader:
    description: tuple = ()
    file_name: tuple = ()
    schema_identifiers: tuple = ()


@dataclass
class StepFile:
    header: StepHeader
    entities: dict[int, StepEntity]

    def get(self, ref: EntityRef | int) -> StepEntity:
        key = ref.id if isinstance(ref, EntityRef) else ref
        return self.entities[key]

    def by_type(self, type_name: str) -> Iterator[StepEntity]:
        wanted = type_name.upper()
        for eid in sorted(self.entities):
            entity = self.entities[eid]
            if entity.type_name == wanted:
                yield entity


def iter_refs(value: StepValue) -> Iterator[int]:
    """Yield every instance id referenced inside a value tree."""
    if isinstance(value, EntityRef):
        yield value.id
    elif isinstance(value, TypedValue):
        yield from iter_refs(value.value)
    elif isinstance(value, tuple):
        for item in value:
            yield from iter_refs(item)


# --- serialization --------------------------------------------------------


def format_real(x: float) -> str:
    """Shortest round-trip decimal with the '.' the SPF grammar requires."""
    text = repr(float(x))
    if "e" in text or "E" in text:
        mantissa, _, exponent = text.lower().partition("e")
        if "." not in mantissa:
            mantissa += "."
        return f"{mantissa}E{int(exponent)}"
    if "." not in text and "inf" not in text and "nan" not in text:
        text += "."
    return text


def encode_string(text: str) -> str:
    out: list[str] = []
    pending_wide: list[str] = []

    def flush_wide() -> None:
        if pending_wide:
            out.append("\\X2\\" + "".join(pending_wide) + "\\X0\\")
            pending_wide.clear()

    for ch in text:
        code = ord(ch)
        if code < 128:
            flush_wide()
            if ch == "'":
                out.append("''")
            elif ch == "\\":
                out.append("\\\\")
            else:
                out.append(ch)
        else:
            pending_wide.append(f"{code:04X}")
    flush_wide()
    return "'" + "".join(out) + "'"


def serialize_value(value: StepValue) -> str:
    if value is UNSET:
        return "$"
    if value is DERIVED:
        return "*"
    if isinstance(value, bool):
        raise TypeError("booleans are encoded as .T./.F. enum tokens")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_real(value)
    if isinstance(value, str):
        return encode_string(value)
    if isinstance(value, EnumToken):
        return f".{value.name}."
    if isinstance(value, EntityRef):
        return f"#{value.id}"
    if isinstance(value, TypedValue):
        return f"{value.type_name}({serialize_value(value.value)})"
    if isinstance(value, tuple):
        return "(" + ",".join(serialize_value(v) for v in value) + ")"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def serialize_entity(entity: StepEntity) -> str:
    args = ",".join(serialize_value(v) for v in entity.attributes)
    return f"#{entity.id}={entity.type_name}({args});"


def serialize_file(step: StepFile) -> str:
    desc = ",".join(serialize_value(s) for s in step.header.description) or "''"
    name = ",".join(serialize_value(s) for s in step.header.file_name)
    if not name:
        name = "'','',(''),(''),'','',''"
    schemas = ",".join(
        serialize_value(s) for s in step.header.schema_identifiers
    ) or "''"
    lines = [
        "ISO-10303-21;",
        "HEADER;",
        f"FILE_DESCRIPTION(({desc}),'2;1');",
        f"FILE_NAME({name});",
        f"FILE_SCHEMA(({schemas}));",
        "ENDSEC;",
        "DATA;",
    ]
    for eid in sorted(step.entities):
        lines.append(serialize_entity(step.entities[eid]))
    lines.append("ENDSEC;")
    lines.append("END-ISO-10303-21;")
    return "\n".join(lines) + "\n"
