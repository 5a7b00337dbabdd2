"""ISO 10303-21 (SPF) reader.

A single pass tokenizes and parses the HEADER and DATA sections into a
:class:`~bimql.step.model.StepFile`. Unknown entity types are kept as
opaque instances; nothing is validated against an EXPRESS schema. The
parse is pure: the same bytes always produce the same structure.
"""

from __future__ import annotations

import math

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
    StepEntity,
    StepFile,
    StepHeader,
    StepValue,
    TypedValue,
    iter_refs,
)

MAX_FILE_BYTES = 2 * 1024**3

_IDENT_START = set("ABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CHARS = _IDENT_START | set("0123456789")
_DIGITS = set("0123456789")


class _Scanner:
    """Character cursor with comment/whitespace skipping and positions."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.n = len(text)

    def error(self, message: str) -> StepSyntaxError:
        line = self.text.count("\n", 0, self.pos) + 1
        column = self.pos - (self.text.rfind("\n", 0, self.pos) + 1) + 1
        return StepSyntaxError(message, line, column)

    def skip_ws(self) -> None:
        text, n = self.text, self.n
        while self.pos < n:
            ch = text[self.pos]
            if ch in " \t\r\n":
                self.pos += 1
            elif ch == "/" and self.pos + 1 < n and text[self.pos + 1] == "*":
                end = text.find("*/", self.pos + 2)
                if end < 0:
                    raise self.error("unterminated comment")
                self.pos = end + 2
            else:
                return

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < self.n else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise self.error(f"expected '{ch}'")
        self.pos += 1

    def read_ident(self) -> str:
        start = self.pos
        text, n = self.text, self.n
        if self.pos >= n or text[self.pos] not in _IDENT_START:
            raise self.error("expected identifier")
        while self.pos < n and text[self.pos] in _IDENT_CHARS:
            self.pos += 1
        return text[start : self.pos]

    def read_int(self) -> int:
        start = self.pos
        text, n = self.text, self.n
        while self.pos < n and text[self.pos] in _DIGITS:
            self.pos += 1
        if self.pos == start:
            raise self.error("expected digits")
        return int(text[start : self.pos])


def _decode_string_body(scanner: _Scanner) -> str:
    """Read a STEP string starting after the opening quote."""
    text, n = scanner.text, scanner.n
    out: list[str] = []
    while True:
        if scanner.pos >= n:
            raise scanner.error("unterminated string")
        ch = text[scanner.pos]
        scanner.pos += 1
        if ch == "'":
            if scanner.pos < n and text[scanner.pos] == "'":
                out.append("'")
                scanner.pos += 1
                continue
            return "".join(out)
        if ch != "\\":
            out.append(ch)
            continue
        # escape sequences: \\, \S\c, \X\hh, \X2\..\X0\, \X4\..\X0\, \P?\
        if scanner.pos >= n:
            raise scanner.error("dangling escape in string")
        tag = text[scanner.pos]
        if tag == "\\":
            out.append("\\")
            scanner.pos += 1
        elif tag in "Pp":
            end = text.find("\\", scanner.pos + 1)
            if end < 0:
                raise scanner.error("unterminated \\P directive")
            scanner.pos = end + 1  # code page directive, ISO 8859-1 assumed
        elif tag in "Ss":
            if scanner.pos + 2 >= n or text[scanner.pos + 1] != "\\":
                raise scanner.error("malformed \\S escape")
            out.append(chr((ord(text[scanner.pos + 2]) + 128) & 0xFF))
            scanner.pos += 3
        elif tag in "Xx":
            nxt = text[scanner.pos + 1] if scanner.pos + 1 < n else ""
            if nxt == "\\":
                hex2 = text[scanner.pos + 2 : scanner.pos + 4]
                if len(hex2) != 2:
                    raise scanner.error("malformed \\X escape")
                out.append(chr(int(hex2, 16)))
                scanner.pos += 4
            elif nxt in "24":
                width = 4 if nxt == "2" else 8
                if text[scanner.pos + 2 : scanner.pos + 3] != "\\":
                    raise scanner.error("malformed \\X escape")
                end = text.find("\\X0\\", scanner.pos + 3)
                if end < 0:
                    raise scanner.error("unterminated \\X block")
                payload = text[scanner.pos + 3 : end]
                if len(payload) % width:
                    raise scanner.error("odd \\X block length")
                try:
                    for i in range(0, len(payload), width):
                        out.append(chr(int(payload[i : i + width], 16)))
                except ValueError:
                    raise scanner.error("invalid hex in \\X block") from None
                scanner.pos = end + 4
            else:
                raise scanner.error("malformed \\X escape")
        else:
            raise scanner.error(f"unknown escape \\{tag}")


def _parse_number(scanner: _Scanner) -> int | float:
    text, n = scanner.text, scanner.n
    start = scanner.pos
    if scanner.peek() in "+-":
        scanner.pos += 1
    scanner.read_int()
    is_real = False
    if scanner.peek() == ".":
        is_real = True
        scanner.pos += 1
        while scanner.pos < n and text[scanner.pos] in _DIGITS:
            scanner.pos += 1
    if scanner.peek() in "Ee":
        is_real = True
        scanner.pos += 1
        if scanner.peek() in "+-":
            scanner.pos += 1
        scanner.read_int()
    literal = text[start : scanner.pos]
    if not is_real:
        return int(literal)
    value = float(literal)
    if not math.isfinite(value):
        raise scanner.error(f"real literal out of range: {literal}")
    return value


def _parse_value(scanner: _Scanner) -> StepValue:
    scanner.skip_ws()
    ch = scanner.peek()
    if ch == "":
        raise scanner.error("unexpected end of input")
    if ch == "$":
        scanner.pos += 1
        return UNSET
    if ch == "*":
        scanner.pos += 1
        return DERIVED
    if ch == "#":
        scanner.pos += 1
        return EntityRef(scanner.read_int())
    if ch == "'":
        scanner.pos += 1
        return _decode_string_body(scanner)
    if ch == ".":
        scanner.pos += 1
        name_start = scanner.pos
        while scanner.peek() not in (".", ""):
            scanner.pos += 1
        if scanner.peek() != ".":
            raise scanner.error("unterminated enumeration token")
        name = scanner.text[name_start : scanner.pos]
        scanner.pos += 1
        return EnumToken(name)
    if ch == "(":
        scanner.pos += 1
        items: list[StepValue] = []
        scanner.skip_ws()
        if scanner.peek() == ")":
            scanner.pos += 1
            return ()
        while True:
            items.append(_parse_value(scanner))
            scanner.skip_ws()
            nxt = scanner.peek()
            if nxt == ",":
                scanner.pos += 1
                continue
            if nxt == ")":
                scanner.pos += 1
                return tuple(items)
            raise scanner.error("expected ',' or ')' in list")
    if ch in "+-" or ch in _DIGITS:
        return _parse_number(scanner)
    if ch in _IDENT_START:
        name = scanner.read_ident()
        scanner.skip_ws()
        scanner.expect("(")
        inner = _parse_value(scanner)
        scanner.skip_ws()
        scanner.expect(")")
        return TypedValue(name, inner)
    raise scanner.error(f"unexpected character {ch!r}")


def _parse_argument_list(scanner: _Scanner) -> tuple:
    scanner.skip_ws()
    scanner.expect("(")
    scanner.skip_ws()
    if scanner.peek() == ")":
        scanner.pos += 1
        return ()
    args: list[StepValue] = []
    while True:
        args.append(_parse_value(scanner))
        scanner.skip_ws()
        ch = scanner.peek()
        if ch == ",":
            scanner.pos += 1
            scanner.skip_ws()
            continue
        if ch == ")":
            scanner.pos += 1
            return tuple(args)
        raise scanner.error("expected ',' or ')' in argument list")


def _parse_header(scanner: _Scanner) -> StepHeader:
    header = StepHeader()
    while True:
        scanner.skip_ws()
        name = scanner.read_ident()
        if name == "ENDSEC":
            scanner.skip_ws()
            scanner.expect(";")
            return header
        args = _parse_argument_list(scanner)
        scanner.skip_ws()
        scanner.expect(";")
        if name == "FILE_DESCRIPTION" and args:
            first = args[0]
            header.description = first if isinstance(first, tuple) else (first,)
        elif name == "FILE_NAME":
            header.file_name = args
        elif name == "FILE_SCHEMA" and args:
            first = args[0]
            header.schema_identifiers = (
                first if isinstance(first, tuple) else (first,)
            )


def _decode_bytes(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError:
        return data.decode("latin-1")


def parse_step(source: bytes | str) -> StepFile:
    """Parse a complete SPF document into a StepFile.

    Raises StepSyntaxError on malformed tokens, MissingSectionError when
    the DATA section is absent, and DanglingReferenceError when a ``#n``
    reference does not resolve.
    """
    if isinstance(source, bytes):
        if len(source) > MAX_FILE_BYTES:
            raise FileTooLargeError(
                f"input is {len(source)} bytes; the parser refuses files over 2 GiB"
            )
        text = _decode_bytes(source)
    else:
        if len(source) > MAX_FILE_BYTES:
            raise FileTooLargeError("input exceeds the 2 GiB guard")
        text = source

    scanner = _Scanner(text)
    scanner.skip_ws()
    magic = scanner.read_ident() if scanner.peek() in _IDENT_START else ""
    if magic != "ISO" or not text[scanner.pos :].startswith("-10303-21"):
        raise scanner.error("missing ISO-10303-21 marker")
    scanner.pos += len("-10303-21")
    scanner.skip_ws()
    scanner.expect(";")

    header = StepHeader()
    entities: dict[int, StepEntity] = {}
    saw_data = False

    while True:
        scanner.skip_ws()
        if scanner.peek() == "":
            raise scanner.error("unexpected end of file")
        word = scanner.read_ident()
        if word == "HEADER":
            scanner.skip_ws()
            scanner.expect(";")
            header = _parse_header(scanner)
        elif word == "DATA":
            scanner.skip_ws()
            scanner.expect(";")
            saw_data = True
            _parse_data_section(scanner, entities)
        elif word == "END":
            if not text[scanner.pos :].startswith("-ISO-10303-21"):
                raise scanner.error("malformed end marker")
            break
        else:
            raise scanner.error(f"unexpected section {word!r}")

    if not saw_data:
        raise MissingSectionError("document has no DATA section")

    known = entities.keys()
    missing: set[int] = set()
    for entity in entities.values():
        for ref in iter_refs(entity.attributes):
            if ref not in known:
                missing.add(ref)
    if missing:
        raise DanglingReferenceError(missing)

    return StepFile(header=header, entities=entities)


def _parse_data_section(scanner: _Scanner, entities: dict[int, StepEntity]) -> None:
    while True:
        scanner.skip_ws()
        ch = scanner.peek()
        if ch == "#":
            scanner.pos += 1
            eid = scanner.read_int()
            if eid <= 0:
                raise scanner.error("instance ids must be positive")
            scanner.skip_ws()
            scanner.expect("=")
            scanner.skip_ws()
            if scanner.peek() == "(":
                raise scanner.error("complex entity instances are not supported")
            type_name = scanner.read_ident()
            args = _parse_argument_list(scanner)
            scanner.skip_ws()
            scanner.expect(";")
            if eid in entities:
                raise scanner.error(f"duplicate instance id #{eid}")
            entities[eid] = StepEntity(id=eid, type_name=type_name, attributes=args)
        elif ch in _IDENT_START:
            word = scanner.read_ident()
            if word != "ENDSEC":
                raise scanner.error(f"unexpected token {word!r} in DATA section")
            scanner.skip_ws()
            scanner.expect(";")
            return
        else:
            raise scanner.error("expected instance or ENDSEC")
