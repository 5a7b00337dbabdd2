"""Parsing of model replies into structured decisions.

Markers are recognized case-sensitively at line starts; a second marker
may also follow a top-level semicolon on the same line ("for both:
include both prefixes, separated by semicolons"). SQL payloads split on
top-level semicolons so string literals keep theirs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from bimql.errors import MalformedGraphQueryError
from bimql.graph.query import GraphQuery

INITIAL_MARKERS = ("SQL_NEEDED:", "GRAPH_NEEDED:")
LOOP_MARKERS = ("MORE_SQL_NEEDED:", "MORE_GRAPH_NEEDED:", "ANALYSIS_COMPLETE")


@dataclass
class LlmDecision:
    direct_answer: bool = False
    draft: str | None = None
    sql_queries: list[str] = field(default_factory=list)
    graph_queries: list[tuple[str, GraphQuery]] = field(default_factory=list)
    malformed: list[tuple[str, str]] = field(default_factory=list)
    complete: bool = False

    def has_queries(self) -> bool:
        return bool(self.sql_queries or self.graph_queries or self.malformed)


def split_top_level(text: str, separator: str = ";") -> list[str]:
    """Split on separators that sit outside single/double-quoted strings."""
    parts: list[str] = []
    buf: list[str] = []
    quote: str | None = None
    i = 0
    while i < len(text):
        ch = text[i]
        if quote:
            buf.append(ch)
            if ch == quote:
                # doubled quote inside SQL string stays literal
                if quote == "'" and i + 1 < len(text) and text[i + 1] == "'":
                    buf.append("'")
                    i += 1
                else:
                    quote = None
            elif ch == "\\" and quote == '"' and i + 1 < len(text):
                buf.append(text[i + 1])
                i += 1
        elif ch in ("'", '"'):
            quote = ch
            buf.append(ch)
        elif ch == separator:
            parts.append("".join(buf))
            buf = []
        else:
            buf.append(ch)
        i += 1
    parts.append("".join(buf))
    return parts


def _marker_at(segment: str, markers: tuple[str, ...]) -> str | None:
    for marker in markers:
        if segment.startswith(marker):
            return marker
    return None


def parse_decision(raw: str, phase: str) -> LlmDecision:
    """Interpret a reply for the given phase ('initial' or 'loop')."""
    if phase not in ("initial", "loop"):
        raise ValueError(f"unknown phase {phase!r}")
    markers = INITIAL_MARKERS if phase == "initial" else LOOP_MARKERS
    decision = LlmDecision()

    # group lines into blocks that start at a marker line
    blocks: list[tuple[str, list[str]]] = []
    for line in raw.splitlines():
        stripped = line.strip()
        marker = _marker_at(stripped, markers)
        if marker is not None:
            blocks.append((marker, [stripped[len(marker) :]]))
        elif blocks:
            blocks[-1][1].append(line)

    if not blocks:
        if phase == "initial":
            decision.direct_answer = True
            decision.draft = raw
        return decision

    def add_payload(marker: str, payload: str) -> None:
        payload = payload.strip()
        if marker == "ANALYSIS_COMPLETE":
            decision.complete = True
            return
        if not payload:
            return
        if marker in ("SQL_NEEDED:", "MORE_SQL_NEEDED:"):
            decision.sql_queries.append(payload)
        else:
            try:
                decision.graph_queries.append(
                    (payload, GraphQuery.from_json(payload))
                )
            except MalformedGraphQueryError as exc:
                decision.malformed.append((payload, str(exc)))

    for marker, lines in blocks:
        content = "\n".join(lines)
        current = marker
        if current == "ANALYSIS_COMPLETE":
            decision.complete = True
            continue
        for segment in split_top_level(content):
            trimmed = segment.strip()
            switched = _marker_at(trimmed, markers)
            if switched is not None:
                current = switched
                trimmed = trimmed[len(switched) :]
                if current == "ANALYSIS_COMPLETE":
                    decision.complete = True
                    continue
            add_payload(current, trimmed)
    return decision
