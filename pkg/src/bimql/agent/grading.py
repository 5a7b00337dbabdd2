"""Data-layer grading of agent runs against oracle specifications.

An oracle describes the expected query results, never answer prose:

    {"kind": "scalar", "value": 7}                     first cell of some result
    {"kind": "scalar", "value": 10.32, "tol": 0.05}
    {"kind": "set", "column": 0, "values": [...]}      column as a set
    {"kind": "rows", "values": [[...], ...]}           full rows, order-free
    {"kind": "contains_all", "values": [...]}          cells anywhere
    {"kind": "cells", "at": [[row, col, value], ...]}  fixed positions
    {"kind": "path", "names": [...], "total": 10.32, "tol": 0.05}
"""

from __future__ import annotations

from dataclasses import dataclass

from bimql.agent.loop import AgentState, StoreEntry

DEFAULT_TOL = 1e-9


def _cell_matches(cell, expected, tol: float) -> bool:
    if expected is None:
        return cell is None
    if isinstance(expected, (int, float)) and not isinstance(expected, bool):
        if cell is None or isinstance(cell, str):
            try:
                cell = float(cell)  # type: ignore[arg-type]
            except (TypeError, ValueError):
                return False
        return abs(float(cell) - float(expected)) <= tol
    return str(cell) == str(expected)


def _entry_matches(oracle: dict, entry: StoreEntry) -> bool:
    table = entry.table()
    if table is None:
        return False
    kind = oracle["kind"]
    tol = float(oracle.get("tol", DEFAULT_TOL))

    if kind == "scalar":
        return bool(table.rows) and _cell_matches(
            table.rows[0][0], oracle["value"], tol
        )

    if kind == "set":
        column = int(oracle.get("column", 0))
        if any(column >= len(row) for row in table.rows):
            return False
        actual = {str(row[column]) for row in table.rows}
        return actual == {str(v) for v in oracle["values"]}

    if kind == "rows":
        expected = oracle["values"]
        if len(expected) != len(table.rows):
            return False
        remaining = [list(row) for row in table.rows]
        for want in expected:
            found = None
            for i, row in enumerate(remaining):
                if len(row) == len(want) and all(
                    _cell_matches(c, w, tol) for c, w in zip(row, want)
                ):
                    found = i
                    break
            if found is None:
                return False
            remaining.pop(found)
        return True

    if kind == "contains_all":
        cells = [cell for row in table.rows for cell in row]
        return all(
            any(_cell_matches(cell, want, tol) for cell in cells)
            for want in oracle["values"]
        )

    if kind == "cells":
        for row_index, col_index, expected in oracle["at"]:
            try:
                cell = table.rows[row_index][col_index]
            except IndexError:
                return False
            if not _cell_matches(cell, expected, tol):
                return False
        return True

    if kind == "path":
        if "name" not in table.columns:
            return False
        name_index = table.columns.index("name")
        names = [str(row[name_index]) for row in table.rows]
        if names != [str(n) for n in oracle["names"]]:
            return False
        if "total" in oracle:
            if "distance_from_start" not in table.columns:
                return False
            total_index = table.columns.index("distance_from_start")
            if not table.rows:
                return False
            return _cell_matches(
                table.rows[-1][total_index], oracle["total"], tol
            )
        return True

    raise ValueError(f"unknown oracle kind {kind!r}")


def oracle_matches(oracle: dict, state: AgentState) -> bool:
    return any(_entry_matches(oracle, entry) for entry in state.results)


@dataclass(frozen=True)
class GradeResult:
    first_attempt_correct: bool
    recovered: bool


def grade_attempt(state: AgentState, oracle: dict) -> GradeResult:
    """First-attempt success means the primary backend alone produced a
    matching result; recovery means the fallback did after it failed."""
    if not state.fallback_engaged:
        return GradeResult(
            first_attempt_correct=oracle_matches(oracle, state), recovered=False
        )
    recovered = any(
        entry.via_fallback and _entry_matches(oracle, entry)
        for entry in state.results
    )
    return GradeResult(first_attempt_correct=False, recovered=recovered)
