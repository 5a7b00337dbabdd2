"""Tabular results shared by the SQL and graph query paths."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

Cell = None | int | float | str


@dataclass
class ResultTable:
    columns: list[str] = field(default_factory=list)
    rows: list[list[Cell]] = field(default_factory=list)

    def __post_init__(self) -> None:
        width = len(self.columns)
        for row in self.rows:
            if len(row) != width:
                raise ValueError(
                    f"row width {len(row)} does not match {width} columns"
                )

    def serialize(self) -> str:
        """The textual form handed to the language model (NULL spelled out)."""
        if not self.columns and not self.rows:
            return ""
        lines = [" | ".join(self.columns)]
        for row in self.rows:
            lines.append(
                " | ".join("NULL" if cell is None else str(cell) for cell in row)
            )
        return "\n".join(lines)


def result_size_estimate(result: ResultTable) -> int:
    """Token estimate used by the context guard: ceil(chars / 4)."""
    return math.ceil(len(result.serialize()) / 4)
