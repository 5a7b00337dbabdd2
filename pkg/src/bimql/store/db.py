"""SQLite-backed relational store for the extracted model.

Exactly 17 tables exist after ingest, even when empty: building, storey,
the 13 element-class tables, property, and real_geometry. The store is
written once during ingest and read-only afterwards; SELECT-only access
is enforced with the engine's statement authorizer rather than by
pattern-matching the query text.
"""

from __future__ import annotations

import hashlib
import json
import sqlite3
import threading
from pathlib import Path

from bimql.errors import (
    DuplicateGuidError,
    NonSelectRejectedError,
    RowLimitExceededError,
    SqlError,
)
from bimql.ifc.records import ELEMENT_CLASSES, PREDEFINED_CAPTURED, ExtractedModel
from bimql.table import ResultTable

DEFAULT_ROW_CAP = 10_000
PROPERTY_NAME_LIMIT = 100

ELEMENT_COLUMNS = (
    "id",
    "name",
    "description",
    "storey_id",
    "centroid_x",
    "centroid_y",
    "centroid_z",
    "bounding_box_min_x",
    "bounding_box_min_y",
    "bounding_box_min_z",
    "bounding_box_max_x",
    "bounding_box_max_y",
    "bounding_box_max_z",
    "volume",
)

_ALLOWED_ACTIONS = {
    sqlite3.SQLITE_SELECT,
    sqlite3.SQLITE_READ,
    sqlite3.SQLITE_FUNCTION,
    sqlite3.SQLITE_RECURSIVE,
}


class RelationalStore:
    """Handle to one on-disk store file.

    Reads open one connection per thread, so concurrent read sessions
    (e.g. the HTTP service's worker pool) stay safe after the
    write-once ingest.
    """

    def __init__(self, path: str | Path, row_cap: int = DEFAULT_ROW_CAP):
        self.path = Path(path)
        self.row_cap = row_cap
        self._local = threading.local()

    @property
    def _conn(self) -> sqlite3.Connection:
        conn = getattr(self._local, "conn", None)
        if conn is None:
            conn = sqlite3.connect(self.path)
            self._local.conn = conn
        return conn

    def close(self) -> None:
        conn = getattr(self._local, "conn", None)
        if conn is not None:
            conn.close()
            self._local.conn = None

    # -- queries ------------------------------------------------------

    def execute_sql(self, query: str) -> ResultTable:
        """Run a single SELECT statement and return its rows.

        Anything else (INSERT/UPDATE/DELETE/DDL/PRAGMA/ATTACH, multiple
        statements) is rejected before execution.
        """
        statement = query.strip()
        if not statement:
            raise NonSelectRejectedError("empty statement")
        terminated = statement if statement.endswith(";") else statement + ";"
        head = terminated.split(";", 1)[0] + ";"
        if sqlite3.complete_statement(head) and terminated[len(head) :].strip():
            raise NonSelectRejectedError("only a single statement is allowed")

        denied: list[str] = []

        def authorizer(action, arg1, arg2, dbname, trigger):
            if action in _ALLOWED_ACTIONS:
                return sqlite3.SQLITE_OK
            denied.append(str(action))
            return sqlite3.SQLITE_DENY

        self._conn.set_authorizer(authorizer)
        try:
            cursor = self._conn.execute(statement)
            if cursor.description is None:
                raise NonSelectRejectedError("statement returns no result set")
            rows = cursor.fetchmany(self.row_cap + 1)
        except sqlite3.Error as exc:
            if denied:
                raise NonSelectRejectedError(
                    "statement is not SELECT-only"
                ) from exc
            raise SqlError(str(exc)) from exc
        finally:
            # 3.10's set_authorizer(None) is unreliable; allow-all instead
            self._conn.set_authorizer(lambda *args: sqlite3.SQLITE_OK)

        if len(rows) > self.row_cap:
            raise RowLimitExceededError(self.row_cap)
        columns = [d[0] for d in cursor.description]
        return ResultTable(columns=columns, rows=[list(row) for row in rows])

    # -- schema summary -------------------------------------------------

    def table_names(self) -> list[str]:
        cursor = self._conn.execute(
            "SELECT name FROM sqlite_master WHERE type='table' ORDER BY name"
        )
        return [row[0] for row in cursor.fetchall()]

    def table_columns(self, table: str) -> list[str]:
        cursor = self._conn.execute(f"PRAGMA table_info({table})")
        return [row[1] for row in cursor.fetchall()]

    def row_count(self, table: str) -> int:
        cursor = self._conn.execute(f"SELECT COUNT(*) FROM {table}")
        return int(cursor.fetchone()[0])

    def element_types_present(self) -> list[str]:
        """Element tables holding at least one row, in table order."""
        return [
            table
            for table in ELEMENT_CLASSES
            if table in self.table_names() and self.row_count(table) > 0
        ]

    def property_names(self, limit: int = PROPERTY_NAME_LIMIT) -> list[str]:
        cursor = self._conn.execute(
            "SELECT DISTINCT property_name FROM property ORDER BY property_name"
        )
        return [row[0] for row in cursor.fetchall()][:limit]

    def summarize_schema(self) -> str:
        """Deterministic text block for prompt construction."""
        lines = ["TABLES:"]
        for table in self.table_names():
            columns = ", ".join(self.table_columns(table))
            lines.append(f"- {table} ({columns})")
        present = [
            table
            for table in ELEMENT_CLASSES
            if table in self.table_names() and self.row_count(table) > 0
        ]
        lines.append(
            "AVAILABLE ELEMENT TYPES IN DATABASE: "
            + (", ".join(present) if present else "(none)")
        )
        cursor = self._conn.execute(
            "SELECT DISTINCT property_name FROM property ORDER BY property_name"
        )
        names = [row[0] for row in cursor.fetchall()]
        shown = names[:PROPERTY_NAME_LIMIT]
        suffix = (
            f" (and {len(names) - len(shown)} more, truncated at {PROPERTY_NAME_LIMIT})"
            if len(names) > len(shown)
            else ""
        )
        lines.append(
            "PROPERTY NAMES: " + (", ".join(shown) if shown else "(none)") + suffix
        )
        return "\n".join(lines)

    def content_digest(self) -> str:
        """Hash of the full logical content, independent of file bytes."""
        digest = hashlib.sha256()
        for table in self.table_names():
            digest.update(table.encode())
            columns = self.table_columns(table)
            digest.update(",".join(columns).encode())
            cursor = self._conn.execute(
                f"SELECT * FROM {table} ORDER BY {columns[0]}"
            )
            for row in cursor:
                digest.update(repr(row).encode())
        return digest.hexdigest()

    def export_table_json(self, table: str) -> str:
        if table not in self.table_names():
            raise SqlError(f"no such table: {table}")
        columns = self.table_columns(table)
        cursor = self._conn.execute(
            f"SELECT * FROM {table} ORDER BY {columns[0]}"
        )
        rows = [dict(zip(columns, row)) for row in cursor.fetchall()]
        return json.dumps(rows, indent=2)


def build_store(model: ExtractedModel, path: str | Path) -> RelationalStore:
    """Create the store file and insert every record, deterministically."""
    target = Path(path)
    if target.exists():
        target.unlink()
    conn = sqlite3.connect(target)
    try:
        conn.execute(
            "CREATE TABLE building ("
            "id TEXT PRIMARY KEY, name TEXT, description TEXT, "
            "long_name TEXT, object_type TEXT)"
        )
        conn.execute(
            "CREATE TABLE storey ("
            "id TEXT PRIMARY KEY, name TEXT, elevation REAL, "
            "building_id TEXT, long_name TEXT, description TEXT)"
        )
        for table in ELEMENT_CLASSES:
            columns = list(ELEMENT_COLUMNS)
            if table in PREDEFINED_CAPTURED:
                columns.append("predefined_type")
            spec = ", ".join(
                f"{c} TEXT PRIMARY KEY" if c == "id"
                else f"{c} TEXT" if c in ("name", "description", "storey_id", "predefined_type")
                else f"{c} REAL"
                for c in columns
            )
            conn.execute(f"CREATE TABLE {table} ({spec})")
        conn.execute(
            "CREATE TABLE property ("
            "element_id TEXT, element_type TEXT, "
            "property_name TEXT, property_value TEXT)"
        )
        conn.execute(
            "CREATE TABLE real_geometry ("
            "element_id TEXT PRIMARY KEY, element_type TEXT, "
            "vertices TEXT, faces TEXT)"
        )

        for building in sorted(model.buildings, key=lambda b: b.building_id):
            conn.execute(
                "INSERT INTO building VALUES (?,?,?,?,?)",
                (
                    building.building_id,
                    building.name,
                    building.description,
                    building.long_name,
                    building.object_type,
                ),
            )
        for storey in sorted(model.storeys, key=lambda s: s.storey_id):
            conn.execute(
                "INSERT INTO storey VALUES (?,?,?,?,?,?)",
                (
                    storey.storey_id,
                    storey.name,
                    storey.elevation,
                    storey.building_id,
                    storey.long_name,
                    storey.description,
                ),
            )
        for element in sorted(model.elements, key=lambda e: e.element_id):
            values = [
                element.element_id,
                element.name,
                element.description,
                element.storey_id,
                *element.centroid,
                *element.aabb.min,
                *element.aabb.max,
                element.volume,
            ]
            if element.ifc_class in PREDEFINED_CAPTURED:
                values.append(element.predefined_type)
            marks = ",".join("?" * len(values))
            try:
                conn.execute(
                    f"INSERT INTO {element.ifc_class} VALUES ({marks})", values
                )
            except sqlite3.IntegrityError as exc:
                raise DuplicateGuidError(
                    f"duplicate id {element.element_id} in table {element.ifc_class}"
                ) from exc
        for prop in sorted(
            model.properties,
            key=lambda p: (p.element_id, p.property_name, p.property_value),
        ):
            conn.execute(
                "INSERT INTO property VALUES (?,?,?,?)",
                (
                    prop.element_id,
                    prop.element_type,
                    prop.property_name,
                    prop.property_value,
                ),
            )
        for mesh in sorted(model.meshes, key=lambda m: m.element_id):
            conn.execute(
                "INSERT INTO real_geometry VALUES (?,?,?,?)",
                (
                    mesh.element_id,
                    mesh.element_type,
                    json.dumps([list(v) for v in mesh.vertices]),
                    json.dumps([list(f) for f in mesh.faces]),
                ),
            )
        conn.commit()
    finally:
        conn.close()
    return RelationalStore(target)


def open_store(path: str | Path, row_cap: int = DEFAULT_ROW_CAP) -> RelationalStore:
    target = Path(path)
    if not target.exists():
        raise FileNotFoundError(target)
    return RelationalStore(target, row_cap=row_cap)
