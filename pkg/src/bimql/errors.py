"""Exception hierarchy shared across the pipeline."""

from __future__ import annotations


class BimqlError(Exception):
    """Base class for all package errors."""


# --- STEP parsing ---------------------------------------------------------


class StepSyntaxError(BimqlError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class MissingSectionError(BimqlError):
    """The document lacks a mandatory ISO 10303-21 section."""


class DanglingReferenceError(BimqlError):
    def __init__(self, missing_ids: set[int]):
        ids = sorted(missing_ids)
        shown = ", ".join(f"#{i}" for i in ids[:20])
        more = "" if len(ids) <= 20 else f" (+{len(ids) - 20} more)"
        super().__init__(f"unresolved entity references: {shown}{more}")
        self.missing_ids = frozenset(missing_ids)


class FileTooLargeError(BimqlError):
    """Input exceeds the 2 GiB guard."""


# --- semantics / geometry -------------------------------------------------


class CyclicPlacementError(BimqlError):
    """An IfcLocalPlacement chain revisits an instance."""


class MalformedPlacementError(BimqlError):
    """Placement axes cannot be orthonormalized."""


class MissingUnitError(BimqlError):
    """No length unit assignment was found."""


class NoStoreysError(BimqlError):
    """Storey assignment requires at least one storey."""


class NoBuildingError(BimqlError):
    """Extraction aborts when the model has no IfcBuilding."""


class UnsupportedRepresentationError(BimqlError):
    def __init__(self, representation_type: str):
        super().__init__(f"unsupported representation: {representation_type}")
        self.representation_type = representation_type


class EmptyMeshError(BimqlError):
    """Mesh operations need at least one vertex."""


# --- relational store -----------------------------------------------------


class NonSelectRejectedError(BimqlError):
    """Statement is not a pure SELECT."""


class SqlError(BimqlError):
    """Engine-level SQL failure, message passed through."""


class RowLimitExceededError(BimqlError):
    def __init__(self, limit: int):
        super().__init__(f"result exceeds the {limit} row cap")
        self.limit = limit


class DuplicateGuidError(BimqlError):
    """The same element id was inserted twice into one class table."""


# --- graph ----------------------------------------------------------------


class NodeNotFoundError(BimqlError):
    """A graph query referenced an unknown node."""


class NoPathError(BimqlError):
    """shortest_path found no route between the endpoints."""


class MalformedGraphQueryError(BimqlError):
    """A structured graph command could not be parsed."""


# --- agent ----------------------------------------------------------------


class BackendUnavailableError(BimqlError):
    """The LLM backend could not be reached."""


class TranscriptExhaustedError(BimqlError):
    """A scripted backend ran past the end of its transcript."""
