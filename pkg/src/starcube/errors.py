"""Exception hierarchy shared across the engine.

Every error carries a stable machine ``code`` (the class name unless
overridden) which the HTTP layer and the CLI map to status / exit codes.
"""

from __future__ import annotations


class StarcubeError(Exception):
    """Base class for all starcube errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


# --- catalog / configuration -------------------------------------------------

class CatalogError(StarcubeError):
    """A catalog document failed validation; carries every violation found."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class PipelineConfigError(StarcubeError):
    """A pipeline document is malformed or inconsistent with the catalog."""


# --- ETL ----------------------------------------------------------------------

class SourceNotFound(StarcubeError):
    """A configured source file does not exist."""


class EncodingError(StarcubeError):
    """A source file cannot be decoded with its declared encoding."""


class EmptyReferenceSet(StarcubeError):
    """fuzzy_match was handed an empty reference set."""


class UnknownMeasureColumn(StarcubeError):
    """A fact load is missing a measure source column (schema mismatch)."""


class PipelineAbort(StarcubeError):
    """A fatal step error aborted the pipeline run."""


# --- cube ---------------------------------------------------------------------

class UnknownCube(StarcubeError):
    pass


class UnknownRole(StarcubeError):
    pass


class UnknownHierarchy(StarcubeError):
    pass


class UnknownLevel(StarcubeError):
    pass


class UnknownMember(StarcubeError):
    pass


class OrphanFactRow(StarcubeError):
    """A fact row references a surrogate key absent from its dimension."""


class RoleConflict(StarcubeError):
    """Two hierarchies of one role were combined in a single aggregation."""


class StaleCube(StarcubeError):
    """The query was bound against a cube build that has been replaced."""


# --- query --------------------------------------------------------------------

class QuerySyntaxError(StarcubeError):
    """Lex or parse failure; pinpoints line/column and the expected tokens."""

    def __init__(self, message: str, line: int, column: int,
                 expected: tuple[str, ...] = (), found: str = ""):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        self.found = found
        super().__init__(f"{message} at {line}:{column}")

    @property
    def code(self) -> str:
        return "SyntaxError"


class AmbiguousPath(StarcubeError):
    """A member path segment matched more than one member."""


class NonUniformSet(StarcubeError):
    """Tuples of an explicit set do not share one hierarchy signature."""


class HierarchyReusedAcrossAxes(StarcubeError):
    """A hierarchy appeared in more than one of: a tuple slot, the slicer."""


class ResultTooLarge(StarcubeError):
    """The cellset exceeds the configured cell-count cap."""


UNKNOWN_NAME_ERRORS = (UnknownCube, UnknownRole, UnknownHierarchy,
                       UnknownLevel, UnknownMember)
