"""Row transforms: rename, type conversion, fuzzy cleaning, derived
columns, and sort-dedupe.

Steps form a linear chain per target table; a row rejected at step k is
never seen by step k+1. All steps stream except SortDedupe, which is a
barrier (it must see the whole batch).
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field

from ..errors import PipelineAbort, PipelineConfigError
from ..schema import age_band
from ..values import ValueKind, ValueParseError, parse_value
from .extract import Quarantine, Row
from .fuzzy import fuzzy_match


class TransformStep:
    name = "step"

    def validate(self, columns: set) -> set:
        """Check references against the evolving column set; return the
        post-step columns."""
        return columns

    def run(self, rows, quarantine: Quarantine, warehouse=None):
        raise NotImplementedError


@dataclass
class RenameColumns(TransformStep):
    mapping: dict

    name = "rename_columns"

    def validate(self, columns: set) -> set:
        missing = [c for c in self.mapping if c not in columns]
        if missing:
            raise PipelineConfigError(
                f"rename_columns references missing columns: {missing}")
        return {self.mapping.get(c, c) for c in columns}

    def run(self, rows, quarantine, warehouse=None):
        mapping = self.mapping
        for row in rows:
            row.values = {mapping.get(k, k): v for k, v in row.values.items()}
            yield row


@dataclass
class ConvertTypes(TransformStep):
    kinds: dict                      # column -> ValueKind
    on_error: str = "quarantine"     # or "abort"

    name = "convert_types"

    def __post_init__(self):
        self.kinds = {c: (k if isinstance(k, ValueKind) else ValueKind(k))
                      for c, k in self.kinds.items()}
        if self.on_error not in ("quarantine", "abort"):
            raise PipelineConfigError(
                f"convert_types on_error must be quarantine|abort, "
                f"got {self.on_error!r}")

    def validate(self, columns: set) -> set:
        missing = [c for c in self.kinds if c not in columns]
        if missing:
            raise PipelineConfigError(
                f"convert_types references missing columns: {missing}")
        return columns

    def run(self, rows, quarantine, warehouse=None):
        items = list(self.kinds.items())
        for row in rows:
            values = row.values
            try:
                for column, kind in items:
                    raw = values[column]
                    if isinstance(raw, str):
                        values[column] = parse_value(kind, raw)
            except ValueParseError as exc:
                if self.on_error == "abort":
                    raise PipelineAbort(
                        f"convert_types failed on column {column!r} "
                        f"({row.source}:{row.line}): {exc}") from exc
                quarantine.add(row, self.name,
                               f"ConvertFailed: column {column!r}: {exc}")
                continue
            yield row


@dataclass
class FuzzyLookup(TransformStep):
    """Replace a column's value with its best canonical reference.

    References come either from an inline list or from the distinct current
    values of a warehouse dimension attribute. Values that match no
    reference at the threshold follow ``on_miss``.
    """

    column: str
    threshold: float = 0.8
    reference_dimension: str | None = None
    reference_attribute: str | None = None
    reference_values: list | None = None
    on_miss: str = "quarantine"      # or "keep"

    name = "fuzzy_lookup"

    def __post_init__(self):
        if self.reference_values is None and not (
                self.reference_dimension and self.reference_attribute):
            raise PipelineConfigError(
                "fuzzy_lookup needs reference_values or "
                "reference_dimension + reference_attribute")
        if self.on_miss not in ("quarantine", "keep"):
            raise PipelineConfigError(
                f"fuzzy_lookup on_miss must be quarantine|keep, "
                f"got {self.on_miss!r}")

    def validate(self, columns: set) -> set:
        if self.column not in columns:
            raise PipelineConfigError(
                f"fuzzy_lookup references missing column: {self.column!r}")
        return columns

    def _references(self, warehouse) -> list:
        if self.reference_values is not None:
            return [str(v) for v in self.reference_values]
        if warehouse is None:
            raise PipelineConfigError(
                "fuzzy_lookup against a dimension needs a warehouse")
        table = warehouse.dimension_table(self.reference_dimension)
        attr = table.dim.attribute(self.reference_attribute)
        if attr is None:
            raise PipelineConfigError(
                f"fuzzy_lookup: {self.reference_dimension} has no attribute "
                f"{self.reference_attribute!r}")
        seen = {row.attributes.get(attr.name)
                for row in table.rows if row.is_current}
        return sorted(str(v) for v in seen if v is not None)

    def run(self, rows, quarantine, warehouse=None):
        references = self._references(warehouse)
        cache: dict = {}
        for row in rows:
            value = row.values.get(self.column)
            if not isinstance(value, str):
                yield row
                continue
            if value not in cache:
                if references:
                    cache[value] = fuzzy_match(value, references, self.threshold)
                else:
                    cache[value] = None
            hit = cache[value]
            if hit is not None:
                row.values[self.column] = hit[0]
                yield row
            elif self.on_miss == "keep":
                yield row
            else:
                quarantine.add(row, self.name,
                               f"FuzzyMiss: column {self.column!r} value "
                               f"{value!r} matched no reference at "
                               f"threshold {self.threshold}")


@dataclass
class DeriveColumn(TransformStep):
    target: str
    rule: str                        # age_band | date_parts
    source: str | None = None

    name = "derive_column"

    def __post_init__(self):
        if self.rule not in ("age_band", "date_parts"):
            raise PipelineConfigError(f"unknown derive rule {self.rule!r}")
        if self.source is None:
            self.source = "age" if self.rule == "age_band" else self.target

    def validate(self, columns: set) -> set:
        if self.source not in columns:
            raise PipelineConfigError(
                f"derive_column references missing column: {self.source!r}")
        if self.rule == "age_band":
            return columns | {self.target}
        return columns | {f"{self.source}_year", f"{self.source}_quarter",
                          f"{self.source}_month"}

    def run(self, rows, quarantine, warehouse=None):
        for row in rows:
            value = row.values.get(self.source)
            if self.rule == "age_band":
                try:
                    age = int(value)
                    if age < 0:
                        raise ValueError("negative age")
                except (TypeError, ValueError):
                    quarantine.add(row, self.name,
                                   f"DeriveFailed: {value!r} is not an age")
                    continue
                row.values[self.target] = age_band(age)
            else:
                if isinstance(value, str):
                    try:
                        value = dt.date.fromisoformat(value.strip())
                    except ValueError:
                        value = None
                if not isinstance(value, dt.date):
                    quarantine.add(row, self.name,
                                   f"DeriveFailed: {row.values.get(self.source)!r} "
                                   f"is not a date")
                    continue
                quarter = (value.month - 1) // 3 + 1
                row.values[f"{self.source}_year"] = value.year
                row.values[f"{self.source}_quarter"] = f"{value.year}-Q{quarter}"
                row.values[f"{self.source}_month"] = f"{value.year}-{value.month:02d}"
            yield row


@dataclass
class SortDedupe(TransformStep):
    """Sort by key columns and drop exact-duplicate rows (full-row
    equality). Barrier step: materializes the stream."""

    keys: list = field(default_factory=list)

    name = "sort_dedupe"

    def validate(self, columns: set) -> set:
        missing = [c for c in self.keys if c not in columns]
        if missing:
            raise PipelineConfigError(
                f"sort_dedupe references missing columns: {missing}")
        return columns

    def run(self, rows, quarantine, warehouse=None):
        batch = sorted(rows, key=lambda r: tuple(str(r.values.get(k))
                                                 for k in self.keys))
        seen: set = set()
        for row in batch:
            fingerprint = tuple(sorted((k, str(v))
                                       for k, v in row.values.items()))
            if fingerprint in seen:
                continue
            seen.add(fingerprint)
            yield row


_STEP_TYPES = {
    "rename_columns": RenameColumns,
    "convert_types": ConvertTypes,
    "fuzzy_lookup": FuzzyLookup,
    "derive_column": DeriveColumn,
    "sort_dedupe": SortDedupe,
}


def step_from_dict(doc: dict) -> TransformStep:
    doc = dict(doc)
    op = doc.pop("op", None)
    cls = _STEP_TYPES.get(op)
    if cls is None:
        raise PipelineConfigError(f"unknown transform op {op!r}")
    if cls is RenameColumns:
        return RenameColumns(mapping=doc["map"])
    if cls is ConvertTypes:
        return ConvertTypes(kinds=doc["map"],
                            on_error=doc.get("on_error", "quarantine"))
    try:
        return cls(**doc)
    except TypeError as exc:
        raise PipelineConfigError(f"bad {op} step: {exc}") from exc


def validate_chain(columns, steps) -> set:
    """Walk a chain, checking each step's column references; returns the
    post-chain column set."""
    current = set(columns)
    for step in steps:
        current = step.validate(current)
    return current


def apply_transforms(rows, steps, quarantine: Quarantine, warehouse=None):
    """Apply a validated chain to a row stream; rejected rows land in the
    quarantine and never reach later steps."""
    stream = iter(rows)
    for step in steps:
        stream = step.run(stream, quarantine, warehouse)
    return stream
