"""Warehouse loaders.

Dimension flows are sorted and exact-deduplicated, then routed through the
slowly-changing-dimension logic (Type 1 overwrite / Type 2 versioning).
Fact flows are NOT deduplicated: duplicate fact rows are legal and both
load. Fact natural keys resolve to the is_current surrogate key; calendar
dates resolve against the auto-populated date dimension.
"""

from __future__ import annotations

import datetime as dt
from array import array
from dataclasses import dataclass, field

import numpy as np

from ..errors import UnknownMeasureColumn
from ..schema import DimensionDef, FactDef, ScdType
from ..values import ValueKind, ValueParseError, parse_value, to_scaled
from ..warehouse import UNKNOWN_KEY, DimensionTable, Warehouse
from .extract import Quarantine


@dataclass
class DimensionLoadReport:
    table: str
    inserted: int = 0
    updated_type1: int = 0
    versioned_type2: int = 0
    unchanged: int = 0
    deduped: int = 0
    quarantined: int = 0

    def counts(self) -> dict:
        return {"inserted": self.inserted, "updated_type1": self.updated_type1,
                "versioned_type2": self.versioned_type2,
                "unchanged": self.unchanged, "deduped": self.deduped,
                "quarantined": self.quarantined}


@dataclass
class FactLoadReport:
    table: str
    inserted: int = 0
    quarantined: int = 0
    touched_dimensions: list = field(default_factory=list)

    def counts(self) -> dict:
        return {"inserted": self.inserted, "quarantined": self.quarantined}


def _typed_attributes(row_values: dict, dim: DimensionDef, quarantine_reasons: list):
    """Project a row onto the dimension's declared attributes, parsing any
    values still raw."""
    attrs = {}
    for attr in dim.attributes:
        value = row_values.get(attr.name)
        if isinstance(value, str) and attr.kind is not ValueKind.STRING:
            try:
                value = parse_value(attr.kind, value)
            except ValueParseError as exc:
                quarantine_reasons.append(f"column {attr.name!r}: {exc}")
                return None
        attrs[attr.name] = value
    return attrs


def load_dimension(rows, dim: DimensionDef, warehouse: Warehouse,
                   batch_date: dt.date, quarantine: Quarantine) -> DimensionLoadReport:
    """Sort-dedupe a dimension batch, then insert / overwrite / version.

    Per natural key: a new key inserts (version 1); a changed Type 1
    attribute overwrites in place (history restated); a changed Type 2
    attribute closes the current row and inserts the next version.
    """
    table = warehouse.dimension_table(dim.name)
    report = DimensionLoadReport(table=dim.name)

    staged = []
    for row in rows:
        nk = row.values.get(dim.natural_key)
        if nk is None or nk == "":
            quarantine.add(row, "load_dimension",
                           f"MissingNaturalKey: {dim.natural_key!r} absent")
            report.quarantined += 1
            continue
        reasons: list = []
        attrs = _typed_attributes(row.values, dim, reasons)
        if attrs is None:
            quarantine.add(row, "load_dimension", f"BadValue: {reasons[0]}")
            report.quarantined += 1
            continue
        staged.append((row, attrs))

    # Sort by natural key (stable: file order preserved within a key).
    staged.sort(key=lambda item: str(item[1][dim.natural_key]))

    first_of_key: dict = {}
    for row, attrs in staged:
        nk = attrs[dim.natural_key]
        kept = first_of_key.get(nk)
        if kept is not None:
            if attrs == kept:
                report.deduped += 1
            else:
                quarantine.add(row, "load_dimension",
                               f"ConflictingDuplicates: natural key {nk!r} "
                               f"appears with differing attributes")
                report.quarantined += 1
            continue
        first_of_key[nk] = attrs

        current = table.current(nk)
        if current is None:
            table.insert(nk, attrs, batch_date)
            report.inserted += 1
            continue
        changed = {name: value for name, value in attrs.items()
                   if current.attributes.get(name) != value}
        if not changed:
            report.unchanged += 1
        elif any(dim.scd_type(name) is ScdType.TYPE2 for name in changed):
            table.add_version(nk, attrs, batch_date)
            report.versioned_type2 += 1
        else:
            table.overwrite(nk, changed)
            report.updated_type1 += 1
    return report


def _date_attributes(dim: DimensionDef, day: dt.date) -> dict:
    """Fill a calendar dimension row from its attribute names."""
    quarter = (day.month - 1) // 3 + 1
    known = {
        "date": day,
        "year": day.year,
        "quarter": f"{day.year}-Q{quarter}",
        "month": f"{day.year}-{day.month:02d}",
        "day": day.day,
    }
    return {attr.name: known.get(attr.name) for attr in dim.attributes}


def ensure_date_dimension(warehouse: Warehouse, dim: DimensionDef,
                          first: dt.date, last: dt.date, batch_date: dt.date,
                          padding_days: int = 0) -> bool:
    """Populate every missing calendar day in [first-pad, last+pad].

    Returns True when rows were added. Date dimensions are never ETL-loaded
    and never versioned.
    """
    table = warehouse.dimension_table(dim.name)
    start = first - dt.timedelta(days=padding_days)
    end = last + dt.timedelta(days=padding_days)
    added = False
    day = start
    while day <= end:
        if table.current(day) is None:
            table.insert(day, _date_attributes(dim, day), batch_date)
            added = True
        day += dt.timedelta(days=1)
    return added


def _is_date_role(dim: DimensionDef) -> bool:
    nk = dim.attribute(dim.natural_key)
    return nk is not None and nk.kind is ValueKind.DATE


def load_fact(rows, fact: FactDef, warehouse: Warehouse, batch_id: str,
              batch_date: dt.date, quarantine: Quarantine,
              late_arriving: str = "quarantine",
              date_padding_days: int = 0) -> FactLoadReport:
    """Stream a fact batch into the warehouse.

    Duplicate rows are preserved. An unresolvable natural key follows
    ``late_arriving``: quarantine the row, or load it against the Unknown
    member (surrogate key 0).
    """
    if late_arriving not in ("quarantine", "unknown_member"):
        raise ValueError(f"late_arriving must be quarantine|unknown_member, "
                         f"got {late_arriving!r}")
    table = warehouse.fact_table(fact.name)
    report = FactLoadReport(table=fact.name)

    id_roles = []     # (role name, current nk -> sk map)
    date_roles = []   # (role name, dimension def)
    for role in fact.roles:
        dim = warehouse.catalog.dimension(role.dimension)
        if _is_date_role(dim):
            date_roles.append((role.role, dim))
        else:
            id_roles.append((role.role,
                             warehouse.dimension_table(dim.name).current_index()))

    id_cols = {name: array("q") for name, _ in id_roles}
    date_cols = {name: array("q") for name, _ in date_roles}
    measure_cols = {m.name: array("q") for m in fact.measures}

    for row in rows:
        values = row.values
        staged_ids = []
        staged_dates = []
        staged_measures = []
        reject = None

        for m in fact.measures:
            if m.source_column not in values:
                raise UnknownMeasureColumn(
                    f"{fact.name}: measure column {m.source_column!r} missing "
                    f"(have {sorted(values)})")
            raw = values[m.source_column]
            try:
                if isinstance(raw, str):
                    raw = parse_value(m.kind, raw)
                staged_measures.append(to_scaled(raw, m.kind))
            except (ValueParseError, TypeError):
                reject = f"BadMeasure: column {m.source_column!r} value {raw!r}"
                break

        if reject is None:
            for name, nk_to_sk in id_roles:
                nk = values.get(name)
                sk = nk_to_sk.get(nk)
                if sk is None:
                    if late_arriving == "unknown_member":
                        sk = UNKNOWN_KEY
                    else:
                        reject = f"UnknownKey: role {name!r} value {nk!r}"
                        break
                staged_ids.append(sk)

        if reject is None:
            for name, _dim in date_roles:
                value = values.get(name)
                if isinstance(value, str):
                    try:
                        value = dt.date.fromisoformat(value.strip())
                    except ValueError:
                        value = None
                if not isinstance(value, dt.date):
                    reject = (f"BadDate: role {name!r} value "
                              f"{values.get(name)!r}")
                    break
                staged_dates.append(value.toordinal())

        if reject is not None:
            quarantine.add(row, "load_fact", reject)
            report.quarantined += 1
            continue

        for (name, _), sk in zip(id_roles, staged_ids):
            id_cols[name].append(sk)
        for (name, _), ordinal in zip(date_roles, staged_dates):
            date_cols[name].append(ordinal)
        for m, scaled in zip(fact.measures, staged_measures):
            measure_cols[m.name].append(scaled)
        report.inserted += 1

    # Resolve calendar dates now that the observed range is known.
    resolved_dates: dict = {}
    if date_roles and report.inserted:
        ordinals = [np.frombuffer(date_cols[name], dtype=np.int64)
                    for name, _ in date_roles]
        lo = int(min(col.min() for col in ordinals))
        hi = int(max(col.max() for col in ordinals))
        touched: dict = {}
        for name, dim in date_roles:
            if dim.name not in touched:
                touched[dim.name] = ensure_date_dimension(
                    warehouse, dim, dt.date.fromordinal(lo),
                    dt.date.fromordinal(hi), batch_date, date_padding_days)
        report.touched_dimensions = [name for name, added in touched.items()
                                     if added]
        lut_cache: dict = {}
        for (name, dim), col in zip(date_roles, ordinals):
            if dim.name not in lut_cache:
                lut = np.zeros(hi - lo + 1, dtype=np.int64)
                for nk, sk in warehouse.dimension_table(dim.name) \
                        .current_index().items():
                    ordinal = nk.toordinal()
                    if lo <= ordinal <= hi:
                        lut[ordinal - lo] = sk
                lut_cache[dim.name] = lut
            resolved_dates[name] = lut_cache[dim.name][col - lo]

    if report.inserted:
        fks = {}
        for name, _ in id_roles:
            fks[name] = np.frombuffer(id_cols[name], dtype=np.int64)
        for name, _ in date_roles:
            fks[name] = resolved_dates[name]
        measures = {m.name: np.frombuffer(measure_cols[m.name], dtype=np.int64)
                    for m in fact.measures}
        table.extend(fks, measures, batch_id, report.inserted)
    return report
