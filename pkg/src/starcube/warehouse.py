"""Warehouse storage: SCD-versioned dimension tables and columnar facts.

On disk a warehouse is a directory with one CSV per table plus
``warehouse.json`` (catalog snapshot, row counts, content hashes).
Surrogate key 0 is reserved for the Unknown member and never stored.
"""

from __future__ import annotations

import csv
import datetime as dt
import hashlib
import json
from array import array
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CatalogError
from .schema import (SchemaCatalog, DimensionDef, FactDef, Violation,
                     catalog_to_dict, _catalog_from_dict, ci)
from .values import ValueKind, format_value, parse_value

UNKNOWN_KEY = 0

_META_FILE = "warehouse.json"
_TABLE_DIR = "tables"


@dataclass
class DimensionRow:
    surrogate_key: int
    natural_key: object
    attributes: dict
    valid_from: dt.date
    valid_to: dt.date | None      # None = open interval
    is_current: bool
    version: int


class DimensionTable:
    """All stored versions of one dimension, indexed by natural key."""

    def __init__(self, dim: DimensionDef):
        self.dim = dim
        self.rows: list[DimensionRow] = []
        self._versions: dict = {}      # natural key -> [rows, oldest first]
        self._next_sk = 1

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def max_surrogate_key(self) -> int:
        return self._next_sk - 1

    def versions_of(self, natural_key) -> list[DimensionRow]:
        return self._versions.get(natural_key, [])

    def current(self, natural_key) -> DimensionRow | None:
        versions = self._versions.get(natural_key)
        if not versions:
            return None
        last = versions[-1]
        return last if last.is_current else None

    def current_index(self) -> dict:
        """natural key -> surrogate key of the is_current row."""
        return {nk: versions[-1].surrogate_key
                for nk, versions in self._versions.items()
                if versions[-1].is_current}

    def insert(self, natural_key, attributes: dict, valid_from: dt.date) -> DimensionRow:
        """Insert a brand-new natural key (version 1)."""
        row = DimensionRow(self._next_sk, natural_key, dict(attributes),
                           valid_from, None, True, 1)
        self._next_sk += 1
        self.rows.append(row)
        self._versions.setdefault(natural_key, []).append(row)
        return row

    def add_version(self, natural_key, attributes: dict, valid_from: dt.date) -> DimensionRow:
        """Close the current row and insert the next version (SCD Type 2)."""
        versions = self._versions[natural_key]
        old = versions[-1]
        old.valid_to = valid_from
        old.is_current = False
        row = DimensionRow(self._next_sk, natural_key, dict(attributes),
                           valid_from, None, True, old.version + 1)
        self._next_sk += 1
        self.rows.append(row)
        versions.append(row)
        return row

    def overwrite(self, natural_key, changes: dict) -> None:
        """Restate attributes across every version (SCD Type 1)."""
        for row in self._versions[natural_key]:
            row.attributes.update(changes)

    def check_invariants(self) -> list[str]:
        """SCD bookkeeping problems, empty when the table is consistent."""
        problems = []
        seen_sk = set()
        for row in self.rows:
            if row.surrogate_key in seen_sk or row.surrogate_key == UNKNOWN_KEY:
                problems.append(f"surrogate key {row.surrogate_key} reused")
            seen_sk.add(row.surrogate_key)
        for nk, versions in self._versions.items():
            current = [r for r in versions if r.is_current]
            if len(current) != 1:
                problems.append(f"{nk!r}: {len(current)} current rows")
            for i, row in enumerate(versions):
                if row.version != i + 1:
                    problems.append(f"{nk!r}: version numbers not contiguous")
                    break
            for prev, nxt in zip(versions, versions[1:]):
                if prev.valid_to != nxt.valid_from:
                    problems.append(f"{nk!r}: validity intervals not contiguous")
            if versions and versions[-1].valid_to is not None:
                problems.append(f"{nk!r}: newest version is closed")
        return problems

    # --- persistence ---

    def _header(self) -> list[str]:
        return (["surrogate_key"] + [a.name for a in self.dim.attributes]
                + ["valid_from", "valid_to", "is_current", "version"])

    def _row_record(self, row: DimensionRow) -> list[str]:
        return ([str(row.surrogate_key)]
                + [format_value(row.attributes.get(a.name)) for a in self.dim.attributes]
                + [row.valid_from.isoformat(),
                   "" if row.valid_to is None else row.valid_to.isoformat(),
                   "true" if row.is_current else "false",
                   str(row.version)])

    def write_csv(self, path: Path) -> None:
        with path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(self._header())
            for row in sorted(self.rows, key=lambda r: r.surrogate_key):
                writer.writerow(self._row_record(row))

    @classmethod
    def read_csv(cls, dim: DimensionDef, path: Path) -> "DimensionTable":
        table = cls(dim)
        kinds = {a.name: a.kind for a in dim.attributes}
        with path.open("r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                return table
            attr_names = header[1:-4]
            for rec in reader:
                attrs = {}
                for name, raw in zip(attr_names, rec[1:-4]):
                    attrs[name] = parse_value(kinds[name], raw) if raw != "" else None
                row = DimensionRow(
                    surrogate_key=int(rec[0]),
                    natural_key=attrs[dim.natural_key],
                    attributes=attrs,
                    valid_from=dt.date.fromisoformat(rec[-4]),
                    valid_to=dt.date.fromisoformat(rec[-3]) if rec[-3] else None,
                    is_current=rec[-2] == "true",
                    version=int(rec[-1]),
                )
                table.rows.append(row)
                table._versions.setdefault(row.natural_key, []).append(row)
        for versions in table._versions.values():
            versions.sort(key=lambda r: r.version)
        table._next_sk = max((r.surrogate_key for r in table.rows), default=0) + 1
        return table

    def content_hash(self) -> str:
        digest = hashlib.sha256()
        for row in sorted(self.rows, key=lambda r: r.surrogate_key):
            digest.update("\x1f".join(self._row_record(row)).encode("utf-8"))
            digest.update(b"\n")
        return digest.hexdigest()


def _scaled_from_text(text: str) -> int:
    """Fast fixed-point(4) parse for trusted warehouse CSVs."""
    sign = 1
    if text.startswith("-"):
        sign, text = -1, text[1:]
    if "." in text:
        whole, frac = text.split(".", 1)
        return sign * (int(whole) * 10000 + int(frac.ljust(4, "0")[:4]))
    return sign * int(text) * 10000


class FactTable:
    """Append-only columnar fact storage; duplicates are legal.

    Measures are held as int64 (decimals scaled to fixed-point 4).
    """

    def __init__(self, fact: FactDef):
        self.fact = fact
        self.role_names = [r.role for r in fact.roles]
        self.measure_defs = list(fact.measures)
        self._fk = {name: array("q") for name in self.role_names}
        self._mv = {m.name: array("q") for m in self.measure_defs}
        self._batch_idx = array("i")
        self.batches: list[str] = []

    def __len__(self) -> int:
        return len(self._batch_idx)

    def _batch_index(self, batch_id: str) -> int:
        try:
            return self.batches.index(batch_id)
        except ValueError:
            self.batches.append(batch_id)
            return len(self.batches) - 1

    def append(self, fks: dict, measures: dict, batch_id: str) -> None:
        for name in self.role_names:
            self._fk[name].append(fks[name])
        for m in self.measure_defs:
            self._mv[m.name].append(measures[m.name])
        self._batch_idx.append(self._batch_index(batch_id))

    def extend(self, fks: dict, measures: dict, batch_id: str, count: int) -> None:
        """Bulk-append ``count`` rows given as int64 columns."""
        if count == 0:
            return
        for name in self.role_names:
            col = np.ascontiguousarray(fks[name], dtype=np.int64)
            self._fk[name].frombytes(col.tobytes())
        for m in self.measure_defs:
            col = np.ascontiguousarray(measures[m.name], dtype=np.int64)
            self._mv[m.name].frombytes(col.tobytes())
        bidx = self._batch_index(batch_id)
        self._batch_idx.extend([bidx] * count)

    def delete_batch(self, batch_id: str) -> int:
        """Drop every row of a batch (the rerun-a-batch semantics)."""
        if batch_id not in self.batches:
            return 0
        target = self.batches.index(batch_id)
        keep = [i for i, b in enumerate(self._batch_idx) if b != target]
        removed = len(self._batch_idx) - len(keep)
        if removed:
            for name in self.role_names:
                col = self._fk[name]
                self._fk[name] = array("q", (col[i] for i in keep))
            for m in self.measure_defs:
                col = self._mv[m.name]
                self._mv[m.name] = array("q", (col[i] for i in keep))
            self._batch_idx = array("i", (self._batch_idx[i] for i in keep))
        return removed

    def fk_column(self, role: str) -> np.ndarray:
        return np.frombuffer(self._fk[role], dtype=np.int64) if len(self) \
            else np.empty(0, dtype=np.int64)

    def measure_column(self, name: str) -> np.ndarray:
        return np.frombuffer(self._mv[name], dtype=np.int64) if len(self) \
            else np.empty(0, dtype=np.int64)

    # --- persistence ---

    def _header(self) -> list[str]:
        return self.role_names + [m.name for m in self.measure_defs] + ["batch_id"]

    def write_csv(self, path: Path) -> None:
        with path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(self._header())
            decimal_measures = {m.name for m in self.measure_defs
                                if m.kind is ValueKind.DECIMAL}
            cols = [self._fk[r] for r in self.role_names]
            for m in self.measure_defs:
                cols.append(self._mv[m.name])
            batches = self.batches
            n_roles = len(self.role_names)
            for i, bidx in enumerate(self._batch_idx):
                rec = [str(col[i]) for col in cols[:n_roles]]
                for m, col in zip(self.measure_defs, cols[n_roles:]):
                    raw = col[i]
                    if m.name in decimal_measures:
                        rec.append(f"{raw / 10000:.4f}")
                    else:
                        rec.append(str(raw))
                rec.append(batches[bidx])
                writer.writerow(rec)

    @classmethod
    def read_csv(cls, fact: FactDef, path: Path) -> "FactTable":
        table = cls(fact)
        with path.open("r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            try:
                next(reader)
            except StopIteration:
                return table
            n_roles = len(table.role_names)
            decimal_flags = [m.kind is ValueKind.DECIMAL for m in table.measure_defs]
            fk_cols = [table._fk[r] for r in table.role_names]
            mv_cols = [table._mv[m.name] for m in table.measure_defs]
            batch_cache: dict[str, int] = {}
            for rec in reader:
                for j in range(n_roles):
                    fk_cols[j].append(int(rec[j]))
                for j, is_dec in enumerate(decimal_flags):
                    raw = rec[n_roles + j]
                    mv_cols[j].append(_scaled_from_text(raw) if is_dec else int(raw))
                batch = rec[-1]
                idx = batch_cache.get(batch)
                if idx is None:
                    idx = batch_cache[batch] = table._batch_index(batch)
                table._batch_idx.append(idx)
        return table

    def content_hash(self) -> str:
        records = []
        decimal_measures = {m.name for m in self.measure_defs
                            if m.kind is ValueKind.DECIMAL}
        for i, bidx in enumerate(self._batch_idx):
            rec = [str(self._fk[r][i]) for r in self.role_names]
            for m in self.measure_defs:
                raw = self._mv[m.name][i]
                rec.append(f"{raw / 10000:.4f}" if m.name in decimal_measures
                           else str(raw))
            rec.append(self.batches[bidx])
            records.append("\x1f".join(rec))
        records.sort()
        digest = hashlib.sha256()
        for rec in records:
            digest.update(rec.encode("utf-8"))
            digest.update(b"\n")
        return digest.hexdigest()


@dataclass
class Warehouse:
    """A catalog plus its loaded tables; optionally backed by a directory."""

    catalog: SchemaCatalog
    data_dir: Path | None = None
    version: int = 0
    dimensions: dict = field(default_factory=dict)
    facts: dict = field(default_factory=dict)

    def __post_init__(self):
        for dim in self.catalog.dimensions:
            self.dimensions.setdefault(ci(dim.name), DimensionTable(dim))
        for fact in self.catalog.facts:
            self.facts.setdefault(ci(fact.name), FactTable(fact))

    def dimension_table(self, name: str) -> DimensionTable:
        return self.dimensions[ci(name)]

    def fact_table(self, name: str) -> FactTable:
        return self.facts[ci(name)]

    def content_hashes(self) -> dict:
        hashes = {}
        for dim in self.catalog.dimensions:
            hashes[dim.name] = self.dimension_table(dim.name).content_hash()
        for fact in self.catalog.facts:
            hashes[fact.name] = self.fact_table(fact.name).content_hash()
        return hashes

    # --- directory layout ---

    def _table_path(self, name: str) -> Path:
        return self.data_dir / _TABLE_DIR / f"{name}.csv"

    def commit_table(self, name: str) -> None:
        """Persist one table and bump the warehouse version (per-table
        atomicity boundary)."""
        self.version += 1
        if self.data_dir is None:
            return
        dim = self.catalog.dimension(name)
        if dim is not None:
            self.dimension_table(name).write_csv(self._table_path(dim.name))
        else:
            fact = self.catalog.fact(name)
            self.fact_table(name).write_csv(self._table_path(fact.name))
        self.write_meta()

    def write_meta(self) -> None:
        if self.data_dir is None:
            return
        tables = {}
        for dim in self.catalog.dimensions:
            table = self.dimension_table(dim.name)
            tables[dim.name] = {"rows": len(table), "sha256": table.content_hash()}
        for fact in self.catalog.facts:
            table = self.fact_table(fact.name)
            tables[fact.name] = {"rows": len(table), "sha256": table.content_hash(),
                                 "batches": list(table.batches)}
        meta = {
            "version": self.version,
            "catalog": catalog_to_dict(self.catalog),
            "tables": tables,
        }
        (self.data_dir / _META_FILE).write_text(
            json.dumps(meta, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")

    @classmethod
    def initialize(cls, catalog: SchemaCatalog, data_dir) -> "Warehouse":
        """Create the on-disk skeleton (idempotent for an identical catalog).

        Raises CatalogError when the directory is already initialized with a
        different catalog.
        """
        data_dir = Path(data_dir)
        meta_path = data_dir / _META_FILE
        if meta_path.exists():
            existing = json.loads(meta_path.read_text(encoding="utf-8"))
            if existing.get("catalog") != catalog_to_dict(catalog):
                raise CatalogError([Violation(
                    "UnknownReference", "catalog",
                    f"{data_dir} is already initialized with a different catalog")])
            return cls.load(data_dir)
        (data_dir / _TABLE_DIR).mkdir(parents=True, exist_ok=True)
        (data_dir / "quarantine").mkdir(exist_ok=True)
        (data_dir / "reports").mkdir(exist_ok=True)
        warehouse = cls(catalog=catalog, data_dir=data_dir)
        for dim in catalog.dimensions:
            warehouse.dimension_table(dim.name).write_csv(
                warehouse._table_path(dim.name))
        for fact in catalog.facts:
            warehouse.fact_table(fact.name).write_csv(
                warehouse._table_path(fact.name))
        warehouse.write_meta()
        return warehouse

    @classmethod
    def load(cls, data_dir) -> "Warehouse":
        data_dir = Path(data_dir)
        meta_path = data_dir / _META_FILE
        if not meta_path.exists():
            raise CatalogError([Violation(
                "UnknownReference", str(data_dir),
                "not an initialized warehouse (warehouse.json missing)")])
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        catalog = _catalog_from_dict(meta["catalog"])
        warehouse = cls(catalog=catalog, data_dir=data_dir,
                        version=int(meta.get("version", 0)))
        for dim in catalog.dimensions:
            path = warehouse._table_path(dim.name)
            if path.exists():
                warehouse.dimensions[ci(dim.name)] = DimensionTable.read_csv(dim, path)
        for fact in catalog.facts:
            path = warehouse._table_path(fact.name)
            if path.exists():
                warehouse.facts[ci(fact.name)] = FactTable.read_csv(fact, path)
        return warehouse
