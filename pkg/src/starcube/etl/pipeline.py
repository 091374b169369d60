"""Pipeline orchestration: run configured sources through their transform
chains into the warehouse.

Dimensions always load before facts (surrogate-key resolution needs the
current dimension state). Rerunning a batch first deletes that batch's
fact rows, so fact loads are idempotent per batch_id. Atomicity is
per-table: each table commits as it finishes.
"""

from __future__ import annotations

import datetime as dt
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import PipelineConfigError
from ..schema import SchemaCatalog
from ..warehouse import Warehouse
from .extract import Quarantine, SourceDef, extract
from .load import load_dimension, load_fact
from .transforms import apply_transforms, step_from_dict, validate_chain


@dataclass
class LoadDef:
    source: str
    target: str
    batch_id: str | None = None          # defaults to the run's batch_id
    late_arriving: str = "quarantine"    # facts only


@dataclass
class PipelineConfig:
    sources: list
    transforms: dict                     # target name -> [TransformStep]
    loads: list
    date_padding_days: int = 0


@dataclass
class TableLoadReport:
    target: str
    source: str
    kind: str                            # "dimension" | "fact"
    extracted: int = 0
    quarantined: int = 0
    counts: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"target": self.target, "source": self.source, "kind": self.kind,
                "extracted": self.extracted, "quarantined": self.quarantined,
                **self.counts}


@dataclass
class PipelineReport:
    batch_id: str
    batch_date: str
    tables: list = field(default_factory=list)
    duration_ms: int = 0
    quarantine_path: str | None = None

    @property
    def total_quarantined(self) -> int:
        return sum(t.quarantined for t in self.tables)

    def to_dict(self) -> dict:
        return {"batch_id": self.batch_id, "batch_date": self.batch_date,
                "duration_ms": self.duration_ms,
                "quarantine_path": self.quarantine_path,
                "total_quarantined": self.total_quarantined,
                "tables": [t.to_dict() for t in self.tables]}

    def format_table(self) -> str:
        """Aligned human-readable summary."""
        headers = ["target", "source", "extracted", "loaded", "quarantined",
                   "detail"]
        rows = []
        for t in self.tables:
            if t.kind == "dimension":
                loaded = sum(t.counts.get(k, 0) for k in
                             ("inserted", "updated_type1", "versioned_type2",
                              "unchanged", "deduped"))
                detail = ("ins={inserted} t1={updated_type1} "
                          "t2={versioned_type2} same={unchanged} "
                          "dedup={deduped}").format(**t.counts)
            else:
                loaded = t.counts.get("inserted", 0)
                detail = "ins={inserted}".format(**t.counts)
            rows.append([t.target, t.source, str(t.extracted), str(loaded),
                         str(t.quarantined), detail])
        widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
                  for i, h in enumerate(headers)]
        lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
        lines.append("  ".join("-" * w for w in widths))
        for r in rows:
            lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)))
        lines.append(f"batch {self.batch_id} ({self.batch_date}) finished in "
                     f"{self.duration_ms} ms; quarantined "
                     f"{self.total_quarantined} row(s)")
        return "\n".join(lines)


def pipeline_from_dict(doc: dict, base_dir=None) -> PipelineConfig:
    """Parse pipeline.json; source paths resolve relative to base_dir."""
    base = Path(base_dir) if base_dir is not None else Path(".")
    try:
        sources = [
            SourceDef(name=s["name"],
                      path=str((base / s["path"]).resolve()
                               if not Path(s["path"]).is_absolute()
                               else Path(s["path"])),
                      delimiter=s.get("delimiter", ","),
                      encoding=s.get("encoding", "utf-8"),
                      has_header=s.get("has_header", True))
            for s in doc.get("sources", [])
        ]
        transforms = {target: [step_from_dict(s) for s in steps]
                      for target, steps in doc.get("transforms", {}).items()}
        loads = [LoadDef(source=l["source"], target=l["target"],
                         batch_id=l.get("batch_id"),
                         late_arriving=l.get("late_arriving", "quarantine"))
                 for l in doc.get("loads", [])]
    except (KeyError, TypeError) as exc:
        raise PipelineConfigError(f"malformed pipeline document: {exc}") from exc
    return PipelineConfig(sources=sources, transforms=transforms, loads=loads,
                          date_padding_days=int(doc.get("date_padding_days", 0)))


def load_pipeline(path) -> PipelineConfig:
    path = Path(path)
    doc = json.loads(path.read_text(encoding="utf-8"))
    return pipeline_from_dict(doc, base_dir=path.parent)


def validate_pipeline(config: PipelineConfig, catalog: SchemaCatalog) -> list:
    """Catalog-level validation, run before any I/O."""
    problems = []
    names = set()
    for source in config.sources:
        if source.name in names:
            problems.append(f"duplicate source name {source.name!r}")
        names.add(source.name)
    for load in config.loads:
        if load.source not in names:
            problems.append(f"load target {load.target!r} references unknown "
                            f"source {load.source!r}")
        if catalog.dimension(load.target) is None \
                and catalog.fact(load.target) is None:
            problems.append(f"load target {load.target!r} is not declared "
                            f"in the catalog")
        if load.late_arriving not in ("quarantine", "unknown_member"):
            problems.append(f"load {load.target!r}: bad late_arriving "
                            f"{load.late_arriving!r}")
    for target in config.transforms:
        if catalog.dimension(target) is None and catalog.fact(target) is None:
            problems.append(f"transform chain targets unknown table {target!r}")
    return problems


def _chain_for(config: PipelineConfig, target: str) -> list:
    for name, steps in config.transforms.items():
        if name.casefold() == target.casefold():
            return steps
    return []


def run_pipeline(config: PipelineConfig, catalog: SchemaCatalog,
                 warehouse: Warehouse, batch_id: str,
                 batch_date: dt.date | None = None) -> PipelineReport:
    """Execute a full pipeline run as one batch.

    Raises PipelineConfigError before touching any file when the config
    does not fit the catalog; fatal step errors propagate after the
    quarantine file is flushed, leaving all previously committed tables
    intact.
    """
    problems = validate_pipeline(config, catalog)
    if problems:
        raise PipelineConfigError("; ".join(problems))
    if batch_date is None:
        batch_date = dt.date.today()

    started = time.perf_counter()
    report = PipelineReport(batch_id=batch_id, batch_date=batch_date.isoformat())
    quarantine = Quarantine()
    sources = {s.name: s for s in config.sources}

    dim_loads = [l for l in config.loads if catalog.dimension(l.target)]
    fact_loads = [l for l in config.loads if catalog.fact(l.target)]

    try:
        for load in dim_loads + fact_loads:
            source = sources[load.source]
            effective_batch = load.batch_id or batch_id
            steps = _chain_for(config, load.target)
            table_report = TableLoadReport(
                target=load.target, source=load.source,
                kind="dimension" if catalog.dimension(load.target) else "fact")

            before = len(quarantine)
            counted = _CountingStream(extract(source, quarantine))
            _validate_against_header(source, steps)
            stream = apply_transforms(counted, steps, quarantine, warehouse)

            if table_report.kind == "dimension":
                dim = catalog.dimension(load.target)
                result = load_dimension(stream, dim, warehouse, batch_date,
                                        quarantine)
                table_report.counts = result.counts()
                touched = []
            else:
                fact = catalog.fact(load.target)
                warehouse.fact_table(fact.name).delete_batch(effective_batch)
                result = load_fact(stream, fact, warehouse, effective_batch,
                                   batch_date, quarantine,
                                   late_arriving=load.late_arriving,
                                   date_padding_days=config.date_padding_days)
                table_report.counts = result.counts()
                touched = result.touched_dimensions

            delta = quarantine.records[before:]
            extract_rejects = sum(1 for rec in delta if rec.step == "extract")
            table_report.extracted = counted.count + extract_rejects
            table_report.quarantined = len(delta)
            report.tables.append(table_report)
            for dim_name in touched:
                warehouse.commit_table(dim_name)
            warehouse.commit_table(load.target)
    finally:
        if warehouse.data_dir is not None:
            path = warehouse.data_dir / "quarantine" / f"{batch_id}.csv"
            quarantine.write_csv(path)
            report.quarantine_path = str(path)

    report.duration_ms = int((time.perf_counter() - started) * 1000)
    return report


def _validate_against_header(source: SourceDef, steps) -> None:
    """Check the transform chain's column references against the file
    header (cheap: reads one line)."""
    import csv as _csv

    path = Path(source.path)
    if not path.exists():
        return  # extract() raises SourceNotFound with a better message
    if not source.has_header:
        return
    with path.open("r", encoding=source.encoding, newline="") as fh:
        reader = _csv.reader(fh, delimiter=source.delimiter)
        try:
            header = next(reader)
        except StopIteration:
            return
    validate_chain(header, steps)


class _CountingStream:
    """Counts rows as they stream by (the per-table extracted figure)."""

    def __init__(self, inner):
        self.inner = inner
        self.count = 0

    def __iter__(self):
        for row in self.inner:
            self.count += 1
            yield row
