"""Delimited-file extraction with row provenance and quarantine.

Every emitted row remembers (source name, line number); malformed lines
quarantine instead of aborting the run.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import EncodingError, SourceNotFound


@dataclass(frozen=True)
class SourceDef:
    name: str
    path: str
    delimiter: str = ","
    encoding: str = "utf-8"
    has_header: bool = True


class Row:
    """One record moving through the pipeline: raw strings after extract,
    typed values after transforms."""

    __slots__ = ("values", "source", "line")

    def __init__(self, values: dict, source: str, line: int):
        self.values = values
        self.source = source
        self.line = line

    def copy_with(self, values: dict) -> "Row":
        return Row(values, self.source, self.line)

    def __repr__(self) -> str:
        return f"Row({self.source}:{self.line} {self.values!r})"


@dataclass(frozen=True)
class QuarantineRecord:
    source: str
    line: int
    step: str
    reason: str
    values: dict


@dataclass
class Quarantine:
    """Collects every rejected row; written out as a first-class CSV."""

    records: list = field(default_factory=list)

    def add(self, row: Row, step: str, reason: str) -> None:
        self.records.append(QuarantineRecord(row.source, row.line, step,
                                             reason, dict(row.values)))

    def __len__(self) -> int:
        return len(self.records)

    def write_csv(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["source", "line", "step", "reason", "raw_row"])
            for rec in self.records:
                writer.writerow([rec.source, rec.line, rec.step, rec.reason,
                                 json.dumps(rec.values, ensure_ascii=False,
                                            default=str)])


def extract(source: SourceDef, quarantine: Quarantine):
    """Yield rows of one delimited file in file order.

    Rows whose field count disagrees with the header quarantine with reason
    RaggedRow; a missing file or an undecodable byte stream is fatal.
    """
    path = Path(source.path)
    if not path.exists():
        raise SourceNotFound(f"source {source.name}: {path} does not exist")
    try:
        with path.open("r", encoding=source.encoding, newline="") as fh:
            reader = csv.reader(fh, delimiter=source.delimiter)
            header: list[str] | None = None
            if source.has_header:
                try:
                    header = next(reader)
                except StopIteration:
                    return
            for record in reader:
                if not record:
                    continue
                if header is None:
                    header = [f"col{i + 1}" for i in range(len(record))]
                if len(record) != len(header):
                    quarantine.add(
                        Row({f"field{i + 1}": v for i, v in enumerate(record)},
                            source.name, reader.line_num),
                        "extract",
                        f"RaggedRow: expected {len(header)} fields, "
                        f"got {len(record)}")
                    continue
                yield Row(dict(zip(header, record)), source.name,
                          reader.line_num)
    except UnicodeDecodeError as exc:
        raise EncodingError(f"source {source.name}: {exc}") from exc
