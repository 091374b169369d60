"""Cellset renderers: json (the wire schema), csv (RFC 4180), table.

Empty cells render as null in json and as the empty string in csv/table.
Output is deterministic: the same cellset always yields identical text.
"""

from __future__ import annotations

import csv
import io
from decimal import Decimal

from ..cube.core import EMPTY
from .evaluator import CellSet

LABEL_JOIN = " / "


def _json_value(value):
    if value is EMPTY:
        return None
    if isinstance(value, Decimal):
        return float(value)
    return value


def cellset_to_json_dict(cs: CellSet) -> dict:
    return {
        "axes": [
            {"positions": [[{"caption": lbl.caption,
                             "unique_name": lbl.unique_name}
                            for lbl in position]
                           for position in axis]}
            for axis in cs.axes
        ],
        "cells": [{measure: _json_value(value)
                   for measure, value in cell.items()}
                  for cell in cs.cells],
        "measures": list(cs.measures),
    }


def _text_value(value) -> str:
    if value is EMPTY:
        return ""
    if isinstance(value, Decimal):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _position_label(position) -> str:
    return LABEL_JOIN.join(lbl.caption for lbl in position)


def cellset_to_csv(cs: CellSet) -> str:
    out = io.StringIO()
    writer = csv.writer(out)
    col_labels = [_position_label(p) for p in cs.axes[0]]
    ncols = len(col_labels)
    if len(cs.axes) > 1:
        writer.writerow([""] + col_labels)
        for r, row_position in enumerate(cs.axes[1]):
            values = [_text_value(next(iter(cell.values())))
                      for cell in cs.cells[r * ncols:(r + 1) * ncols]]
            writer.writerow([_position_label(row_position)] + values)
    else:
        writer.writerow(col_labels)
        writer.writerow([_text_value(next(iter(cell.values())))
                         for cell in cs.cells])
    return out.getvalue()


def cellset_to_table(cs: CellSet) -> str:
    col_labels = [_position_label(p) for p in cs.axes[0]]
    ncols = len(col_labels)
    if len(cs.axes) > 1:
        rows = [[_position_label(rp)] +
                [_text_value(next(iter(cell.values())))
                 for cell in cs.cells[r * ncols:(r + 1) * ncols]]
                for r, rp in enumerate(cs.axes[1])]
        header = [""] + col_labels
    else:
        rows = [[_text_value(next(iter(cell.values())))
                 for cell in cs.cells]]
        header = col_labels
    widths = [max(len(header[i]), *(len(row[i]) for row in rows))
              if rows else len(header[i]) for i in range(len(header))]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(c.rjust(w) if i else c.ljust(w)
                               for i, (c, w) in enumerate(zip(row, widths)))
                     .rstrip())
    return "\n".join(lines) + "\n"


def format_cellset(cs: CellSet, fmt: str = "table") -> str:
    """Render a cellset as table, csv, or json text."""
    if fmt == "csv":
        return cellset_to_csv(cs)
    if fmt == "json":
        import json
        return json.dumps(cellset_to_json_dict(cs), ensure_ascii=False,
                          indent=2) + "\n"
    if fmt == "table":
        return cellset_to_table(cs)
    raise ValueError(f"unknown format {fmt!r} (expected table|csv|json)")
