"""Evaluates a bound query into a cellset.

Each (row position x column position) pair forms a coordinate from its
member components plus the slicer; the cell is the cube aggregate at that
coordinate for the position's measure. Positions sharing a level signature
are batched into a single grouped aggregate, so axis sets cost one fold,
not one scan per cell. NON EMPTY prunes all-Empty columns first, then rows.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..cube.core import EMPTY, Cube
from ..errors import StaleCube
from ..schema import ci
from .binder import BoundQuery, MeasureComponent, MemberComponent
from .parser import parse
from . import binder as _binder_mod


@dataclass(frozen=True)
class PositionLabel:
    caption: str
    unique_name: str


@dataclass
class CellSet:
    axes: list            # per axis: list of positions (list of PositionLabel)
    axis_names: list
    cells: list           # row-major (axis 1 outer): {measure: value|EMPTY}
    measures: list

    @property
    def ncols(self) -> int:
        return len(self.axes[0]) if self.axes else 0

    @property
    def nrows(self) -> int:
        return len(self.axes[1]) if len(self.axes) > 1 else 1


class _Position:
    """A bound axis position, pre-split for evaluation."""

    __slots__ = ("components", "members", "measure", "signature", "coord")

    def __init__(self, components):
        self.components = components
        members = [c for c in components if isinstance(c, MemberComponent)]
        members.sort(key=lambda c: (ci(c.role), ci(c.hierarchy)))
        self.members = members
        measures = [c.name for c in components
                    if isinstance(c, MeasureComponent)]
        self.measure = measures[0] if measures else None
        self.signature = tuple((ci(c.role), ci(c.hierarchy), c.level_index)
                               for c in members)
        self.coord = tuple(c.member_id for c in members)


def evaluate(bound: BoundQuery, cube: Cube) -> CellSet:
    if bound.build_stamp != cube.build_stamp:
        raise StaleCube(
            f"query bound against build {bound.build_stamp}, cube is at "
            f"{cube.build_stamp}")

    col_axis = bound.axes[0]
    row_axis = bound.axes[1] if len(bound.axes) > 1 else None
    col_positions = [_Position(p) for p in col_axis.positions]
    row_positions = ([_Position(p) for p in row_axis.positions]
                     if row_axis is not None else [_Position(())])

    slicer_ids = [c.member_id for c in bound.slicer]
    default_measure = bound.slicer_measure or bound.measures[0]

    member_specs = {}
    for position in col_positions + row_positions:
        for component in position.members:
            key = (ci(component.role), ci(component.hierarchy),
                   component.level_index)
            member_specs.setdefault(
                key, (component.role, component.hierarchy,
                      component.level_index))

    batches: dict = {}

    def batch_for(col: _Position, row: _Position) -> dict:
        signature = col.signature + row.signature
        cached = batches.get(signature)
        if cached is None:
            group_by = [member_specs[key] for key in signature]
            cached = cube.aggregate(group_by, filter=slicer_ids,
                                    measures=bound.measures)
            batches[signature] = cached
        return cached

    matrix = []
    for row in row_positions:
        line = []
        for col in col_positions:
            cells = batch_for(col, row)
            value = cells.get(col.coord + row.coord)
            measure = col.measure or row.measure or default_measure
            line.append({measure: value.values[measure]
                         if value is not None else EMPTY})
        matrix.append(line)

    # NON EMPTY: prune all-Empty columns, then all-Empty rows.
    col_keep = list(range(len(col_positions)))
    if col_axis.non_empty and matrix:
        col_keep = [c for c in col_keep
                    if any(_has_value(matrix[r][c])
                           for r in range(len(row_positions)))]
    row_keep = list(range(len(row_positions)))
    if row_axis is not None and row_axis.non_empty:
        row_keep = [r for r in row_keep
                    if any(_has_value(matrix[r][c]) for c in col_keep)]

    axes = [[_labels(cube, col_positions[c].components) for c in col_keep]]
    axis_names = [col_axis.name]
    if row_axis is not None:
        axes.append([_labels(cube, row_positions[r].components)
                     for r in row_keep])
        axis_names.append(row_axis.name)

    cells = [matrix[r][c] for r in row_keep for c in col_keep]
    return CellSet(axes=axes, axis_names=axis_names, cells=cells,
                   measures=list(bound.measures))


def _has_value(cell: dict) -> bool:
    return any(v is not EMPTY for v in cell.values())


def _labels(cube: Cube, components) -> list:
    labels = []
    for component in components:
        if isinstance(component, MeasureComponent):
            labels.append(PositionLabel(component.name,
                                        f"[Measures].[{component.name}]"))
        else:
            tree = cube.tree(component.role, component.hierarchy)
            member = tree.member(component.member_id)
            labels.append(PositionLabel(member.caption,
                                        tree.unique_name(member.id)))
    return labels


def run_query(text: str, cube: Cube) -> CellSet:
    """parse -> bind -> evaluate in one call."""
    ast = parse(text)
    bound = _binder_mod.bind(ast, cube)
    return evaluate(bound, cube)
