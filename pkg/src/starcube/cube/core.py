"""The in-memory cube: base-granularity cells plus on-demand aggregation.

Base cells are eagerly folded from the fact table at build time, keyed by
the surrogate-key tuple (the finest grain, which is what keeps SCD2
history aggregating under historical attribute values). Coarser aggregates
are computed on demand by mapping surrogate keys to ancestor members and
folding again; results are memoized by (group-by levels, filter) signature.
A cell with no contributing fact rows is Empty, never zero.
"""

from __future__ import annotations

import threading
import time

import numpy as np

from ..errors import (OrphanFactRow, RoleConflict, UnknownCube,
                      UnknownHierarchy, UnknownLevel, UnknownMember,
                      UnknownRole)
from ..schema import Aggregator, SchemaCatalog, ci
from ..values import ValueKind, from_scaled
from ..warehouse import Warehouse
from .fold import fold_groups
from .members import Member, MemberTree, build_tree


class _EmptyType:
    """Singleton marker for a cell with no contributing facts."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Empty"

    def __bool__(self) -> bool:
        return False


EMPTY = _EmptyType()


class CellValue:
    """Per-measure values of one cell (a value or EMPTY per measure)."""

    __slots__ = ("values",)

    def __init__(self, values: dict):
        self.values = values

    def __getitem__(self, measure: str):
        return self.values[measure]

    def __eq__(self, other):
        return isinstance(other, CellValue) and self.values == other.values

    def __repr__(self) -> str:
        return f"CellValue({self.values!r})"


class _AggResult:
    """Cached fold output for one (group-by, filter) signature."""

    __slots__ = ("codes", "sums", "counts", "mins", "maxs", "_index")

    def __init__(self, codes, sums, counts, mins, maxs):
        self.codes = codes
        self.sums = sums
        self.counts = counts
        self.mins = mins
        self.maxs = maxs
        self._index = None

    @property
    def index(self) -> dict:
        if self._index is None:
            self._index = {tuple(map(int, row)): i
                           for i, row in enumerate(self.codes)}
        return self._index


class Cube:
    """Immutable once built; any number of readers may share it."""

    def __init__(self, name, cube_def, fact_def, catalog, roles, measures,
                 trees, registry, base_coords, base_sums, base_counts,
                 base_mins, base_maxs, fact_rows, build_stamp, stats):
        self.name = name
        self.cube_def = cube_def
        self.fact_def = fact_def
        self.catalog = catalog
        self.roles = roles                      # ordered role names
        self.measures = measures                # ordered MeasureDefs
        self.trees = trees                      # (ci(role), ci(hier)) -> tree
        self._registry = registry               # member id -> Member
        self.base_coords = base_coords
        self.base_sums = base_sums
        self.base_counts = base_counts
        self.base_mins = base_mins
        self.base_maxs = base_maxs
        self.fact_rows = fact_rows
        self.build_stamp = build_stamp
        self.stats = stats
        self._role_index = {ci(r): i for i, r in enumerate(roles)}
        self._measure_index = {ci(m.name): i for i, m in enumerate(measures)}
        self._cache: dict = {}
        self._cache_lock = threading.Lock()

    # --- metadata access ---

    def member(self, member_id: int) -> Member:
        if not 0 <= member_id < len(self._registry):
            raise UnknownMember(f"no member with id {member_id}")
        return self._registry[member_id]

    def measure(self, name: str):
        idx = self._measure_index.get(ci(name))
        if idx is None:
            raise UnknownMember(f"cube {self.name} has no measure {name!r}")
        return self.measures[idx]

    def role_trees(self, role: str) -> list[MemberTree]:
        key = ci(role)
        if key not in self._role_index:
            raise UnknownRole(f"cube {self.name} has no role {role!r}")
        return [t for (r, _h), t in self.trees.items() if r == key]

    def tree(self, role: str, hierarchy: str | None = None) -> MemberTree:
        key = ci(role)
        if key not in self._role_index:
            raise UnknownRole(f"cube {self.name} has no role {role!r}")
        if hierarchy is None:
            candidates = self.role_trees(role)
            if len(candidates) == 1:
                return candidates[0]
            raise UnknownHierarchy(
                f"role {role!r} has {len(candidates)} hierarchies; "
                f"name one explicitly")
        tree = self.trees.get((key, ci(hierarchy)))
        if tree is None:
            raise UnknownHierarchy(f"role {role!r} has no hierarchy "
                                   f"{hierarchy!r}")
        return tree

    def children(self, member) -> list[Member]:
        member = member if isinstance(member, Member) else self.member(member)
        tree = self.tree(member.role, member.hierarchy)
        return tree.children(member.id)

    def level_members(self, role: str, hierarchy: str, level) -> list[Member]:
        tree = self.tree(role, hierarchy)
        level_index = self._resolve_level(tree, level)
        return tree.level_members(level_index)

    def _resolve_level(self, tree: MemberTree, level) -> int:
        if isinstance(level, int):
            if not 0 <= level < tree.depth():
                raise UnknownLevel(f"{tree.role}.{tree.hierarchy.name} has no "
                                   f"level index {level}")
            return level
        index = tree.level_index_of(str(level))
        if index is None:
            raise UnknownLevel(f"{tree.role}.{tree.hierarchy.name} has no "
                               f"level {level!r}")
        return index

    # --- aggregation ---

    def _member_level_codes(self, tree: MemberTree, level_index: int) -> np.ndarray:
        role_idx = self._role_index[ci(tree.role)]
        return tree.sk_maps[level_index][self.base_coords[:, role_idx]]

    def aggregate(self, group_by, filter=(), measures=None) -> dict:
        """Aggregate base cells.

        group_by: [(role, hierarchy, level)] — the grouped levels, in
        coordinate order. filter: members (ids or Member) that each kept
        fact must descend from. Returns {coordinate tuple -> CellValue};
        only non-empty coordinates appear, except the empty group-by whose
        single () coordinate is always present (Empty when nothing matched).
        """
        resolved_groups = []
        for role, hierarchy, level in group_by:
            tree = self.tree(role, hierarchy)
            resolved_groups.append((tree, self._resolve_level(tree, level)))
        filter_members = [m if isinstance(m, Member) else self.member(m)
                          for m in filter]
        if measures is None:
            measure_defs = list(self.measures)
        else:
            measure_defs = [self.measure(name) for name in measures]

        used: dict = {}
        for tree, _lvl in resolved_groups:
            used.setdefault(ci(tree.role), set()).add(ci(tree.hierarchy.name))
        for member in filter_members:
            used.setdefault(ci(member.role), set()).add(ci(member.hierarchy))
        for role, hierarchies in used.items():
            if len(hierarchies) > 1:
                raise RoleConflict(
                    f"role {role!r} grouped/filtered through more than one "
                    f"hierarchy: {sorted(hierarchies)}")

        signature = (
            tuple((ci(t.role), ci(t.hierarchy.name), lvl)
                  for t, lvl in resolved_groups),
            tuple(sorted(m.id for m in filter_members)),
        )
        result = self._cache.get(signature)
        if result is None:
            result = self._compute(resolved_groups, filter_members)
            with self._cache_lock:
                self._cache.setdefault(signature, result)
                result = self._cache[signature]

        out = {}
        for i, coord in enumerate(result.codes):
            out[tuple(map(int, coord))] = self._cell(result, i, measure_defs)
        if not resolved_groups and not out:
            out[()] = CellValue({m.name: EMPTY for m in measure_defs})
        return out

    def _compute(self, resolved_groups, filter_members) -> _AggResult:
        mask = None
        for member in filter_members:
            tree = self.tree(member.role, member.hierarchy)
            column = self._member_level_codes(tree, member.level_index)
            keep = column == member.id
            mask = keep if mask is None else (mask & keep)
        if resolved_groups:
            cols = [self._member_level_codes(tree, lvl)
                    for tree, lvl in resolved_groups]
            codes = np.column_stack(cols)
        else:
            codes = np.empty((self.base_coords.shape[0], 0), dtype=np.int64)
        addv = np.column_stack([self.base_sums, self.base_counts])
        gcodes, gadd, gmin, gmax = fold_groups(
            codes, addv, self.base_mins, self.base_maxs, mask=mask)
        counts = gadd[:, -1] if gadd.shape[0] else np.empty(0, dtype=np.int64)
        sums = gadd[:, :-1] if gadd.shape[0] else gadd
        keep = counts > 0
        if not bool(keep.all()):
            gcodes, sums, counts = gcodes[keep], sums[keep], counts[keep]
            gmin, gmax = gmin[keep], gmax[keep]
        return _AggResult(gcodes, sums, counts, gmin, gmax)

    def _cell(self, result: _AggResult, row: int, measure_defs) -> CellValue:
        count = int(result.counts[row])
        values = {}
        for m in measure_defs:
            idx = self._measure_index[ci(m.name)]
            if count == 0:
                values[m.name] = EMPTY
                continue
            agg = m.aggregator
            if agg is Aggregator.SUM:
                values[m.name] = from_scaled(int(result.sums[row, idx]), m.kind)
            elif agg is Aggregator.COUNT:
                values[m.name] = count
            elif agg is Aggregator.MIN:
                values[m.name] = from_scaled(int(result.mins[row, idx]), m.kind)
            elif agg is Aggregator.MAX:
                values[m.name] = from_scaled(int(result.maxs[row, idx]), m.kind)
            else:  # AVG = SUM / COUNT, derived at evaluation time
                raw = float(result.sums[row, idx]) / count
                if m.kind is ValueKind.DECIMAL:
                    raw /= 10_000.0
                values[m.name] = raw
        return CellValue(values)

    def clear_cache(self) -> None:
        with self._cache_lock:
            self._cache.clear()

    def cache_size(self) -> int:
        return len(self._cache)


def build_cube(catalog: SchemaCatalog, warehouse: Warehouse,
               cube_name: str) -> Cube:
    """Construct member trees and base cells from the committed warehouse."""
    started = time.perf_counter()
    cube_def = catalog.cube(cube_name)
    if cube_def is None:
        raise UnknownCube(f"catalog has no cube {cube_name!r}")
    fact_def = catalog.fact(cube_def.fact)
    fact_table = warehouse.fact_table(fact_def.name)
    roles = list(cube_def.included_roles)
    measures = [fact_def.measure(m) for m in cube_def.included_measures]

    fact_n = len(fact_table)
    role_columns = {}
    for role_name in roles:
        role = fact_def.role(role_name)
        column = fact_table.fk_column(role.role)
        dim_table = warehouse.dimension_table(role.dimension)
        max_sk = dim_table.max_surrogate_key
        if fact_n:
            if int(column.max()) > max_sk or int(column.min()) < 0:
                raise OrphanFactRow(
                    f"fact {fact_def.name} role {role.role}: surrogate key "
                    f"outside {role.dimension}")
            valid = np.zeros(max_sk + 1, dtype=bool)
            valid[0] = True
            for row in dim_table.rows:
                valid[row.surrogate_key] = True
            if not bool(valid[column].all()):
                raise OrphanFactRow(
                    f"fact {fact_def.name} role {role.role}: dangling "
                    f"surrogate key in {role.dimension}")
        role_columns[role_name] = column

    registry: list[Member] = []
    trees = {}
    member_stats = {}
    for role_name in roles:
        role = fact_def.role(role_name)
        dim = catalog.dimension(role.dimension)
        dim_table = warehouse.dimension_table(dim.name)
        column = role_columns[role_name]
        include_unknown = bool(fact_n) and bool((column == 0).any())
        for hierarchy in dim.hierarchies:
            tree = build_tree(role.role, hierarchy, dim, dim_table, registry,
                              include_unknown)
            trees[(ci(role.role), ci(hierarchy.name))] = tree
            member_stats[f"{role.role}.{hierarchy.name}"] = {
                name: len(tree.level_ids[i])
                for i, name in enumerate(tree.level_names)}

    if fact_n:
        codes = np.column_stack([role_columns[r] for r in roles])
        value_cols = [fact_table.measure_column(m.name) for m in measures]
        ones = np.ones(fact_n, dtype=np.int64)
        addv = np.column_stack(value_cols + [ones])
        mm = np.column_stack(value_cols) if value_cols \
            else np.empty((fact_n, 0), dtype=np.int64)
        gcodes, gadd, gmin, gmax = fold_groups(codes, addv, mm, mm)
        base_coords = gcodes
        base_sums = gadd[:, :-1]
        base_counts = gadd[:, -1]
        base_mins, base_maxs = gmin, gmax
    else:
        base_coords = np.empty((0, len(roles)), dtype=np.int64)
        base_sums = np.empty((0, len(measures)), dtype=np.int64)
        base_counts = np.empty(0, dtype=np.int64)
        base_mins = np.empty((0, len(measures)), dtype=np.int64)
        base_maxs = np.empty((0, len(measures)), dtype=np.int64)

    stats = {
        "fact_rows": fact_n,
        "base_cells": int(base_coords.shape[0]),
        "members": member_stats,
        "build_ms": int((time.perf_counter() - started) * 1000),
        "warehouse_version": warehouse.version,
    }
    return Cube(name=cube_def.name, cube_def=cube_def, fact_def=fact_def,
                catalog=catalog, roles=roles, measures=measures, trees=trees,
                registry=registry, base_coords=base_coords,
                base_sums=base_sums, base_counts=base_counts,
                base_mins=base_mins, base_maxs=base_maxs, fact_rows=fact_n,
                build_stamp=warehouse.version, stats=stats)


def invalidate(cube: Cube | None, catalog: SchemaCatalog,
               warehouse: Warehouse, cube_name: str | None = None) -> Cube:
    """Return the cube unchanged when its build stamp matches the
    warehouse version; otherwise build a fresh one."""
    if cube is not None and cube.build_stamp == warehouse.version:
        return cube
    return build_cube(catalog, warehouse,
                      cube_name or (cube.name if cube else None))


class CubeManager:
    """Publishes cubes with atomic swap semantics: readers get either the
    wholly old or wholly new cube, never a partial one."""

    def __init__(self, catalog: SchemaCatalog, warehouse: Warehouse,
                 cube_name: str):
        self.catalog = catalog
        self.warehouse = warehouse
        self.cube_name = cube_name
        self._cube: Cube | None = None
        self._lock = threading.Lock()

    def current(self) -> Cube | None:
        return self._cube

    def get(self) -> Cube:
        cube = self._cube
        if cube is not None and cube.build_stamp == self.warehouse.version:
            return cube
        with self._lock:
            if self._cube is None \
                    or self._cube.build_stamp != self.warehouse.version:
                fresh = build_cube(self.catalog, self.warehouse, self.cube_name)
                self._cube = fresh   # atomic reference swap
            return self._cube

    def replace_warehouse(self, warehouse: Warehouse) -> None:
        with self._lock:
            self.warehouse = warehouse
