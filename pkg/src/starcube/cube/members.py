"""Hierarchy member trees built from dimension tables.

Each (role, hierarchy) pair gets its own tree: an implicit All root at
level 0, one member per distinct attribute-value path at the declared
levels, and (when facts reference surrogate key 0) an Unknown chain. The
finest grain is the surrogate key itself, so SCD2 history aggregates under
the attribute values in force when each fact loaded.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..schema import ALL_KEY, ALL_LEVEL, DimensionDef, HierarchyDef, ci
from ..values import format_value, sort_key
from ..warehouse import UNKNOWN_KEY, DimensionTable


@dataclass
class Member:
    id: int
    role: str
    hierarchy: str
    level_index: int            # 0 = (All)
    key: object
    caption: str
    parent_id: int | None
    ordinal: int


class MemberTree:
    """All members of one (role, hierarchy), with surrogate-key maps."""

    def __init__(self, role: str, hierarchy: HierarchyDef, registry: list):
        self.role = role
        self.hierarchy = hierarchy
        self.level_names = hierarchy.level_names()
        self._registry = registry
        self.level_ids: list[list[int]] = [[] for _ in self.level_names]
        self.children_ids: dict = {}
        self.sk_maps: list[np.ndarray] = []
        self.all_id = self._add(0, ALL_KEY, ALL_KEY, None, 0)

    def _add(self, level_index: int, key, caption: str,
             parent_id: int | None, ordinal: int) -> int:
        member_id = len(self._registry)
        member = Member(member_id, self.role, self.hierarchy.name,
                        level_index, key, caption, parent_id, ordinal)
        self._registry.append(member)
        self.level_ids[level_index].append(member_id)
        self.children_ids[member_id] = []
        if parent_id is not None:
            self.children_ids[parent_id].append(member_id)
        return member_id

    def member(self, member_id: int) -> Member:
        return self._registry[member_id]

    def children(self, member_id: int) -> list[Member]:
        return [self._registry[i] for i in self.children_ids[member_id]]

    def level_index_of(self, name: str) -> int | None:
        wanted = ci(name)
        for i, level_name in enumerate(self.level_names):
            if ci(level_name) == wanted:
                return i
        if wanted in (ci(ALL_LEVEL), ci(ALL_KEY)):
            return 0
        return None

    def level_members(self, level_index: int) -> list[Member]:
        return [self._registry[i] for i in self.level_ids[level_index]]

    def depth(self) -> int:
        return len(self.level_names)

    def find_children(self, parent_id: int, segment: str) -> list[Member]:
        """Children whose key renders as ``segment`` (case-insensitive);
        falls back to caption matches."""
        wanted = segment.casefold()
        children = self.children(parent_id)
        by_key = [m for m in children if str(m.key).casefold() == wanted]
        if by_key:
            return by_key
        return [m for m in children if m.caption.casefold() == wanted]

    def unique_name(self, member_id: int) -> str:
        parts = []
        current = self._registry[member_id]
        while current is not None:
            parts.append(str(current.key))
            current = (self._registry[current.parent_id]
                       if current.parent_id is not None else None)
        parts.reverse()
        segments = "".join(f".[{p}]" for p in parts)
        return f"[{self.role}].[{self.hierarchy.name}]{segments}"


def build_tree(role: str, hierarchy: HierarchyDef, dim: DimensionDef,
               table: DimensionTable, registry: list,
               include_unknown: bool) -> MemberTree:
    """Materialize the member tree and surrogate-key level maps from every
    stored dimension row (historical versions included)."""
    tree = MemberTree(role, hierarchy, registry)
    attrs = [level.source_attribute for level in hierarchy.levels]
    depth = len(attrs)

    paths = {tuple(row.attributes.get(a) for a in attrs) for row in table.rows}
    if include_unknown:
        # The Unknown dimension row becomes an Unknown chain down to the
        # finest level (key None renders as caption "Unknown").
        paths.add((None,) * depth)

    # Members level by level, siblings sorted by key (None last).
    node_ids: dict = {(): tree.all_id}
    for level in range(1, depth + 1):
        prefixes: dict = {}
        for path in paths:
            prefix = path[:level]
            prefixes.setdefault(prefix[:-1], set()).add(prefix[-1])
        for parent_prefix in sorted(prefixes,
                                    key=lambda p: tuple(map(sort_key, p))):
            parent_id = node_ids[parent_prefix]
            for ordinal, key in enumerate(sorted(prefixes[parent_prefix],
                                                 key=sort_key)):
                caption = format_value(key) if key is not None else "Unknown"
                node_ids[parent_prefix + (key,)] = tree._add(
                    level, key, caption, parent_id, ordinal)

    # surrogate key -> member id, per level
    size = table.max_surrogate_key + 1
    maps = [np.full(size, -1, dtype=np.int64) for _ in range(depth + 1)]
    maps[0][:] = tree.all_id
    for row in table.rows:
        path = tuple(row.attributes.get(a) for a in attrs)
        for level in range(1, depth + 1):
            maps[level][row.surrogate_key] = node_ids[path[:level]]
    if include_unknown:
        unknown_path = (None,) * depth
        for level in range(1, depth + 1):
            maps[level][UNKNOWN_KEY] = node_ids[unknown_path[:level]]
    tree.sk_maps = maps
    return tree
