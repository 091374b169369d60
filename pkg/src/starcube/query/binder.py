"""Binds a parsed query to cube metadata.

Path resolution: the first bracket segment names a role (or the literal
``Measures``); an optional next segment names a hierarchy (implied when
the role has exactly one); remaining segments descend member keys from the
All root, matching keys first and captions second. Unreferenced
hierarchies default to their All member. Every referenced member must
resolve: misspellings raise, never default silently.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..cube.core import Cube
from ..cube.members import MemberTree
from ..errors import (AmbiguousPath, HierarchyReusedAcrossAxes,
                      NonUniformSet, RoleConflict, UnknownCube,
                      UnknownHierarchy, UnknownLevel, UnknownMember,
                      UnknownRole)
from ..schema import ci
from .parser import (AxisSpec, ChildrenExpr, CrossJoin, ExplicitSet,
                     MemberPath, MembersExpr, QueryAst, TupleExpr)

_MEASURES = "measures"


@dataclass(frozen=True)
class MemberComponent:
    member_id: int
    role: str
    hierarchy: str
    level_index: int

    @property
    def slot(self) -> tuple:
        return (ci(self.role), ci(self.hierarchy))


@dataclass(frozen=True)
class MeasureComponent:
    name: str

    @property
    def slot(self) -> str:
        return _MEASURES


@dataclass
class BoundAxis:
    name: str
    non_empty: bool
    positions: list          # list of component tuples


@dataclass
class BoundQuery:
    cube_name: str
    axes: list
    slicer: list             # MemberComponents
    slicer_measure: str | None
    measures: list           # every measure a cell may carry
    build_stamp: int = field(default=0)


class _Binder:
    def __init__(self, cube: Cube):
        self.cube = cube

    # --- paths ---

    def _resolve_role(self, head: str) -> str:
        """A leading segment names a role, or a dimension playing exactly
        one role in the cube."""
        roles = {ci(r): r for r in self.cube.roles}
        if ci(head) in roles:
            return roles[ci(head)]
        matching = [r.role for r in self.cube.fact_def.roles
                    if ci(r.dimension) == ci(head) and ci(r.role) in roles]
        if len(matching) == 1:
            return matching[0]
        if len(matching) > 1:
            raise AmbiguousPath(
                f"dimension {head!r} plays roles {sorted(matching)}; "
                f"name the role explicitly")
        raise UnknownRole(f"no role, dimension, or Measures named {head!r} "
                          f"in cube {self.cube.name}")

    def _base(self, path: MemberPath):
        """Resolve the role/hierarchy prefix; returns (tree, rest) or
        ("measures", rest)."""
        head = path.segments[0]
        if ci(head) == _MEASURES:
            return _MEASURES, path.segments[1:]
        head = self._resolve_role(head)
        rest = path.segments[1:]
        trees = self.cube.role_trees(head)
        if rest:
            for tree in trees:
                if ci(tree.hierarchy.name) == ci(rest[0]):
                    return tree, rest[1:]
        if len(trees) == 1:
            return trees[0], rest
        raise UnknownHierarchy(
            f"role {head!r} has {len(trees)} hierarchies; the path must "
            f"name one of {sorted(t.hierarchy.name for t in trees)}")

    def _descend(self, tree: MemberTree, segments) -> int:
        member_id = tree.all_id
        for segment in segments:
            matches = tree.find_children(member_id, segment)
            if not matches:
                raise UnknownMember(
                    f"no member {segment!r} under "
                    f"{tree.unique_name(member_id)}")
            if len(matches) > 1:
                raise AmbiguousPath(
                    f"{segment!r} matches {len(matches)} members under "
                    f"{tree.unique_name(member_id)}")
            member_id = matches[0].id
        return member_id

    def _measure_component(self, rest) -> MeasureComponent:
        if len(rest) != 1:
            raise UnknownMember(
                f"a measure path is [Measures].[name], got "
                f"{len(rest) + 1} segments")
        return MeasureComponent(self.cube.measure(rest[0]).name)

    def _member_component(self, tree: MemberTree, member_id: int) -> MemberComponent:
        member = tree.member(member_id)
        return MemberComponent(member_id, tree.role, tree.hierarchy.name,
                               member.level_index)

    def bind_tuple(self, expr: TupleExpr) -> tuple:
        components = []
        for path in expr.paths:
            base, rest = self._base(path)
            if base is _MEASURES:
                components.append(self._measure_component(rest))
            else:
                member_id = self._descend(base, rest)
                components.append(self._member_component(base, member_id))
        slots = [c.slot for c in components]
        if len(set(slots)) != len(slots):
            raise HierarchyReusedAcrossAxes(
                "a hierarchy appears twice in one tuple")
        return tuple(components)

    # --- sets ---

    def bind_set(self, expr) -> list:
        if isinstance(expr, TupleExpr):
            return [self.bind_tuple(expr)]
        if isinstance(expr, ExplicitSet):
            positions = []
            for element in expr.elements:
                positions.extend(self.bind_set(element))
            self._check_uniform(positions)
            return positions
        if isinstance(expr, MembersExpr):
            return self._bind_members(expr.path)
        if isinstance(expr, ChildrenExpr):
            return self._bind_children(expr.path)
        if isinstance(expr, CrossJoin):
            left = self.bind_set(expr.left)
            right = self.bind_set(expr.right)
            positions = []
            for l in left:                       # left-major order
                for r in right:
                    combined = l + r
                    slots = [c.slot for c in combined]
                    if len(set(slots)) != len(slots):
                        raise HierarchyReusedAcrossAxes(
                            "CROSSJOIN repeats a hierarchy across its sides")
                    positions.append(combined)
            return positions
        raise TypeError(f"not a set expression: {expr!r}")

    def _bind_members(self, path: MemberPath) -> list:
        base, rest = self._base(path)
        if base is _MEASURES:
            raise UnknownHierarchy("[Measures] has no member levels")
        if not rest:
            level_index = 1 if base.depth() > 1 else base.depth() - 1
        elif len(rest) == 1:
            level_index = base.level_index_of(rest[0])
            if level_index is None:
                raise UnknownLevel(
                    f"{base.role}.{base.hierarchy.name} has no level "
                    f"{rest[0]!r}")
        else:
            raise UnknownLevel(
                f"MEMBERS expects a hierarchy or level path, got "
                f"{'.'.join(path.segments)!r}")
        return [(self._member_component(base, m.id),)
                for m in base.level_members(level_index)]

    def _bind_children(self, path: MemberPath) -> list:
        base, rest = self._base(path)
        if base is _MEASURES:
            raise UnknownHierarchy("[Measures] has no member tree")
        member_id = self._descend(base, rest)
        return [(self._member_component(base, child.id),)
                for child in base.children(member_id)]

    @staticmethod
    def _check_uniform(positions) -> None:
        if not positions:
            return
        first = tuple(c.slot for c in positions[0])
        for position in positions[1:]:
            if tuple(c.slot for c in position) != first:
                raise NonUniformSet(
                    "set tuples must share one hierarchy signature in one "
                    "order")


def bind(ast: QueryAst, cube: Cube, catalog=None) -> BoundQuery:
    """Resolve every path of the AST against the cube's member trees."""
    if ci(ast.cube) != ci(cube.name):
        raise UnknownCube(f"query targets cube {ast.cube!r}, bound cube is "
                          f"{cube.name!r}")
    binder = _Binder(cube)

    axes = []
    for spec in ast.axes:
        positions = binder.bind_set(spec.set_expr)
        binder._check_uniform(positions)
        axes.append(BoundAxis(spec.name, spec.non_empty, positions))

    slicer_members: list[MemberComponent] = []
    slicer_measure: str | None = None
    if ast.slicer is not None:
        for component in binder.bind_tuple(ast.slicer):
            if isinstance(component, MeasureComponent):
                if slicer_measure is not None:
                    raise HierarchyReusedAcrossAxes(
                        "the slicer names [Measures] twice")
                slicer_measure = component.name
            else:
                slicer_members.append(component)

    # One hierarchy per (tuple slot, slicer); one hierarchy per role overall.
    zone_slots: list[set] = []
    for axis in axes:
        slots = set()
        for position in axis.positions:
            slots.update(c.slot for c in position)
        zone_slots.append(slots)
    slicer_slots = {c.slot for c in slicer_members}
    if slicer_measure is not None:
        slicer_slots.add(_MEASURES)
    zone_slots.append(slicer_slots)
    seen: set = set()
    for slots in zone_slots:
        overlap = seen & slots
        if overlap:
            raise HierarchyReusedAcrossAxes(
                f"hierarchies used in more than one zone: {sorted(map(str, overlap))}")
        seen |= slots

    role_hierarchies: dict = {}
    for slot in seen:
        if slot == _MEASURES:
            continue
        role, hierarchy = slot
        role_hierarchies.setdefault(role, set()).add(hierarchy)
    for role, hierarchies in role_hierarchies.items():
        if len(hierarchies) > 1:
            raise RoleConflict(
                f"role {role!r} is referenced through more than one "
                f"hierarchy: {sorted(hierarchies)}")

    measures = []
    for axis in axes:
        for position in axis.positions:
            for component in position:
                if isinstance(component, MeasureComponent) \
                        and component.name not in measures:
                    measures.append(component.name)
    if slicer_measure is not None and slicer_measure not in measures:
        measures.append(slicer_measure)
    if not measures:
        measures = [cube.measures[0].name]

    return BoundQuery(cube_name=cube.name, axes=axes, slicer=slicer_members,
                      slicer_measure=slicer_measure, measures=measures,
                      build_stamp=cube.build_stamp)
