/** Pivot state: what the analyst has dragged where, which members are
 * drilled open, and which slicers are pinned.
 *
 * Invariants enforced here: a hierarchy sits in at most one zone, and no
 * two hierarchies of one role are active at once (the engine evaluates a
 * role through a single hierarchy per query). State round-trips through
 * the URL fragment for shareable views.
 */

export type ChartKind = "table" | "bar" | "pie" | "line" | "area";

export interface HierarchyRef {
  role: string;
  hierarchy: string;
}

export interface ZoneEntry extends HierarchyRef {
  /** member key paths drilled open, e.g. ["2010", "2010|2010-Q1"] */
  expanded: string[];
}

export interface SlicerEntry extends HierarchyRef {
  /** key path of the pinned member */
  path: string[];
}

export interface PivotState {
  cube: string;
  rows: ZoneEntry[];
  columns: ZoneEntry[];
  slicers: SlicerEntry[];
  measures: string[];
  chart: ChartKind;
}

export const PATH_SEP = "|";

export function emptyState(cube: string, measures: string[]): PivotState {
  return { cube, rows: [], columns: [], slicers: [], measures, chart: "table" };
}

function sameRef(a: HierarchyRef, b: HierarchyRef): boolean {
  return a.role === b.role && a.hierarchy === b.hierarchy;
}

export function activeRefs(state: PivotState): HierarchyRef[] {
  return [...state.rows, ...state.columns, ...state.slicers];
}

export function canPlace(state: PivotState, ref: HierarchyRef): boolean {
  return activeRefs(state).every(
    (r) => !sameRef(r, ref) && r.role !== ref.role,
  );
}

export function addToZone(
  state: PivotState,
  zone: "rows" | "columns",
  ref: HierarchyRef,
): boolean {
  if (!canPlace(state, ref)) return false;
  state[zone].push({ ...ref, expanded: [] });
  return true;
}

export function addSlicer(
  state: PivotState,
  ref: HierarchyRef,
  path: string[],
): boolean {
  if (!canPlace(state, ref)) return false;
  state.slicers.push({ ...ref, path: [...path] });
  return true;
}

export function removeRef(state: PivotState, ref: HierarchyRef): void {
  state.rows = state.rows.filter((e) => !sameRef(e, ref));
  state.columns = state.columns.filter((e) => !sameRef(e, ref));
  state.slicers = state.slicers.filter((e) => !sameRef(e, ref));
}

export function toggleExpansion(entry: ZoneEntry, path: string): void {
  const index = entry.expanded.indexOf(path);
  if (index >= 0) {
    // collapsing also closes everything drilled open beneath
    entry.expanded = entry.expanded.filter(
      (p) => p !== path && !p.startsWith(path + PATH_SEP),
    );
  } else {
    entry.expanded.push(path);
  }
}

/** Canonical form: stable key order, expansion lists sorted. */
function canonical(state: PivotState): PivotState {
  const zone = (entries: ZoneEntry[]): ZoneEntry[] =>
    entries.map((e) => ({
      role: e.role,
      hierarchy: e.hierarchy,
      expanded: [...e.expanded].sort(),
    }));
  return {
    cube: state.cube,
    rows: zone(state.rows),
    columns: zone(state.columns),
    slicers: state.slicers.map((s) => ({
      role: s.role,
      hierarchy: s.hierarchy,
      path: [...s.path],
    })),
    measures: [...state.measures],
    chart: state.chart,
  };
}

export function serializeState(state: PivotState): string {
  return "#pivot=" + encodeURIComponent(JSON.stringify(canonical(state)));
}

export function restoreState(fragment: string): PivotState | null {
  const match = /^#pivot=(.+)$/.exec(fragment);
  if (!match || match[1] === undefined) return null;
  try {
    const parsed = JSON.parse(decodeURIComponent(match[1]));
    if (typeof parsed !== "object" || parsed === null) return null;
    const candidate = parsed as PivotState;
    if (typeof candidate.cube !== "string") return null;
    return canonical(candidate);
  } catch {
    return null;
  }
}
