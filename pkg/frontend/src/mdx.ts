/** Compiles pivot gestures into query text.
 *
 * Unexpanded hierarchies contribute their Members; each drilled-open
 * member contributes its Children (asymmetric drill, so mixed
 * granularities coexist on one axis). Slicers become the WHERE tuple.
 * NON EMPTY applies to every axis that carries hierarchy members.
 */

import { PATH_SEP, PivotState, ZoneEntry } from "./state.js";

function bracket(segment: string): string {
  return "[" + segment.replace(/\]/g, "]]") + "]";
}

function memberPath(entry: { role: string; hierarchy: string }, path: string[]): string {
  return [bracket(entry.role), bracket(entry.hierarchy), ...path.map(bracket)].join(".");
}

function zoneEntrySet(entry: ZoneEntry): string {
  const prefix = `${bracket(entry.role)}.${bracket(entry.hierarchy)}`;
  const elements = [`${prefix}.Members`];
  for (const expanded of [...entry.expanded].sort()) {
    const segments = expanded.split(PATH_SEP).map(bracket).join(".");
    elements.push(`${prefix}.${segments}.Children`);
  }
  return elements.length === 1 && elements[0] !== undefined
    ? elements[0]
    : `{${elements.join(", ")}}`;
}

function crossjoinAll(sets: string[]): string {
  const first = sets[0];
  if (first === undefined) throw new Error("empty set list");
  return sets.slice(1).reduce((acc, s) => `CROSSJOIN(${acc}, ${s})`, first);
}

export function generateMdx(state: PivotState): string {
  const measures = state.measures.length > 0 ? state.measures : [];
  const measureSet =
    "{" + measures.map((m) => `[Measures].${bracket(m)}`).join(", ") + "}";

  const columnSets = state.columns.map(zoneEntrySet);
  let columnsAxis: string;
  if (columnSets.length === 0) {
    if (measures.length === 0) {
      // unreachable through the UI (at least one measure stays selected)
      throw new Error("pivot state needs a measure or a column hierarchy");
    }
    columnsAxis = measureSet;
  } else if (measures.length === 0) {
    columnsAxis = crossjoinAll(columnSets);
  } else {
    columnsAxis = crossjoinAll([...columnSets, measureSet]);
  }
  const columnsNonEmpty = state.columns.length > 0 ? "NON EMPTY " : "";
  let text = `SELECT ${columnsNonEmpty}${columnsAxis} ON COLUMNS`;

  if (state.rows.length > 0) {
    const rowsAxis = crossjoinAll(state.rows.map(zoneEntrySet));
    text += `, NON EMPTY ${rowsAxis} ON ROWS`;
  }

  text += ` FROM ${bracket(state.cube)}`;

  if (state.slicers.length > 0) {
    const parts = state.slicers.map((s) => memberPath(s, s.path));
    text +=
      parts.length === 1 ? ` WHERE ${parts[0]}` : ` WHERE (${parts.join(", ")})`;
  }
  return text;
}
