/** Pure view-models from a cellset: the grid and the chart series.
 *
 * Values pass through verbatim; nothing is re-aggregated client-side.
 * Empty cells stay null and render blank.
 */

import { CellSetWire, PositionLabel } from "./types.js";

export interface GridModel {
  columnHeaders: string[];
  rowHeaders: string[];
  /** raw cell values, row-major; null = Empty */
  values: (number | null)[][];
  /** display text per cell ("" for Empty) */
  text: string[][];
}

export interface ChartSeries {
  name: string;
  values: (number | null)[];
}

export interface ChartModel {
  categories: string[];
  series: ChartSeries[];
  pieCapable: boolean;
}

function label(position: PositionLabel[]): string {
  return position.map((p) => p.caption).join(" / ");
}

function cellValue(cell: Record<string, number | null>): number | null {
  for (const key of Object.keys(cell)) {
    const value = cell[key];
    if (value !== undefined) return value;
  }
  return null;
}

export function buildGrid(cellset: CellSetWire): GridModel {
  const columnAxis = cellset.axes[0]?.positions ?? [];
  const rowAxis = cellset.axes.length > 1 ? cellset.axes[1]!.positions : null;
  const columnHeaders = columnAxis.map(label);
  const rowHeaders = rowAxis === null ? [""] : rowAxis.map(label);
  const ncols = columnHeaders.length;
  const values: (number | null)[][] = [];
  for (let r = 0; r < rowHeaders.length; r += 1) {
    const line: (number | null)[] = [];
    for (let c = 0; c < ncols; c += 1) {
      const cell = cellset.cells[r * ncols + c];
      line.push(cell === undefined ? null : cellValue(cell));
    }
    values.push(line);
  }
  const text = values.map((line) =>
    line.map((v) => (v === null ? "" : String(v))),
  );
  return { columnHeaders, rowHeaders, values, text };
}

/** Axis 0 positions become the series, axis 1 positions the categories. */
export function buildChart(cellset: CellSetWire): ChartModel {
  const grid = buildGrid(cellset);
  const series = grid.columnHeaders.map((name, c) => ({
    name,
    values: grid.values.map((line) => line[c] ?? null),
  }));
  return {
    categories: grid.rowHeaders,
    series,
    pieCapable: series.length === 1,
  };
}
