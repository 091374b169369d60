import { describe, expect, it } from "vitest";

import { CellSetWire } from "../src/types.js";
import { buildChart, buildGrid } from "../src/views.js";
import { barChart, pieChart, renderChart } from "../src/charts.js";

const TWO_BY_TWO: CellSetWire = {
  axes: [
    { positions: [[{ caption: "Cost", unique_name: "[Measures].[Cost]" }],
                  [{ caption: "Quantity",
                     unique_name: "[Measures].[Quantity]" }]] },
    { positions: [[{ caption: "Female",
                     unique_name: "[PaID].[Gender].[All].[Female]" }],
                  [{ caption: "Male",
                     unique_name: "[PaID].[Gender].[All].[Male]" }]] },
  ],
  cells: [{ Cost: 10.5 }, { Quantity: 2 }, { Cost: null }, { Quantity: 7 }],
  measures: ["Cost", "Quantity"],
};

describe("grid view-model", () => {
  it("passes cellset values through verbatim", () => {
    const grid = buildGrid(TWO_BY_TWO);
    expect(grid.columnHeaders).toEqual(["Cost", "Quantity"]);
    expect(grid.rowHeaders).toEqual(["Female", "Male"]);
    expect(grid.values).toEqual([[10.5, 2], [null, 7]]);
  });

  it("renders Empty as blank text", () => {
    const grid = buildGrid(TWO_BY_TWO);
    expect(grid.text[1]![0]).toBe("");
    expect(grid.text[0]![0]).toBe("10.5");
  });

  it("single-axis cellsets render one implicit row", () => {
    const grid = buildGrid({
      axes: [{ positions: [[{ caption: "Cost",
                              unique_name: "[Measures].[Cost]" }]] }],
      cells: [{ Cost: 42 }],
      measures: ["Cost"],
    });
    expect(grid.rowHeaders).toEqual([""]);
    expect(grid.values).toEqual([[42]]);
  });
});

describe("chart view-model", () => {
  it("axis 0 becomes series, axis 1 categories", () => {
    const model = buildChart(TWO_BY_TWO);
    expect(model.series.map((s) => s.name)).toEqual(["Cost", "Quantity"]);
    expect(model.categories).toEqual(["Female", "Male"]);
    expect(model.series[0]!.values).toEqual([10.5, null]);
  });

  it("pie requires a single series (1xN cellset)", () => {
    expect(buildChart(TWO_BY_TWO).pieCapable).toBe(false);
    const oneSeries = buildChart({
      axes: [
        { positions: [[{ caption: "Cost",
                         unique_name: "[Measures].[Cost]" }]] },
        TWO_BY_TWO.axes[1]!,
      ],
      cells: [{ Cost: 3 }, { Cost: 9 }],
      measures: ["Cost"],
    });
    expect(oneSeries.pieCapable).toBe(true);
    const svg = pieChart(oneSeries);
    expect(svg).toContain("<svg");
    expect(svg).toContain("Female");
  });

  it("bar chart draws one rect per non-empty cell", () => {
    const svg = barChart(buildChart(TWO_BY_TWO));
    expect((svg.match(/<rect /g) ?? []).length)
      .toBe(3 + 2); // 3 data cells + 2 legend swatches
  });

  it("renderChart dispatches every kind", () => {
    const model = buildChart(TWO_BY_TWO);
    for (const kind of ["bar", "pie", "line", "area"]) {
      expect(renderChart(kind, model)).toContain("<svg");
    }
    expect(renderChart("table", model)).toBe("");
  });
});
