/** DOM wiring for the pivot explorer. All state lives client-side in a
 * PivotState mirrored to the URL fragment; the backend stays read-only. */

import { ApiClient, ApiError } from "./api.js";
import { renderChart } from "./charts.js";
import { generateMdx } from "./mdx.js";
import {
  ChartKind,
  HierarchyRef,
  PATH_SEP,
  PivotState,
  ZoneEntry,
  addSlicer,
  addToZone,
  emptyState,
  removeRef,
  restoreState,
  serializeState,
  toggleExpansion,
} from "./state.js";
import { CellSetWire, CubeMetadata } from "./types.js";
import { buildChart, buildGrid } from "./views.js";
import { keyPathOf, parseUniqueName } from "./unique_name.js";

const CHART_KINDS: ChartKind[] = ["table", "bar", "pie", "line", "area"];

export class PivotApp {
  private state!: PivotState;
  private metadata!: CubeMetadata;
  private lastCellset: CellSetWire | null = null;
  private inflight: AbortController | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly root: Document,
  ) {}

  private el<T extends HTMLElement>(id: string): T {
    const found = this.root.getElementById(id);
    if (!found) throw new Error(`missing element #${id}`);
    return found as T;
  }

  async start(): Promise<void> {
    const cubes = await this.api.cubes();
    const first = cubes[0];
    if (!first) {
      this.el("status").textContent = "no cubes published";
      return;
    }
    this.metadata = await this.api.metadata(first.name);
    const restored = restoreState(window.location.hash);
    this.state =
      restored && restored.cube === first.name
        ? restored
        : emptyState(first.name, first.measures.slice(0, 1));
    this.renderControls();
    this.bindStatic();
    await this.refresh();
  }

  private hierarchyRefs(): HierarchyRef[] {
    const refs: HierarchyRef[] = [];
    for (const dim of this.metadata.dimensions) {
      for (const hier of dim.hierarchies) {
        refs.push({ role: dim.role, hierarchy: hier.name });
      }
    }
    return refs;
  }

  private bindStatic(): void {
    this.el<HTMLButtonElement>("csv-download").addEventListener("click",
      () => void this.downloadCsv());
    this.el<HTMLButtonElement>("mdx-run").addEventListener("click",
      () => void this.runAdvanced());
    const chart = this.el<HTMLSelectElement>("chart-kind");
    chart.addEventListener("change", () => {
      this.state.chart = chart.value as ChartKind;
      this.renderResult();
      this.pushFragment();
    });
    window.addEventListener("hashchange", () => {
      const restored = restoreState(window.location.hash);
      if (restored) {
        this.state = restored;
        this.renderControls();
        void this.refresh();
      }
    });
  }

  private renderControls(): void {
    const palette = this.el("palette");
    palette.replaceChildren();
    const used = new Set(
      [...this.state.rows, ...this.state.columns, ...this.state.slicers]
        .map((e) => e.role),
    );
    for (const ref of this.hierarchyRefs()) {
      const chip = this.root.createElement("span");
      chip.className = "chip" + (used.has(ref.role) ? " used" : "");
      chip.textContent = `${ref.role} · ${ref.hierarchy}`;
      chip.draggable = !used.has(ref.role);
      chip.addEventListener("dragstart", (event) => {
        event.dataTransfer?.setData("text/plain", JSON.stringify(ref));
      });
      palette.appendChild(chip);
    }
    this.renderZone("rows");
    this.renderZone("columns");
    this.renderSlicers();
    this.renderMeasures();
    const chart = this.el<HTMLSelectElement>("chart-kind");
    chart.replaceChildren(...CHART_KINDS.map((kind) => {
      const option = this.root.createElement("option");
      option.value = kind;
      option.textContent = kind;
      return option;
    }));
    chart.value = this.state.chart;
  }

  private renderZone(zone: "rows" | "columns"): void {
    const host = this.el(`zone-${zone}`);
    host.replaceChildren();
    for (const entry of this.state[zone]) {
      const chip = this.root.createElement("span");
      chip.className = "chip placed";
      chip.textContent = `${entry.role} · ${entry.hierarchy}`;
      const remove = this.root.createElement("button");
      remove.textContent = "×";
      remove.addEventListener("click", () => {
        removeRef(this.state, entry);
        this.renderControls();
        void this.refresh();
      });
      chip.appendChild(remove);
      host.appendChild(chip);
    }
    host.addEventListener("dragover", (event) => event.preventDefault());
    host.addEventListener("drop", (event) => {
      event.preventDefault();
      const payload = event.dataTransfer?.getData("text/plain");
      if (!payload) return;
      const ref = JSON.parse(payload) as HierarchyRef;
      if (addToZone(this.state, zone, ref)) {
        this.renderControls();
        void this.refresh();
      }
    });
  }

  private renderSlicers(): void {
    const host = this.el("zone-slicers");
    host.replaceChildren();
    for (const slicer of this.state.slicers) {
      const chip = this.root.createElement("span");
      chip.className = "chip placed";
      chip.textContent =
        `${slicer.hierarchy} = ${slicer.path[slicer.path.length - 1] ?? ""}`;
      const remove = this.root.createElement("button");
      remove.textContent = "×";
      remove.addEventListener("click", () => {
        removeRef(this.state, slicer);
        this.renderControls();
        void this.refresh();
      });
      chip.appendChild(remove);
      host.appendChild(chip);
    }
    host.addEventListener("dragover", (event) => event.preventDefault());
    host.addEventListener("drop", (event) => {
      event.preventDefault();
      const payload = event.dataTransfer?.getData("text/plain");
      if (!payload) return;
      void this.pickSlicerMember(JSON.parse(payload) as HierarchyRef);
    });
  }

  private async pickSlicerMember(ref: HierarchyRef): Promise<void> {
    const page = await this.api.members(this.state.cube, ref.role,
      ref.hierarchy);
    const first = page.members[0];
    if (!first) return;
    const captions = page.members.map((m) => m.caption).join(", ");
    const answer = window.prompt(
      `Member of ${ref.hierarchy} (${captions})`, first.caption);
    if (!answer) return;
    const chosen = page.members.find(
      (m) => m.caption.toLowerCase() === answer.toLowerCase());
    if (!chosen) return;
    if (addSlicer(this.state, ref, keyPathOf(chosen.unique_name))) {
      this.renderControls();
      await this.refresh();
    }
  }

  private renderMeasures(): void {
    const host = this.el("measures");
    host.replaceChildren();
    for (const measure of this.metadata.measures) {
      const label = this.root.createElement("label");
      const box = this.root.createElement("input");
      box.type = "checkbox";
      box.checked = this.state.measures.includes(measure.name);
      box.addEventListener("change", () => {
        const selected = this.state.measures.filter(
          (m) => m !== measure.name);
        if (box.checked) selected.push(measure.name);
        if (selected.length === 0) {
          box.checked = true;   // at least one measure stays selected
          return;
        }
        this.state.measures = this.metadata.measures
          .map((m) => m.name).filter((m) => selected.includes(m));
        void this.refresh();
      });
      label.append(box, ` ${measure.name}`);
      host.appendChild(label);
    }
  }

  private pushFragment(): void {
    history.replaceState(null, "", serializeState(this.state));
  }

  async refresh(): Promise<void> {
    this.pushFragment();
    const mdx = generateMdx(this.state);
    this.el<HTMLTextAreaElement>("mdx-box").value = mdx;
    this.inflight?.abort();
    this.inflight = new AbortController();
    this.el("status").textContent = "running…";
    try {
      this.lastCellset = await this.api.query(this.state.cube, mdx);
      this.el("status").textContent = "";
      this.el("query-error").textContent = "";
      this.renderResult();
    } catch (error) {
      this.showError(error, mdx);
    }
  }

  private renderResult(): void {
    if (!this.lastCellset) return;
    const grid = buildGrid(this.lastCellset);
    const table = this.el("grid");
    table.replaceChildren();
    const head = this.root.createElement("tr");
    head.appendChild(this.root.createElement("th"));
    for (const header of grid.columnHeaders) {
      const th = this.root.createElement("th");
      th.textContent = header;
      head.appendChild(th);
    }
    table.appendChild(head);
    const rowAxis = this.lastCellset.axes[1]?.positions ?? null;
    grid.rowHeaders.forEach((header, r) => {
      const tr = this.root.createElement("tr");
      const th = this.root.createElement("th");
      th.textContent = header;
      th.className = "row-header";
      const position = rowAxis?.[r];
      if (position) {
        th.addEventListener("click", () => this.drill(position
          .map((p) => p.unique_name)));
      }
      tr.appendChild(th);
      grid.text[r]?.forEach((cellText) => {
        const td = this.root.createElement("td");
        td.textContent = cellText;
        tr.appendChild(td);
      });
      table.appendChild(tr);
    });

    const chartHost = this.el("chart");
    const model = buildChart(this.lastCellset);
    const pieOption = this.el<HTMLSelectElement>("chart-kind")
      .querySelector<HTMLOptionElement>('option[value="pie"]');
    if (pieOption) pieOption.disabled = !model.pieCapable;
    chartHost.innerHTML = this.state.chart === "table"
      ? ""
      : renderChart(this.state.chart, model);
  }

  /** Click on a row header drills that member open (or closed). */
  private drill(uniqueNames: string[]): void {
    for (const name of uniqueNames) {
      const segments = parseUniqueName(name);
      const role = segments[0];
      const hierarchy = segments[1];
      const path = segments.slice(3);
      if (!role || !hierarchy || path.length === 0) continue;
      const entry = this.state.rows.find(
        (e): e is ZoneEntry =>
          e.role === role && e.hierarchy === hierarchy);
      if (entry) toggleExpansion(entry, path.join(PATH_SEP));
    }
    this.renderControls();
    void this.refresh();
  }

  private async runAdvanced(): Promise<void> {
    const mdx = this.el<HTMLTextAreaElement>("mdx-box").value;
    try {
      this.lastCellset = await this.api.query(this.state.cube, mdx);
      this.el("query-error").textContent = "";
      this.renderResult();
    } catch (error) {
      this.showError(error, mdx);
    }
  }

  private showError(error: unknown, mdx: string): void {
    const host = this.el("query-error");
    this.el("status").textContent = "";
    if (error instanceof ApiError) {
      let text = `${error.body.code}: ${error.body.message}`;
      const position = error.body.position;
      if (position) {
        const line = mdx.split("\n")[position.line - 1] ?? "";
        text += `\n${line}\n${" ".repeat(Math.max(position.column - 1, 0))}^`;
      }
      host.textContent = text;
    } else {
      host.textContent = String(error);
    }
  }

  private async downloadCsv(): Promise<void> {
    if (!this.state) return;
    const mdx = generateMdx(this.state);
    const csv = await this.api.queryCsv(this.state.cube, mdx);
    const blob = new Blob([csv], { type: "text/csv" });
    const link = this.root.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = "cellset.csv";
    link.click();
    URL.revokeObjectURL(link.href);
  }
}
