/** Dependency-free SVG renderers: bar, pie, line, area. */

import { ChartModel } from "./views.js";

const WIDTH = 720;
const HEIGHT = 360;
const MARGIN = { top: 16, right: 16, bottom: 64, left: 72 };
const PALETTE = ["#2e7d32", "#ef6c00", "#1565c0", "#8e24aa", "#c62828",
                 "#00838f", "#6d4c41", "#558b2f"];

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;")
    .replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

function color(i: number): string {
  return PALETTE[i % PALETTE.length] ?? "#444";
}

interface Frame {
  x0: number;
  y0: number;
  w: number;
  h: number;
  max: number;
}

function frame(model: ChartModel): Frame {
  let max = 0;
  for (const s of model.series) {
    for (const v of s.values) if (v !== null && v > max) max = v;
  }
  return {
    x0: MARGIN.left,
    y0: MARGIN.top,
    w: WIDTH - MARGIN.left - MARGIN.right,
    h: HEIGHT - MARGIN.top - MARGIN.bottom,
    max: max > 0 ? max : 1,
  };
}

function axes(model: ChartModel, f: Frame): string {
  const parts: string[] = [];
  const bottom = f.y0 + f.h;
  parts.push(`<line x1="${f.x0}" y1="${bottom}" x2="${f.x0 + f.w}" ` +
    `y2="${bottom}" stroke="#999"/>`);
  parts.push(`<line x1="${f.x0}" y1="${f.y0}" x2="${f.x0}" y2="${bottom}" ` +
    `stroke="#999"/>`);
  const n = model.categories.length;
  model.categories.forEach((cat, i) => {
    const x = f.x0 + ((i + 0.5) / Math.max(n, 1)) * f.w;
    parts.push(`<text x="${x}" y="${bottom + 14}" font-size="10" ` +
      `text-anchor="end" transform="rotate(-35 ${x} ${bottom + 14})">` +
      `${esc(cat)}</text>`);
  });
  parts.push(`<text x="${f.x0 - 8}" y="${f.y0 + 4}" font-size="10" ` +
    `text-anchor="end">${f.max.toLocaleString()}</text>`);
  parts.push(`<text x="${f.x0 - 8}" y="${bottom}" font-size="10" ` +
    `text-anchor="end">0</text>`);
  return parts.join("");
}

function legend(model: ChartModel): string {
  return model.series.map((s, i) =>
    `<g transform="translate(${MARGIN.left + i * 150}, ${HEIGHT - 12})">` +
    `<rect width="10" height="10" y="-9" fill="${color(i)}"/>` +
    `<text x="14" font-size="10">${esc(s.name)}</text></g>`).join("");
}

function svg(inner: string): string {
  return `<svg viewBox="0 0 ${WIDTH} ${HEIGHT}" ` +
    `xmlns="http://www.w3.org/2000/svg" role="img">${inner}</svg>`;
}

export function barChart(model: ChartModel): string {
  const f = frame(model);
  const n = model.categories.length;
  const k = model.series.length;
  const groupW = f.w / Math.max(n, 1);
  const barW = (groupW * 0.8) / Math.max(k, 1);
  const parts: string[] = [axes(model, f)];
  model.series.forEach((s, si) => {
    s.values.forEach((v, ci) => {
      if (v === null) return;
      const h = (v / f.max) * f.h;
      const x = f.x0 + ci * groupW + groupW * 0.1 + si * barW;
      parts.push(`<rect x="${x}" y="${f.y0 + f.h - h}" width="${barW}" ` +
        `height="${h}" fill="${color(si)}"><title>${esc(s.name)} / ` +
        `${esc(model.categories[ci] ?? "")}: ${v}</title></rect>`);
    });
  });
  parts.push(legend(model));
  return svg(parts.join(""));
}

function points(model: ChartModel, f: Frame, si: number): [number, number][] {
  const n = model.categories.length;
  const out: [number, number][] = [];
  const series = model.series[si];
  if (!series) return out;
  series.values.forEach((v, ci) => {
    if (v === null) return;
    const x = f.x0 + ((ci + 0.5) / Math.max(n, 1)) * f.w;
    const y = f.y0 + f.h - (v / f.max) * f.h;
    out.push([x, y]);
  });
  return out;
}

export function lineChart(model: ChartModel, area = false): string {
  const f = frame(model);
  const parts: string[] = [axes(model, f)];
  model.series.forEach((s, si) => {
    const pts = points(model, f, si);
    if (pts.length === 0) return;
    const path = pts.map(([x, y], i) =>
      `${i === 0 ? "M" : "L"}${x.toFixed(1)},${y.toFixed(1)}`).join("");
    if (area) {
      const first = pts[0];
      const last = pts[pts.length - 1];
      if (first && last) {
        const bottom = f.y0 + f.h;
        parts.push(`<path d="${path}L${last[0].toFixed(1)},${bottom}` +
          `L${first[0].toFixed(1)},${bottom}Z" fill="${color(si)}" ` +
          `opacity="0.35" stroke="none"/>`);
      }
    }
    parts.push(`<path d="${path}" fill="none" stroke="${color(si)}" ` +
      `stroke-width="2"/>`);
    pts.forEach(([x, y]) => parts.push(
      `<circle cx="${x.toFixed(1)}" cy="${y.toFixed(1)}" r="2.5" ` +
      `fill="${color(si)}"/>`));
  });
  parts.push(legend(model));
  return svg(parts.join(""));
}

export function areaChart(model: ChartModel): string {
  return lineChart(model, true);
}

export function pieChart(model: ChartModel): string {
  const series = model.series[0];
  if (!series) return svg("");
  const entries = model.categories
    .map((cat, i) => ({ cat, value: series.values[i] ?? null }))
    .filter((e): e is { cat: string; value: number } =>
      e.value !== null && e.value > 0);
  const total = entries.reduce((acc, e) => acc + e.value, 0);
  if (total <= 0) return svg("");
  const cx = WIDTH / 2;
  const cy = (HEIGHT - 40) / 2 + 10;
  const r = Math.min(cx, cy) - 24;
  let angle = -Math.PI / 2;
  const parts: string[] = [];
  entries.forEach((e, i) => {
    const span = (e.value / total) * Math.PI * 2;
    const x1 = cx + r * Math.cos(angle);
    const y1 = cy + r * Math.sin(angle);
    angle += span;
    const x2 = cx + r * Math.cos(angle);
    const y2 = cy + r * Math.sin(angle);
    const large = span > Math.PI ? 1 : 0;
    const share = ((e.value / total) * 100).toFixed(1);
    parts.push(`<path d="M${cx},${cy}L${x1.toFixed(1)},${y1.toFixed(1)}` +
      `A${r},${r} 0 ${large} 1 ${x2.toFixed(1)},${y2.toFixed(1)}Z" ` +
      `fill="${color(i)}" stroke="#fff"><title>${esc(e.cat)}: ${e.value} ` +
      `(${share}%)</title></path>`);
    const mid = angle - span / 2;
    const lx = cx + (r + 14) * Math.cos(mid);
    const ly = cy + (r + 14) * Math.sin(mid);
    parts.push(`<text x="${lx.toFixed(1)}" y="${ly.toFixed(1)}" ` +
      `font-size="10" text-anchor="middle">${esc(e.cat)}</text>`);
  });
  return svg(parts.join(""));
}

export function renderChart(kind: string, model: ChartModel): string {
  switch (kind) {
    case "bar":
      return barChart(model);
    case "pie":
      return pieChart(model);
    case "line":
      return lineChart(model);
    case "area":
      return areaChart(model);
    default:
      return "";
  }
}
