/** Gesture fuzz against a real backend: every generated query must be
 * accepted (zero syntax errors) and the grid must show cellset values
 * verbatim (zero client-side re-aggregation discrepancies). */

import { ChildProcess, execFileSync, spawn } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { generateMdx } from "../src/mdx.js";
import { HierarchyRef } from "../src/state.js";
import { buildGrid } from "../src/views.js";
import { keyPathOf } from "../src/unique_name.js";
import { MemberSource, mulberry32, randomScript } from "./gestures.js";

const PYTHON = process.env.STARCUBE_PYTHON ?? "python3";
const PORT = 8765 + Math.floor(Math.random() * 200);
const BASE = `http://127.0.0.1:${PORT}`;

let workdir: string;
let server: ChildProcess | null = null;
const api = new ApiClient(BASE);

function cli(args: string[]): void {
  execFileSync(PYTHON, ["-m", "starcube.cli", ...args],
    { stdio: "pipe", timeout: 120_000 });
}

async function waitForHealth(): Promise<void> {
  const deadline = Date.now() + 60_000;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/api/health`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error("backend never became healthy");
}

beforeAll(async () => {
  workdir = mkdtempSync(join(tmpdir(), "starcube-ui-fuzz-"));
  const src = join(workdir, "src");
  const data = join(workdir, "wh");
  cli(["gen-data", "--seed", "7", "--patients", "80", "--facts", "800",
       "--typo-rate", "0.05", "--out", src, "--with-config"]);
  cli(["--data-dir", data, "init", "--catalog", join(src, "catalog.json")]);
  cli(["--data-dir", data, "etl", join(src, "pipeline.json"),
       "--batch-id", "fuzz", "--batch-date", "2013-01-15"]);
  server = spawn(PYTHON, ["-m", "starcube.cli", "--data-dir", data,
                          "serve", "--port", String(PORT)],
                 { stdio: "ignore" });
  await waitForHealth();
}, 120_000);

afterAll(() => {
  server?.kill("SIGINT");
  if (workdir) rmSync(workdir, { recursive: true, force: true });
});

/** Live member source backed by the /members endpoint. */
const liveMembers: MemberSource = {
  roots: async (ref: HierarchyRef) => {
    const page = await api.members("Cancer", ref.role, ref.hierarchy);
    return page.members.map((m) => keyPathOf(m.unique_name));
  },
  children: async (ref: HierarchyRef, path: string[]) => {
    const parent = [`[${ref.role}]`, `[${ref.hierarchy}]`, "[All]",
                    ...path.map((p) => `[${p.replace(/\]/g, "]]")}]`)]
      .join(".");
    const page = await api.members("Cancer", ref.role, ref.hierarchy, parent);
    return page.members.map((m) => keyPathOf(m.unique_name));
  },
};

describe("gesture fuzz against the live backend", () => {
  it("criterion 10: 200 random gesture scripts, zero syntax errors, " +
     "grid equals cellset", async () => {
    const rng = mulberry32(99);
    let syntaxErrors = 0;
    let otherErrors = 0;
    let discrepancies = 0;
    let queries = 0;

    for (let i = 0; i < 200; i += 1) {
      const gestures = 1 + Math.floor(rng() * 6);
      const state = await randomScript(rng, liveMembers, gestures);
      const mdx = generateMdx(state);
      queries += 1;
      try {
        const cellset = await api.query("Cancer", mdx);
        const grid = buildGrid(cellset);
        const ncols = grid.columnHeaders.length;
        grid.values.forEach((line, r) => {
          line.forEach((value, c) => {
            const cell = cellset.cells[r * ncols + c] ?? {};
            const keys = Object.keys(cell);
            const wire = keys.length > 0 ? cell[keys[0]!] ?? null : null;
            if (value !== wire) discrepancies += 1;
          });
        });
      } catch (error) {
        if (error instanceof ApiError
            && error.body.code === "SyntaxError") {
          syntaxErrors += 1;
        } else {
          otherErrors += 1;
          if (otherErrors <= 3) {
            console.error("unexpected error for:", mdx, error);
          }
        }
      }
    }

    expect(syntaxErrors).toBe(0);
    expect(otherErrors).toBe(0);
    expect(discrepancies).toBe(0);
    console.log(`[PASS] criterion 10: ${queries} gesture scripts, ` +
      "zero syntax errors, zero re-aggregation discrepancies");
  }, 300_000);

  it("advanced-mode syntax errors carry a position for the caret", async () => {
    try {
      await api.query("Cancer", "SELECT FROM [Cancer]");
      expect.unreachable("query should have failed");
    } catch (error) {
      expect(error).toBeInstanceOf(ApiError);
      const body = (error as ApiError).body;
      expect(body.code).toBe("SyntaxError");
      expect(body.position).toEqual({ line: 1, column: 8 });
    }
  });

  it("csv download replays the query through format=csv", async () => {
    const csv = await api.queryCsv("Cancer",
      "SELECT {[Measures].[Cost]} ON COLUMNS, " +
      "NON EMPTY [PaID].[Gender].Members ON ROWS FROM [Cancer]");
    const lines = csv.trim().split(/\r?\n/);
    expect(lines[0]).toBe(",Cost");
    expect(lines.length).toBeGreaterThan(1);
  });
});
