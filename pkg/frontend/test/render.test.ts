import * as fs from "node:fs";
import * as path from "node:path";
import { describe, expect, it } from "vitest";

import { parseSweepCsv } from "../src/csv.js";
import { extractFigure, FigureError } from "../src/figures.js";
import { renderFigure } from "../src/render.js";

const GOLDEN = path.join(__dirname, "..", "testdata", "golden_sweep.csv");
const rows = parseSweepCsv(fs.readFileSync(GOLDEN, "utf8"));

function countSeries(svg: string): number {
  return (svg.match(/data-series="/g) ?? []).length;
}

describe("figure extraction", () => {
  it("success_total has one curve per (dr, strategy)", () => {
    const fig = extractFigure("success_total", rows);
    expect(fig.series.map((s) => s.key)).toEqual([
      "DR5 macro", "DR5 nearest", "DR6 macro", "DR6 nearest",
    ]);
  });

  it("decomposition uses macro rows only: header and payload per DR", () => {
    const fig = extractFigure("success_macro_decomposition", rows);
    expect(fig.series.map((s) => s.key)).toEqual([
      "DR5 header", "DR5 payload", "DR6 header", "DR6 payload",
    ]);
  });

  it("decomposition fails without macro rows", () => {
    const nearestOnly = rows.filter((r) => r.strategy === "nearest");
    expect(() => extractFigure("success_macro_decomposition", nearestOnly))
      .toThrowError(FigureError);
  });

  it("series points are sorted by load", () => {
    for (const s of extractFigure("goodput", rows).series) {
      const xs = s.points.map((p) => p.x);
      expect(xs).toEqual([...xs].sort((a, b) => a - b));
    }
  });
});

describe("renderFigure", () => {
  it("renders four curves for success_total with threshold markers", () => {
    const svg = renderFigure(extractFigure("success_total", rows));
    expect(countSeries(svg)).toBe(4);
    expect(svg).toContain('data-figure="success_total"');
    expect(svg).toContain("data-crossing=");
    expect(svg.startsWith("<svg ")).toBe(true);
    expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
  });

  it("is deterministic across repeated renders", () => {
    const a = renderFigure(extractFigure("goodput", rows));
    const b = renderFigure(extractFigure("goodput", rows));
    expect(a).toBe(b);
  });

  it("honors explicit axis ranges", () => {
    const svg = renderFigure(extractFigure("success_total", rows),
      { xMin: 0, xMax: 6, yMin: 0, yMax: 1 });
    expect(svg).toContain('data-x-range="0,6"');
    expect(svg).toContain('data-y-range="0,1"');
  });

  it("rejects degenerate ranges", () => {
    expect(() => renderFigure(extractFigure("goodput", rows),
      { xMin: 5, xMax: 5 })).toThrowError(/degenerate/);
  });
});
