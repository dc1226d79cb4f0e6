/**
 * Deterministic SVG renderer: fixed palette, fixed layout, series drawn in
 * sorted key order, numbers formatted with a fixed precision.  Rendering
 * the same figure from the same rows twice yields identical bytes.
 */

import { FigureData, Series } from "./figures.js";

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { top: 28, right: 24, bottom: 56, left: 64 };

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];

export interface AxisRanges {
  xMin?: number;
  xMax?: number;
  yMin?: number;
  yMax?: number;
}

function fmt(v: number): string {
  return Number(v.toPrecision(6)).toString();
}

function niceTicks(lo: number, hi: number, target = 6): number[] {
  const span = hi - lo;
  if (span <= 0) return [lo];
  const raw = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const norm = raw / mag;
  const step = (norm >= 5 ? 5 : norm >= 2 ? 2 : 1) * mag;
  const first = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = first; v <= hi + 1e-9 * span; v += step) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

class LinearScale {
  constructor(
    private d0: number,
    private d1: number,
    private r0: number,
    private r1: number,
  ) {}

  map(v: number): number {
    const t = (v - this.d0) / (this.d1 - this.d0);
    return this.r0 + t * (this.r1 - this.r0);
  }
}

function dataExtent(series: Series[], pick: (p: { x: number; y: number }) => number) {
  let lo = Infinity;
  let hi = -Infinity;
  for (const s of series) {
    for (const p of s.points) {
      const v = pick(p);
      lo = Math.min(lo, v);
      hi = Math.max(hi, v);
    }
  }
  return [lo, hi];
}

function thresholdCrossings(series: Series, y: number): number[] {
  const out: number[] = [];
  const pts = series.points;
  for (let i = 1; i < pts.length; i++) {
    const a = pts[i - 1];
    const b = pts[i];
    if ((a.y - y) * (b.y - y) < 0) {
      const t = (y - a.y) / (b.y - a.y);
      out.push(a.x + t * (b.x - a.x));
    }
  }
  return out;
}

export function renderFigure(figure: FigureData, ranges: AxisRanges = {}): string {
  if (figure.series.length === 0) {
    throw new Error("nothing to draw: no series extracted");
  }
  const [dxLo, dxHi] = dataExtent(figure.series, (p) => p.x);
  const [dyLo, dyHi] = dataExtent(figure.series, (p) => p.y);
  const xMin = ranges.xMin ?? Math.min(0, dxLo);
  const xMax = ranges.xMax ?? dxHi;
  const yMin = ranges.yMin ?? Math.min(0, dyLo);
  const yMax = ranges.yMax ?? Math.max(dyHi, figure.thresholdY ?? dyHi) * 1.02;
  if (!(xMax > xMin) || !(yMax > yMin)) {
    throw new Error(
      `degenerate axis range: x [${xMin}, ${xMax}], y [${yMin}, ${yMax}]`,
    );
  }

  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const sx = new LinearScale(xMin, xMax, MARGIN.left, MARGIN.left + plotW);
  const sy = new LinearScale(yMin, yMax, MARGIN.top + plotH, MARGIN.top);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
    `viewBox="0 0 ${WIDTH} ${HEIGHT}" data-figure="${figure.id}" ` +
    `data-x-range="${fmt(xMin)},${fmt(xMax)}" data-y-range="${fmt(yMin)},${fmt(yMax)}">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);

  // grid and ticks
  for (const t of niceTicks(xMin, xMax)) {
    const x = fmt(sx.map(t));
    parts.push(
      `<line x1="${x}" y1="${MARGIN.top}" x2="${x}" y2="${MARGIN.top + plotH}" ` +
      `stroke="#dddddd" stroke-width="1"/>`,
      `<text x="${x}" y="${MARGIN.top + plotH + 18}" font-size="12" ` +
      `text-anchor="middle" fill="#333333">${fmt(t)}</text>`,
    );
  }
  for (const t of niceTicks(yMin, yMax)) {
    const y = fmt(sy.map(t));
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + plotW}" y2="${y}" ` +
      `stroke="#dddddd" stroke-width="1"/>`,
      `<text x="${MARGIN.left - 8}" y="${y}" font-size="12" text-anchor="end" ` +
      `dominant-baseline="middle" fill="#333333">${fmt(t)}</text>`,
    );
  }

  // frame and axis labels
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" ` +
    `fill="none" stroke="#333333" stroke-width="1"/>`,
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 14}" font-size="14" ` +
    `text-anchor="middle" fill="#111111">${figure.xLabel}</text>`,
    `<text x="18" y="${MARGIN.top + plotH / 2}" font-size="14" text-anchor="middle" ` +
    `fill="#111111" transform="rotate(-90 18 ${MARGIN.top + plotH / 2})">` +
    `${figure.yLabel}</text>`,
  );

  // threshold line and interpolated crossing markers
  if (figure.thresholdY !== undefined &&
      figure.thresholdY > yMin && figure.thresholdY < yMax) {
    const y = fmt(sy.map(figure.thresholdY));
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + plotW}" y2="${y}" ` +
      `stroke="#555555" stroke-width="1" stroke-dasharray="6,4"/>`,
    );
    figure.series.forEach((s, i) => {
      for (const cx of thresholdCrossings(s, figure.thresholdY!)) {
        if (cx < xMin || cx > xMax) continue;
        parts.push(
          `<circle cx="${fmt(sx.map(cx))}" cy="${y}" r="4" fill="none" ` +
          `stroke="${PALETTE[i % PALETTE.length]}" stroke-width="1.5" ` +
          `data-crossing="${s.key}:${fmt(cx)}"/>`,
        );
      }
    });
  }

  // series paths in deterministic order
  figure.series.forEach((s, i) => {
    const d = s.points
      .filter((p) => p.x >= xMin && p.x <= xMax)
      .map((p, j) => `${j === 0 ? "M" : "L"}${fmt(sx.map(p.x))},${fmt(sy.map(p.y))}`)
      .join("");
    parts.push(
      `<path d="${d}" fill="none" stroke="${PALETTE[i % PALETTE.length]}" ` +
      `stroke-width="2" data-series="${s.key}"/>`,
    );
  });

  // legend
  figure.series.forEach((s, i) => {
    const lx = MARGIN.left + 12;
    const ly = MARGIN.top + 16 + 18 * i;
    parts.push(
      `<line x1="${lx}" y1="${ly}" x2="${lx + 22}" y2="${ly}" ` +
      `stroke="${PALETTE[i % PALETTE.length]}" stroke-width="2"/>`,
      `<text x="${lx + 28}" y="${ly + 4}" font-size="12" fill="#111111">${s.key}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
