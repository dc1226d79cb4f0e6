/**
 * Figure definitions: which series each figure id extracts from sweep rows.
 *
 * The renderer never computes model quantities; every y value is read
 * straight from the CSV.  Series are keyed and sorted deterministically so
 * repeated renders are byte-identical.
 */

import { SweepRow } from "./csv.js";

export const FIGURE_IDS = [
  "success_total",
  "success_macro_decomposition",
  "goodput",
] as const;

export type FigureId = (typeof FIGURE_IDS)[number];

export interface Series {
  key: string;
  points: Array<{ x: number; y: number }>;
}

export interface FigureData {
  id: FigureId;
  xLabel: string;
  yLabel: string;
  series: Series[];
  /** draw markers where curves cross this y value (linear interpolation) */
  thresholdY?: number;
}

export class FigureError extends Error {}

function groupSorted(
  rows: SweepRow[],
  keyOf: (r: SweepRow) => string | null,
  yOf: (r: SweepRow) => number,
): Series[] {
  const buckets = new Map<string, Array<{ x: number; y: number }>>();
  for (const row of rows) {
    const key = keyOf(row);
    if (key === null) continue;
    if (!buckets.has(key)) buckets.set(key, []);
    buckets.get(key)!.push({ x: row.load_mbps, y: yOf(row) });
  }
  return [...buckets.keys()].sort().map((key) => ({
    key,
    points: buckets.get(key)!.slice().sort((a, b) => a.x - b.x),
  }));
}

export function extractFigure(id: FigureId, rows: SweepRow[]): FigureData {
  let series: Series[];
  switch (id) {
    case "success_total":
      series = groupSorted(rows, (r) => `${r.dr} ${r.strategy}`, (r) => r.s_total);
      return {
        id,
        xLabel: "offered load per gateway (Mbps)",
        yLabel: "packet success probability",
        series,
        thresholdY: 0.8,
      };
    case "success_macro_decomposition":
      series = [
        ...groupSorted(rows, (r) => (r.strategy === "macro" ? `${r.dr} header` : null),
          (r) => r.s_header),
        ...groupSorted(rows, (r) => (r.strategy === "macro" ? `${r.dr} payload` : null),
          (r) => r.s_payload),
      ].sort((a, b) => a.key.localeCompare(b.key));
      if (series.length === 0) {
        throw new FigureError(
          "success_macro_decomposition needs rows with strategy=macro",
        );
      }
      return {
        id,
        xLabel: "offered load per gateway (Mbps)",
        yLabel: "success probability",
        series,
      };
    case "goodput":
      series = groupSorted(rows, (r) => `${r.dr} ${r.strategy}`, (r) => r.goodput_mbps);
      return {
        id,
        xLabel: "offered load per gateway (Mbps)",
        yLabel: "goodput per gateway (Mbps)",
        series,
      };
    default: {
      const exhaustive: never = id;
      throw new FigureError(`unknown figure id: ${exhaustive}`);
    }
  }
}
