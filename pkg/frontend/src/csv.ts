/**
 * Reader for the frozen sweep CSV schema.
 *
 * The sweep tool emits `#` comment lines (effective config echo) followed by
 * a fixed header; any schema drift is reported with the offending column
 * names so upstream changes surface immediately instead of producing empty
 * figures.
 */

export const CSV_COLUMNS = [
  "dr",
  "strategy",
  "load_mbps",
  "s_header",
  "s_payload",
  "s_total",
  "goodput_mbps",
  "mc_s_total",
  "mc_std_error",
] as const;

export interface SweepRow {
  dr: string;
  strategy: string;
  load_mbps: number;
  s_header: number;
  s_payload: number;
  s_total: number;
  goodput_mbps: number;
  mc_s_total: number | null;
  mc_std_error: number | null;
}

export class SchemaError extends Error {}

function parseNumber(cell: string, column: string, line: number): number {
  const value = Number(cell);
  if (cell === "" || !Number.isFinite(value)) {
    throw new SchemaError(
      `line ${line}: column "${column}" is not a finite number: "${cell}"`,
    );
  }
  return value;
}

function parseOptional(cell: string, column: string, line: number): number | null {
  return cell === "" ? null : parseNumber(cell, column, line);
}

export function parseSweepCsv(text: string): SweepRow[] {
  const rows: SweepRow[] = [];
  let headerSeen = false;
  const lines = text.split(/\r?\n/);
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (line === "" || line.startsWith("#")) continue;
    if (!headerSeen) {
      const got = line.split(",");
      const expected = [...CSV_COLUMNS];
      const missing = expected.filter((c) => !got.includes(c));
      const unexpected = got.filter((c) => !expected.includes(c as never));
      if (missing.length > 0 || unexpected.length > 0 ||
          got.length !== expected.length ||
          !expected.every((c, k) => got[k] === c)) {
        throw new SchemaError(
          `unexpected CSV header: missing [${missing.join(", ")}], ` +
          `unexpected [${unexpected.join(", ")}], got [${got.join(", ")}]`,
        );
      }
      headerSeen = true;
      continue;
    }
    const cells = line.split(",");
    if (cells.length !== CSV_COLUMNS.length) {
      throw new SchemaError(
        `line ${i + 1}: expected ${CSV_COLUMNS.length} fields, got ${cells.length}`,
      );
    }
    rows.push({
      dr: cells[0],
      strategy: cells[1],
      load_mbps: parseNumber(cells[2], "load_mbps", i + 1),
      s_header: parseNumber(cells[3], "s_header", i + 1),
      s_payload: parseNumber(cells[4], "s_payload", i + 1),
      s_total: parseNumber(cells[5], "s_total", i + 1),
      goodput_mbps: parseNumber(cells[6], "goodput_mbps", i + 1),
      mc_s_total: parseOptional(cells[7], "mc_s_total", i + 1),
      mc_std_error: parseOptional(cells[8], "mc_std_error", i + 1),
    });
  }
  if (!headerSeen) {
    throw new SchemaError("no CSV header found");
  }
  if (rows.length === 0) {
    throw new SchemaError("CSV contains a header but no data rows");
  }
  return rows;
}
