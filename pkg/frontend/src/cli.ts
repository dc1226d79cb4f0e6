/**
 * CLI: render --figure <id> --in <csv>... --out <path> [axis flags]
 *
 * Exit codes mirror the sweep tool: 0 success, 2 invalid configuration or
 * input schema, 3 numerical/render failure, 4 I/O failure.  Output files
 * are written atomically (write-then-rename).
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { parseSweepCsv, SchemaError, SweepRow } from "./csv.js";
import { extractFigure, FIGURE_IDS, FigureError, FigureId } from "./figures.js";
import { AxisRanges, renderFigure } from "./render.js";

export const EXIT_OK = 0;
export const EXIT_CONFIG = 2;
export const EXIT_NUMERICAL = 3;
export const EXIT_IO = 4;

class UsageError extends Error {}

interface RenderArgs {
  figure: FigureId;
  inputs: string[];
  out: string;
  ranges: AxisRanges;
}

function parseArgs(argv: string[]): RenderArgs {
  if (argv[0] !== "render") {
    throw new UsageError(`unknown command: ${argv[0] ?? "(none)"}; expected "render"`);
  }
  let figure: string | undefined;
  const inputs: string[] = [];
  let out: string | undefined;
  const ranges: AxisRanges = {};
  const rangeFlags: Record<string, keyof AxisRanges> = {
    "--x-min": "xMin",
    "--x-max": "xMax",
    "--y-min": "yMin",
    "--y-max": "yMax",
  };
  for (let i = 1; i < argv.length; i++) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (flag === "--figure") {
      figure = value;
      i++;
    } else if (flag === "--in") {
      if (value === undefined) throw new UsageError("--in needs a path");
      inputs.push(value);
      i++;
    } else if (flag === "--out") {
      out = value;
      i++;
    } else if (flag in rangeFlags) {
      const num = Number(value);
      if (!Number.isFinite(num)) {
        throw new UsageError(`${flag} needs a finite number, got "${value}"`);
      }
      ranges[rangeFlags[flag]] = num;
      i++;
    } else {
      throw new UsageError(`unknown flag: ${flag}`);
    }
  }
  if (!figure || !(FIGURE_IDS as readonly string[]).includes(figure)) {
    throw new UsageError(
      `--figure must be one of ${FIGURE_IDS.join(", ")}; got "${figure}"`,
    );
  }
  if (inputs.length === 0) throw new UsageError("at least one --in CSV is required");
  if (!out) throw new UsageError("--out is required");
  return { figure: figure as FigureId, inputs, out, ranges };
}

function writeAtomic(target: string, content: string): void {
  const dir = path.dirname(path.resolve(target));
  fs.mkdirSync(dir, { recursive: true });
  const tmp = path.join(dir, `.${path.basename(target)}.${process.pid}.tmp`);
  try {
    fs.writeFileSync(tmp, content, "utf8");
    fs.renameSync(tmp, target);
  } catch (err) {
    if (fs.existsSync(tmp)) fs.unlinkSync(tmp);
    throw err;
  }
}

export function run(argv: string[]): number {
  let args: RenderArgs;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return EXIT_CONFIG;
  }

  const rows: SweepRow[] = [];
  for (const input of args.inputs) {
    let text: string;
    try {
      text = fs.readFileSync(input, "utf8");
    } catch (err) {
      console.error(`error: cannot read ${input}: ${(err as Error).message}`);
      return EXIT_IO;
    }
    try {
      rows.push(...parseSweepCsv(text));
    } catch (err) {
      if (err instanceof SchemaError) {
        console.error(`error: ${input}: ${err.message}`);
        return EXIT_CONFIG;
      }
      throw err;
    }
  }

  let svg: string;
  try {
    svg = renderFigure(extractFigure(args.figure, rows), args.ranges);
  } catch (err) {
    if (err instanceof FigureError) {
      console.error(`error: ${err.message}`);
      return EXIT_CONFIG;
    }
    console.error(`error: render failed: ${(err as Error).message}`);
    return EXIT_NUMERICAL;
  }

  try {
    writeAtomic(args.out, svg);
  } catch (err) {
    console.error(`error: cannot write ${args.out}: ${(err as Error).message}`);
    return EXIT_IO;
  }
  return EXIT_OK;
}

const entry = process.argv[1] ?? "";
if (entry.endsWith("cli.js") || entry.endsWith("cli.ts")) {
  process.exit(run(process.argv.slice(2)));
}
