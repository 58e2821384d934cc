#!/usr/bin/env node
/**
 * render_figures <csv-dir> <out-dir>
 *
 * Reads robustness.csv, barycenter.csv, and convergence.csv from <csv-dir>
 * and writes one SVG per study into <out-dir>. Any schema problem is
 * reported with the offending file and column, and the exit code is
 * nonzero; nothing is written for a study that fails validation.
 */

import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { barycenterChart, convergenceChart, robustnessChart } from "./charts.js";
import { parseCsv, SchemaError, Table } from "./csv.js";

const STUDIES: Array<{
  csv: string;
  svg: string;
  build: (table: Table, file: string) => string;
}> = [
  { csv: "robustness.csv", svg: "robustness.svg", build: robustnessChart },
  { csv: "barycenter.csv", svg: "barycenter.svg", build: barycenterChart },
  { csv: "convergence.csv", svg: "convergence.svg", build: convergenceChart },
];

export interface RenderResult {
  written: string[];
  errors: string[];
}

export function renderAll(csvDir: string, outDir: string): RenderResult {
  const result: RenderResult = { written: [], errors: [] };
  mkdirSync(outDir, { recursive: true });
  for (const study of STUDIES) {
    const csvPath = join(csvDir, study.csv);
    let text: string;
    try {
      text = readFileSync(csvPath, "utf8");
    } catch {
      result.errors.push(`${csvPath}: cannot read file`);
      continue;
    }
    try {
      const svg = study.build(parseCsv(text, study.csv), study.csv);
      const outPath = join(outDir, study.svg);
      writeFileSync(outPath, svg);
      result.written.push(outPath);
    } catch (error) {
      if (error instanceof SchemaError) {
        const where = error.column ? ` (column '${error.column}')` : "";
        result.errors.push(`${csvPath}: ${error.message}${where}`);
      } else {
        result.errors.push(`${csvPath}: ${String(error)}`);
      }
    }
  }
  return result;
}

export function main(argv: string[]): number {
  if (argv.length !== 2) {
    console.error("usage: render_figures <csv-dir> <out-dir>");
    return 2;
  }
  const [csvDir, outDir] = argv;
  const { written, errors } = renderAll(csvDir, outDir);
  for (const path of written) console.log(`wrote ${path}`);
  for (const message of errors) console.error(`error: ${message}`);
  return errors.length === 0 ? 0 : 1;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
