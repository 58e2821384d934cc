/**
 * The three study figures, each a pure function from a parsed CSV to SVG.
 */

import { numericColumn, requireColumns, SchemaError, Table } from "./csv.js";
import { lineChart, PALETTE, Series } from "./svg.js";

/** Transport cost versus injected outlier count: one line per method/mass. */
export function robustnessChart(table: Table, file: string): string {
  const cols = requireColumns(table, ["n0", "method", "s", "objective"], file);
  const n0 = numericColumn(table, "n0", cols.n0, file);
  const s = numericColumn(table, "s", cols.s, file);
  const objective = numericColumn(table, "objective", cols.objective, file);

  const groups = new Map<string, Array<[number, number]>>();
  table.rows.forEach((row, i) => {
    const method = row[cols.method];
    const key = method === "mot" ? "balanced" : `partial s=${s[i]}`;
    if (!groups.has(key)) groups.set(key, []);
    groups.get(key)!.push([n0[i], objective[i]]);
  });
  if (!groups.has("balanced")) {
    throw new SchemaError(`${file}: no rows with method 'mot'`, "method");
  }
  const series: Series[] = [...groups.entries()].map(([label, points], i) => ({
    label,
    points: points.sort((a, b) => a[0] - b[0]),
    color: PALETTE[i % PALETTE.length],
    dashed: label === "balanced",
  }));
  return lineChart({
    title: "Transport cost under injected outliers",
    xLabel: "outlier points per measure",
    yLabel: "optimal cost",
    series,
  });
}

/** Overlaid barycenter histograms on the shared support grid. */
export function barycenterChart(table: Table, file: string): string {
  const wanted = ["support", "ot_bary", "pot_bary", "mpot_bary"];
  const cols = requireColumns(table, wanted, file);
  const support = numericColumn(table, "support", cols.support, file);
  const labels: Record<string, string> = {
    ot_bary: "balanced barycenter",
    pot_bary: "pairwise partial barycenter",
    mpot_bary: "multimarginal partial barycenter",
  };
  const series: Series[] = wanted.slice(1).map((name, i) => {
    const values = numericColumn(table, name, cols[name], file);
    return {
      label: labels[name],
      points: support.map((x, j) => [x, values[j]] as [number, number]),
      color: PALETTE[i % PALETTE.length],
    };
  });
  return lineChart({
    title: "Barycenters of contaminated histograms",
    xLabel: "support",
    yLabel: "mass",
    series,
  });
}

/** Objective trace per regularization strength, plus the exact optimum. */
export function convergenceChart(table: Table, file: string): string {
  const cols = requireColumns(table, ["eta", "iter", "objective"], file);
  const refRows = table.rows.filter((row) => row[cols.eta] === "exact");
  if (refRows.length === 0) {
    throw new SchemaError(`${file}: missing the 'exact' reference row`, "eta");
  }
  const refValue = Number(refRows[0][cols.objective]);
  if (!Number.isFinite(refValue)) {
    throw new SchemaError(`${file}: reference objective is not numeric`, "objective");
  }

  const groups = new Map<string, Array<[number, number]>>();
  for (const row of table.rows) {
    const eta = row[cols.eta];
    if (eta === "exact") continue;
    const iter = Number(row[cols.iter]);
    const objective = Number(row[cols.objective]);
    if (!Number.isFinite(iter) || !Number.isFinite(objective)) {
      throw new SchemaError(`${file}: non-numeric trace row`, "objective");
    }
    if (!groups.has(eta)) groups.set(eta, []);
    groups.get(eta)!.push([Math.max(iter, 1), objective]);
  }
  if (groups.size === 0) {
    throw new SchemaError(`${file}: no per-eta trace rows`, "eta");
  }
  const series: Series[] = [...groups.entries()].map(([eta, points], i) => ({
    label: `eta=${eta}`,
    points: points.sort((a, b) => a[0] - b[0]),
    color: PALETTE[i % PALETTE.length],
  }));
  return lineChart({
    title: "Entropic solver convergence",
    xLabel: "sweep (log scale)",
    yLabel: "extended objective",
    series,
    xLog: true,
    refLines: [{ y: refValue, label: "exact optimum", color: "#d62728" }],
  });
}
