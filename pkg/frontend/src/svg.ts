/**
 * Hand-rolled static SVG line charts: no DOM, no runtime dependencies,
 * deterministic output (re-rendering the same data gives identical bytes).
 */

export interface Series {
  label: string;
  points: Array<[number, number]>;
  color: string;
  dashed?: boolean;
}

export interface RefLine {
  y: number;
  label: string;
  color: string;
}

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  refLines?: RefLine[];
  xLog?: boolean;
  width?: number;
  height?: number;
}

export const PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#17becf"];

const MARGIN = { top: 42, right: 150, bottom: 48, left: 64 };
const MAX_POINTS_PER_SERIES = 800;

function fmt(value: number): string {
  if (!Number.isFinite(value)) return "0";
  const rounded = Number(value.toPrecision(6));
  return String(rounded);
}

function niceTicks(lo: number, hi: number, count = 6): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const candidates = [step, 2 * step, 2.5 * step, 5 * step, 10 * step];
  const pick = candidates.find((c) => span / c <= count) ?? 10 * step;
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / pick) * pick; t <= hi + 1e-12 * span; t += pick) {
    ticks.push(Number(t.toPrecision(12)));
  }
  return ticks;
}

function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let p = Math.floor(Math.log10(lo)); p <= Math.ceil(Math.log10(hi)); p += 1) {
    const t = Math.pow(10, p);
    if (t >= lo / 1.0001 && t <= hi * 1.0001) ticks.push(t);
  }
  return ticks.length >= 2 ? ticks : [lo, hi];
}

function thin(points: Array<[number, number]>): Array<[number, number]> {
  if (points.length <= MAX_POINTS_PER_SERIES) return points;
  const stride = Math.ceil(points.length / MAX_POINTS_PER_SERIES);
  const out = points.filter((_, i) => i % stride === 0);
  if (out[out.length - 1] !== points[points.length - 1]) {
    out.push(points[points.length - 1]);
  }
  return out;
}

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

/** Build a complete standalone SVG document for a multi-series line chart. */
export function lineChart(options: ChartOptions): string {
  const width = options.width ?? 760;
  const height = options.height ?? 440;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  const all = options.series.flatMap((s) => s.points);
  if (all.length === 0) {
    throw new Error(`chart '${options.title}' has no points`);
  }
  const xs = all.map((p) => p[0]);
  let ys = all.map((p) => p[1]);
  if (options.refLines) ys = ys.concat(options.refLines.map((r) => r.y));

  let xLo = Math.min(...xs);
  let xHi = Math.max(...xs);
  if (options.xLog) {
    xLo = Math.max(xLo, 1e-12);
    xHi = Math.max(xHi, xLo * 10);
  } else if (xHi === xLo) {
    xHi = xLo + 1;
  }
  let yLo = Math.min(...ys);
  let yHi = Math.max(...ys);
  if (yHi === yLo) {
    yHi = yLo + 1;
    yLo = yLo - 1;
  }
  const pad = 0.04 * (yHi - yLo);
  yLo -= pad;
  yHi += pad;

  const tx = (x: number) => {
    const v = options.xLog
      ? (Math.log10(Math.max(x, xLo)) - Math.log10(xLo)) / (Math.log10(xHi) - Math.log10(xLo))
      : (x - xLo) / (xHi - xLo);
    return MARGIN.left + v * plotW;
  };
  const ty = (y: number) => MARGIN.top + (1 - (y - yLo) / (yHi - yLo)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="12">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="22" text-anchor="middle" ` +
      `font-size="15" font-weight="bold">${esc(options.title)}</text>`,
  );

  // frame and grid
  const xTicks = options.xLog ? logTicks(xLo, xHi) : niceTicks(xLo, xHi);
  const yTicks = niceTicks(yLo, yHi);
  for (const t of yTicks) {
    const y = ty(t);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${fmt(y)}" x2="${MARGIN.left + plotW}" ` +
        `y2="${fmt(y)}" stroke="#dddddd"/>`,
      `<text x="${MARGIN.left - 6}" y="${fmt(y + 4)}" text-anchor="end">${fmt(t)}</text>`,
    );
  }
  for (const t of xTicks) {
    const x = tx(t);
    parts.push(
      `<line x1="${fmt(x)}" y1="${MARGIN.top}" x2="${fmt(x)}" ` +
        `y2="${MARGIN.top + plotH}" stroke="#eeeeee"/>`,
      `<text x="${fmt(x)}" y="${MARGIN.top + plotH + 16}" text-anchor="middle">${fmt(t)}</text>`,
    );
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" ` +
      `fill="none" stroke="#333333"/>`,
  );

  // axis labels
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${height - 10}" ` +
      `text-anchor="middle">${esc(options.xLabel)}</text>`,
    `<text x="16" y="${MARGIN.top + plotH / 2}" text-anchor="middle" ` +
      `transform="rotate(-90 16 ${MARGIN.top + plotH / 2})">${esc(options.yLabel)}</text>`,
  );

  // reference lines behind the data
  for (const ref of options.refLines ?? []) {
    const y = fmt(ty(ref.y));
    parts.push(
      `<line class="reference-line" x1="${MARGIN.left}" y1="${y}" ` +
        `x2="${MARGIN.left + plotW}" y2="${y}" stroke="${ref.color}" ` +
        `stroke-width="1.5" stroke-dasharray="7 4"/>`,
    );
  }

  for (const series of options.series) {
    const pts = thin(series.points)
      .map(([x, y]) => `${fmt(tx(x))},${fmt(ty(y))}`)
      .join(" ");
    const dash = series.dashed ? ` stroke-dasharray="5 3"` : "";
    parts.push(
      `<polyline class="series" fill="none" stroke="${series.color}" ` +
        `stroke-width="1.8"${dash} points="${pts}"/>`,
    );
  }

  // legend, reference lines included
  const entries: Array<{ label: string; color: string; dashed: boolean }> = [
    ...options.series.map((s) => ({ label: s.label, color: s.color, dashed: !!s.dashed })),
    ...(options.refLines ?? []).map((r) => ({ label: r.label, color: r.color, dashed: true })),
  ];
  entries.forEach((entry, i) => {
    const y = MARGIN.top + 10 + 18 * i;
    const x = MARGIN.left + plotW + 12;
    const dash = entry.dashed ? ` stroke-dasharray="5 3"` : "";
    parts.push(
      `<line x1="${x}" y1="${y}" x2="${x + 22}" y2="${y}" ` +
        `stroke="${entry.color}" stroke-width="2"${dash}/>`,
      `<text x="${x + 28}" y="${y + 4}">${esc(entry.label)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
