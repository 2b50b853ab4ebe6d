/**
 * Hand-rolled SVG figure: a 2 x F grid of panels, one column per target
 * family, top row ESS per 1000 steps, bottom row ESS per second.  Every
 * sampler is one series with a fixed marker and color; error bars show
 * 95% confidence intervals over replicates.
 */

import { RunRow } from "./csv.js";
import { SamplerSeries, summarizeFamily } from "./summary.js";

export const FAMILY_ORDER = ["poisson", "sk", "neural", "table"] as const;

// fixed by sampler tag so colors and markers agree across figures
const STYLE: Record<string, { color: string; marker: string }> = {
  pps: { color: "#1f77b4", marker: "circle" },
  bd: { color: "#d62728", marker: "square" },
  "zanella-sqrt": { color: "#2ca02c", marker: "triangle" },
  "zanella-min": { color: "#9467bd", marker: "diamond" },
  "zanella-ratio": { color: "#ff7f0e", marker: "cross" },
};
const FALLBACK_STYLE = { color: "#7f7f7f", marker: "circle" };

const PANEL_W = 260;
const PANEL_H = 200;
const MARGIN = { left: 62, right: 14, top: 30, bottom: 44 };
const GAP = 18;

interface Scale {
  (value: number): number;
}

function makeScale(
  lo: number,
  hi: number,
  outLo: number,
  outHi: number,
  log: boolean,
): Scale {
  if (log) {
    const a = Math.log10(lo);
    const b = Math.log10(hi);
    return (v) => outLo + ((Math.log10(v) - a) / (b - a || 1)) * (outHi - outLo);
  }
  return (v) => outLo + ((v - lo) / (hi - lo || 1)) * (outHi - outLo);
}

function niceLogTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.floor(Math.log10(lo)); e <= Math.ceil(Math.log10(hi)); e++) {
    const v = Math.pow(10, e);
    if (v >= lo * 0.999 && v <= hi * 1.001) ticks.push(v);
  }
  return ticks.length >= 2 ? ticks : [lo, hi];
}

function niceLinearTicks(lo: number, hi: number): number[] {
  if (lo === hi) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / 3)));
  const mult = span / step > 15 ? 5 : span / step > 6 ? 2 : 1;
  const ticks: number[] = [];
  const s = step * mult;
  for (let v = Math.ceil(lo / s) * s; v <= hi + 1e-12; v += s) ticks.push(v);
  return ticks;
}

function fmt(value: number): string {
  if (value === 0) return "0";
  const abs = Math.abs(value);
  if (abs >= 10000 || abs < 0.01) return value.toExponential(0);
  return String(Number(value.toPrecision(3)));
}

function marker(shape: string, x: number, y: number, color: string): string {
  const r = 3.5;
  switch (shape) {
    case "square":
      return `<rect x="${x - r}" y="${y - r}" width="${2 * r}" height="${2 * r}" fill="${color}"/>`;
    case "triangle":
      return `<polygon points="${x},${y - r} ${x - r},${y + r} ${x + r},${y + r}" fill="${color}"/>`;
    case "diamond":
      return `<polygon points="${x},${y - r} ${x + r},${y} ${x},${y + r} ${x - r},${y}" fill="${color}"/>`;
    case "cross":
      return (
        `<path d="M${x - r},${y - r}L${x + r},${y + r}M${x - r},${y + r}` +
        `L${x + r},${y - r}" stroke="${color}" stroke-width="1.6" fill="none"/>`
      );
    default:
      return `<circle cx="${x}" cy="${y}" r="${r}" fill="${color}"/>`;
  }
}

interface PanelValues {
  mean: (p: { meanEssPer1000: number; meanEssPerSecond: number }) => number;
  ci: (p: { ciEssPer1000: number | null; ciEssPerSecond: number | null }) => number | null;
  label: string;
}

const ROWS: PanelValues[] = [
  {
    mean: (p) => p.meanEssPer1000,
    ci: (p) => p.ciEssPer1000,
    label: "ESS per 1000 steps",
  },
  {
    mean: (p) => p.meanEssPerSecond,
    ci: (p) => p.ciEssPerSecond,
    label: "ESS per second",
  },
];

function renderPanel(
  series: SamplerSeries[],
  row: PanelValues,
  family: string,
  x0: number,
  y0: number,
  showYLabel: boolean,
): string {
  const logX = family === "poisson";
  let xs: number[] = [];
  let ys: number[] = [];
  for (const s of series) {
    for (const p of s.points) {
      xs.push(p.param);
      const m = row.mean(p);
      const c = row.ci(p) ?? 0;
      ys.push(Math.max(m - c, m * 1e-3), m + c);
    }
  }
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  const yLo = Math.max(Math.min(...ys), 1e-12);
  const yHi = Math.max(...ys);
  const padX = logX ? 1.15 : 0.06 * (xHi - xLo || 1);
  const sx = logX
    ? makeScale(xLo / padX, xHi * padX, x0, x0 + PANEL_W, true)
    : makeScale(xLo - padX, xHi + padX, x0, x0 + PANEL_W, false);
  const sy = makeScale(yLo / 1.4, yHi * 1.4, y0 + PANEL_H, y0, true);

  const parts: string[] = [`<g class="panel" data-family="${family}" data-quantity="${row.label}">`];
  parts.push(
    `<rect x="${x0}" y="${y0}" width="${PANEL_W}" height="${PANEL_H}" ` +
      `fill="none" stroke="#333" stroke-width="1"/>`,
  );

  const xTicks = logX ? niceLogTicks(xLo, xHi) : niceLinearTicks(xLo, xHi);
  for (const t of xTicks) {
    const px = sx(t);
    parts.push(
      `<line x1="${px}" y1="${y0 + PANEL_H}" x2="${px}" y2="${y0 + PANEL_H + 4}" stroke="#333"/>`,
      `<text x="${px}" y="${y0 + PANEL_H + 16}" font-size="10" text-anchor="middle">${fmt(t)}</text>`,
    );
  }
  for (const t of niceLogTicks(yLo, yHi)) {
    const py = sy(t);
    parts.push(
      `<line x1="${x0 - 4}" y1="${py}" x2="${x0}" y2="${py}" stroke="#333"/>`,
      `<text x="${x0 - 6}" y="${py + 3}" font-size="10" text-anchor="end">${fmt(t)}</text>`,
    );
  }
  parts.push(
    `<text x="${x0 + PANEL_W / 2}" y="${y0 + PANEL_H + 32}" font-size="11" ` +
      `text-anchor="middle">${family} parameter${logX ? " (log)" : ""}</text>`,
  );
  if (showYLabel) {
    parts.push(
      `<text x="${x0 - 46}" y="${y0 + PANEL_H / 2}" font-size="11" text-anchor="middle" ` +
        `transform="rotate(-90 ${x0 - 46} ${y0 + PANEL_H / 2})">${row.label} (log)</text>`,
    );
  }

  for (const s of series) {
    const style = STYLE[s.sampler] ?? FALLBACK_STYLE;
    parts.push(`<g class="series series-${s.sampler}">`);
    const coords = s.points.map((p) => [sx(p.param), sy(row.mean(p))]);
    if (coords.length >= 2) {
      const d = coords.map(([px, py], i) => `${i ? "L" : "M"}${px},${py}`).join("");
      parts.push(
        `<path d="${d}" fill="none" stroke="${style.color}" stroke-width="1.4"/>`,
      );
    }
    s.points.forEach((p, i) => {
      const [px, py] = coords[i];
      const ci = row.ci(p);
      if (ci !== null && ci > 0) {
        const m = row.mean(p);
        const top = sy(m + ci);
        const bot = sy(Math.max(m - ci, m * 1e-3));
        parts.push(
          `<line class="errorbar" x1="${px}" y1="${top}" x2="${px}" y2="${bot}" ` +
            `stroke="${style.color}" stroke-width="1"/>`,
          `<line x1="${px - 3}" y1="${top}" x2="${px + 3}" y2="${top}" stroke="${style.color}"/>`,
          `<line x1="${px - 3}" y1="${bot}" x2="${px + 3}" y2="${bot}" stroke="${style.color}"/>`,
        );
      }
      parts.push(marker(style.marker, px, py, style.color));
    });
    parts.push("</g>");
  }
  parts.push("</g>");
  return parts.join("\n");
}

export function renderFigure(rows: RunRow[], families?: string[]): string {
  const present = new Set(rows.map((r) => r.targetFamily));
  const chosen = FAMILY_ORDER.filter(
    (f) => present.has(f) && (!families || families.includes(f)),
  );
  if (chosen.length === 0) {
    throw new Error("no plottable families in the CSV");
  }
  const perFamily = chosen.map((f) => ({
    family: f,
    series: summarizeFamily(rows, f),
  }));

  const width =
    MARGIN.left + chosen.length * PANEL_W + (chosen.length - 1) * GAP + MARGIN.right;
  const height = MARGIN.top + 2 * PANEL_H + GAP + 26 + MARGIN.bottom;
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="sans-serif">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
  ];

  ROWS.forEach((rowSpec, ri) => {
    perFamily.forEach(({ family, series }, ci) => {
      const x0 = MARGIN.left + ci * (PANEL_W + GAP);
      const y0 = MARGIN.top + ri * (PANEL_H + GAP + 26);
      parts.push(renderPanel(series, rowSpec, family, x0, y0, ci === 0));
    });
  });

  // legend across the top
  const samplers = [
    ...new Set(perFamily.flatMap((f) => f.series.map((s) => s.sampler))),
  ].sort();
  let lx = MARGIN.left;
  for (const s of samplers) {
    const style = STYLE[s] ?? FALLBACK_STYLE;
    parts.push(marker(style.marker, lx, MARGIN.top - 14, style.color));
    parts.push(
      `<text x="${lx + 8}" y="${MARGIN.top - 10}" font-size="11">${s}</text>`,
    );
    lx += 14 + 8 * s.length + 20;
  }

  parts.push("</svg>");
  return parts.join("\n");
}
