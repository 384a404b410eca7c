/**
 * Log-scale SVG line chart of optimality gap against iteration count.
 *
 * Hand-rolled SVG keeps the tool dependency-free and byte-deterministic:
 * a fixed spec always yields the same markup and the same 960x600 canvas.
 */

import type { BoundPoint, TracePoint } from "./csv.js";

export interface Series {
  label: string;
  points: TracePoint[];
}

export interface FigureSpec {
  series: Series[];
  bound?: BoundPoint[];
  title?: string;
}

export const WIDTH = 960;
export const HEIGHT = 600;
const MARGIN = { top: 48, right: 32, bottom: 56, left: 84 };
const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const BOUND_COLOR = "#444444";

interface Extent {
  kMax: number;
  gapMin: number;
  gapMax: number;
}

/** Positive finite gaps only; a log axis cannot place zero or NaN. */
function usable(points: TracePoint[]): TracePoint[] {
  return points.filter((p) => Number.isFinite(p.gap) && p.gap > 0);
}

function extent(spec: FigureSpec): Extent {
  let kMax = 1;
  let gapMin = Infinity;
  let gapMax = -Infinity;
  for (const s of spec.series) {
    for (const p of usable(s.points)) {
      kMax = Math.max(kMax, p.k);
      gapMin = Math.min(gapMin, p.gap);
      gapMax = Math.max(gapMax, p.gap);
    }
  }
  for (const b of spec.bound ?? []) {
    if (b.boundN2 > 0) {
      kMax = Math.max(kMax, b.n);
      gapMin = Math.min(gapMin, b.boundN2);
      gapMax = Math.max(gapMax, b.boundN2);
    }
  }
  if (!Number.isFinite(gapMin) || !Number.isFinite(gapMax)) {
    throw new Error("nothing to plot: no positive finite gap values in any input");
  }
  return { kMax, gapMin, gapMax };
}

function xScale(ext: Extent): (k: number) => number {
  const span = WIDTH - MARGIN.left - MARGIN.right;
  return (k) => MARGIN.left + (k / ext.kMax) * span;
}

function yScale(ext: Extent): (gap: number) => number {
  const lo = Math.floor(Math.log10(ext.gapMin));
  const hi = Math.ceil(Math.log10(ext.gapMax));
  const top = hi === lo ? lo + 1 : hi;
  const span = HEIGHT - MARGIN.top - MARGIN.bottom;
  return (gap) => {
    const t = (Math.log10(gap) - lo) / (top - lo);
    return HEIGHT - MARGIN.bottom - t * span;
  };
}

function yTicks(ext: Extent): number[] {
  const lo = Math.floor(Math.log10(ext.gapMin));
  const hi = Math.max(Math.ceil(Math.log10(ext.gapMax)), lo + 1);
  const ticks: number[] = [];
  for (let d = lo; d <= hi; d++) ticks.push(Math.pow(10, d));
  return ticks;
}

function xTicks(ext: Extent): number[] {
  const raw = ext.kMax / 5;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => ext.kMax / s <= 6) ?? mag * 10;
  const ticks: number[] = [];
  for (let v = 0; v <= ext.kMax + 1e-9; v += step) ticks.push(Math.round(v));
  return ticks;
}

function fmtTick(v: number): string {
  if (v === 0) return "0";
  const mag = Math.log10(Math.abs(v));
  if (mag >= -3 && mag < 6) return String(v);
  return v.toExponential(0).replace("+", "");
}

function polyline(pts: Array<[number, number]>, style: string): string {
  const coords = pts.map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`).join(" ");
  return `<polyline fill="none" ${style} points="${coords}"/>`;
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderFigure(spec: FigureSpec): string {
  if (spec.series.length === 0) {
    throw new Error("at least one trace series is required");
  }
  const ext = extent(spec);
  const x = xScale(ext);
  const y = yScale(ext);
  const parts: string[] = [];

  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
  );
  if (spec.title) {
    parts.push(
      `<text x="${WIDTH / 2}" y="28" text-anchor="middle" font-size="18">${esc(spec.title)}</text>`,
    );
  }

  const plotBottom = HEIGHT - MARGIN.bottom;
  for (const tick of yTicks(ext)) {
    const ty = y(tick);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${ty.toFixed(2)}" x2="${WIDTH - MARGIN.right}" ` +
        `y2="${ty.toFixed(2)}" stroke="#dddddd" stroke-width="1"/>`,
      `<text x="${MARGIN.left - 8}" y="${(ty + 4).toFixed(2)}" text-anchor="end" ` +
        `font-size="12">${tick.toExponential(0).replace("+", "")}</text>`,
    );
  }
  for (const tick of xTicks(ext)) {
    const tx = x(tick);
    parts.push(
      `<line x1="${tx.toFixed(2)}" y1="${MARGIN.top}" x2="${tx.toFixed(2)}" ` +
        `y2="${plotBottom}" stroke="#eeeeee" stroke-width="1"/>`,
      `<text x="${tx.toFixed(2)}" y="${plotBottom + 20}" text-anchor="middle" ` +
        `font-size="12">${fmtTick(tick)}</text>`,
    );
  }
  parts.push(
    `<line x1="${MARGIN.left}" y1="${plotBottom}" x2="${WIDTH - MARGIN.right}" ` +
      `y2="${plotBottom}" stroke="black" stroke-width="1.5"/>`,
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" ` +
      `y2="${plotBottom}" stroke="black" stroke-width="1.5"/>`,
    `<text x="${(MARGIN.left + WIDTH - MARGIN.right) / 2}" y="${HEIGHT - 14}" ` +
      `text-anchor="middle" font-size="14">iteration k</text>`,
    `<text x="22" y="${(MARGIN.top + plotBottom) / 2}" text-anchor="middle" font-size="14" ` +
      `transform="rotate(-90 22 ${(MARGIN.top + plotBottom) / 2})">optimality gap f(y_k) - f*</text>`,
  );

  if (spec.bound) {
    const pts = spec.bound
      .filter((b) => b.boundN2 > 0)
      .map((b): [number, number] => [x(b.n), y(b.boundN2)]);
    if (pts.length > 0) {
      parts.push(
        polyline(pts, `stroke="${BOUND_COLOR}" stroke-width="2" stroke-dasharray="8 5"`),
      );
    }
  }
  spec.series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length]!;
    const pts = usable(s.points).map((p): [number, number] => [x(p.k), y(p.gap)]);
    if (pts.length === 0) {
      throw new Error(`series ${JSON.stringify(s.label)} has no positive finite gap values`);
    }
    parts.push(polyline(pts, `stroke="${color}" stroke-width="2"`));
  });

  const legendX = WIDTH - MARGIN.right - 220;
  let legendY = MARGIN.top + 10;
  spec.series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length]!;
    parts.push(
      `<line x1="${legendX}" y1="${legendY}" x2="${legendX + 28}" y2="${legendY}" ` +
        `stroke="${color}" stroke-width="2"/>`,
      `<text x="${legendX + 36}" y="${legendY + 4}" font-size="13">${esc(s.label)}</text>`,
    );
    legendY += 20;
  });
  if (spec.bound && spec.bound.some((b) => b.boundN2 > 0)) {
    parts.push(
      `<line x1="${legendX}" y1="${legendY}" x2="${legendX + 28}" y2="${legendY}" ` +
        `stroke="${BOUND_COLOR}" stroke-width="2" stroke-dasharray="8 5"/>`,
      `<text x="${legendX + 36}" y="${legendY + 4}" font-size="13">theoretical bound</text>`,
    );
  }

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
