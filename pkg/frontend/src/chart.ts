/** Log-log line chart with symmetric error bars, rendered onto a Raster.
 *
 * The layout step is separated from pixel drawing so tests can assert that
 * plotted values equal the CSV values exactly.
 */

import { BLACK, Color, GREY, Raster } from "./raster.js";

export interface Point {
  x: number;
  y: number;
  ci: number; // symmetric half-width around y; 0 draws a zero-height bar
}

export interface Series {
  label: string;
  points: Point[]; // sorted by x
}

export interface Tick {
  value: number;
  label: string;
}

export interface ChartSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  xTicks: Tick[];
  width?: number;
  height?: number;
}

export const PALETTE: Color[] = [
  [31, 119, 180, 255],
  [214, 39, 40, 255],
  [44, 160, 44, 255],
  [255, 127, 14, 255],
  [148, 103, 189, 255],
  [140, 86, 75, 255],
];

const MARGIN = { left: 90, right: 24, top: 40, bottom: 64 };

function log10(v: number): number {
  return Math.log(v) / Math.LN10;
}

/** Decade ticks covering [lo, hi], labelled 1e<k>. */
export function decadeTicks(lo: number, hi: number): Tick[] {
  const ticks: Tick[] = [];
  for (let k = Math.ceil(log10(lo) - 1e-9); k <= Math.floor(log10(hi) + 1e-9); k++) {
    ticks.push({ value: 10 ** k, label: `1e${k}` });
  }
  return ticks;
}

class LogScale {
  private readonly lo: number;
  private readonly span: number;
  constructor(
    min: number,
    max: number,
    private readonly pix0: number,
    private readonly pix1: number,
  ) {
    if (!(min > 0) || !(max > 0)) throw new Error("log scale needs positive data");
    if (min === max) {
      // single value: pad half a decade each way so the point sits centred
      min /= Math.sqrt(10);
      max *= Math.sqrt(10);
    }
    this.lo = Math.log(min);
    this.span = Math.log(max) - this.lo;
  }

  toPixel(v: number): number {
    const f = (Math.log(v) - this.lo) / this.span;
    return this.pix0 + f * (this.pix1 - this.pix0);
  }

  get min(): number {
    return Math.exp(this.lo);
  }

  get max(): number {
    return Math.exp(this.lo + this.span);
  }
}

function dataRange(series: Series[], pick: (p: Point) => number): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const s of series) {
    for (const p of s.points) {
      const v = pick(p);
      lo = Math.min(lo, v);
      hi = Math.max(hi, v);
    }
  }
  if (!(lo <= hi)) throw new Error("no data points to plot");
  return [lo, hi];
}

export function renderChart(spec: ChartSpec): Raster {
  const width = spec.width ?? 900;
  const height = spec.height ?? 600;
  const raster = new Raster(width, height);
  const plotX0 = MARGIN.left;
  const plotX1 = width - MARGIN.right;
  const plotY0 = MARGIN.top;
  const plotY1 = height - MARGIN.bottom;

  const [xLo, xHi] = dataRange(spec.series, (p) => p.x);
  const [yLoRaw, yHiRaw] = dataRange(spec.series, (p) => p.y);
  // include error-bar extents where they stay positive (log axis)
  let yLo = yLoRaw;
  let yHi = yHiRaw;
  for (const s of spec.series) {
    for (const p of s.points) {
      if (p.y - p.ci > 0) yLo = Math.min(yLo, p.y - p.ci);
      yHi = Math.max(yHi, p.y + p.ci);
    }
  }

  const xs = new LogScale(xLo, xHi, plotX0, plotX1);
  const ys = new LogScale(yLo, yHi, plotY1, plotY0); // pixel y grows downward

  // frame and grid
  for (const tick of spec.xTicks) {
    if (tick.value < xs.min || tick.value > xs.max) continue;
    const px = Math.round(xs.toPixel(tick.value));
    raster.vline(px, plotY0, plotY1, GREY);
    raster.vline(px, plotY1, plotY1 + 4, BLACK);
    raster.text(px - raster.textWidth(tick.label) / 2, plotY1 + 8, tick.label, BLACK);
  }
  for (const tick of decadeTicks(ys.min, ys.max)) {
    const py = Math.round(ys.toPixel(tick.value));
    raster.hline(plotX0, plotX1, py, GREY);
    raster.hline(plotX0 - 4, plotX0, py, BLACK);
    raster.text(plotX0 - 8 - raster.textWidth(tick.label), py - 7, tick.label, BLACK);
  }
  raster.hline(plotX0, plotX1, plotY1, BLACK);
  raster.hline(plotX0, plotX1, plotY0, BLACK);
  raster.vline(plotX0, plotY0, plotY1, BLACK);
  raster.vline(plotX1, plotY0, plotY1, BLACK);

  // titles
  raster.text((width - raster.textWidth(spec.title)) / 2, 12, spec.title, BLACK);
  raster.text((width - raster.textWidth(spec.xLabel)) / 2, height - 26, spec.xLabel, BLACK);
  // y label, horizontal in the top-left margin
  raster.text(8, plotY0 - 24, spec.yLabel, BLACK);

  // series
  spec.series.forEach((s, idx) => {
    const color = PALETTE[idx % PALETTE.length];
    let prev: [number, number] | null = null;
    for (const p of s.points) {
      const px = xs.toPixel(p.x);
      const py = ys.toPixel(p.y);
      // error bar: clamp the lower end to the plot bottom on a log axis
      const upper = ys.toPixel(p.y + p.ci);
      const lower = p.y - p.ci > 0 ? ys.toPixel(p.y - p.ci) : plotY1;
      if (p.ci > 0) {
        raster.vline(Math.round(px), Math.round(upper), Math.round(lower), color);
        raster.hline(Math.round(px) - 3, Math.round(px) + 3, Math.round(upper), color);
        raster.hline(Math.round(px) - 3, Math.round(px) + 3, Math.round(lower), color);
      }
      raster.marker(px, py, 2, color);
      if (prev !== null) {
        raster.line(prev[0], prev[1], px, py, color);
      }
      prev = [px, py];
    }
  });

  // legend, top-right inside the frame; single-point series show marker only
  let ly = plotY0 + 8;
  spec.series.forEach((s, idx) => {
    const color = PALETTE[idx % PALETTE.length];
    const lx = plotX1 - 150;
    raster.marker(lx, ly + 6, 2, color);
    if (s.points.length > 1) {
      raster.hline(lx - 8, lx + 8, ly + 6, color);
    }
    raster.text(lx + 14, ly, s.label, BLACK);
    ly += 20;
  });

  return raster;
}
