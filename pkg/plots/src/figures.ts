/**
 * Figure builders.  Every builder consumes parsed CSV tables, draws onto a
 * Surface, and stays free of wall-clock, locale, or random state so that a
 * given input renders to identical bytes every time.
 */

import { numericColumn, requireColumns, SchemaError, stringColumn, Table } from "./csv.js";
import { fmtNum, linearTicks, logTicks, makeScale, Scale } from "./scale.js";
import { CHAR_H, CHAR_W, Color, Surface } from "./surface.js";

export const WIDTH = 800;
export const HEIGHT = 560;

const BLACK: Color = [0, 0, 0];
const GRAY: Color = [200, 200, 200];
const DARK_GRAY: Color = [90, 90, 90];
export const PALETTE: Color[] = [
  [31, 119, 180],
  [214, 39, 40],
  [44, 160, 44],
  [148, 103, 189],
  [255, 127, 14],
  [23, 190, 207],
  [140, 86, 75],
  [127, 127, 127],
];

const MARGIN = { left: 86, right: 30, top: 36, bottom: 58 };

export interface FigureOptions {
  title?: string;
  /** cdf only: plain reliability on a linear axis instead of log outage. */
  linearY?: boolean;
  /** cdf/density: linear x axis instead of log. */
  linearX?: boolean;
}

interface FrameSpec {
  x: Scale;
  y: Scale;
  xTicks: number[];
  yTicks: number[];
  xLabel: string;
  yLabel: string;
  title: string;
  xFmt?: (v: number) => string;
  yFmt?: (v: number) => string;
}

function plotArea() {
  return {
    left: MARGIN.left,
    right: WIDTH - MARGIN.right,
    top: MARGIN.top,
    bottom: HEIGHT - MARGIN.bottom,
  };
}

function drawFrame(s: Surface, spec: FrameSpec): void {
  const { left, right, top, bottom } = plotArea();
  const xFmt = spec.xFmt ?? fmtNum;
  const yFmt = spec.yFmt ?? fmtNum;
  for (const tick of spec.xTicks) {
    const px = spec.x(tick);
    s.line(px, top, px, bottom, GRAY);
    s.line(px, bottom, px, bottom + 4, BLACK);
    s.text(px, bottom + 6 + CHAR_H, xFmt(tick), BLACK, "middle");
  }
  for (const tick of spec.yTicks) {
    const py = spec.y(tick);
    s.line(left, py, right, py, GRAY);
    s.line(left - 4, py, left, py, BLACK);
    s.text(left - 8, py + CHAR_H / 2 - 2, yFmt(tick), BLACK, "end");
  }
  s.strokeRect(left, top, right - left, bottom - top, BLACK);
  s.text((left + right) / 2, HEIGHT - 12, spec.xLabel, BLACK, "middle");
  s.text(8 + CHAR_W, top - 10, spec.yLabel, BLACK, "start");
  s.text((left + right) / 2, 22, spec.title, BLACK, "middle");
}

function drawLegend(s: Surface, entries: Array<[string, Color]>, extra?: string): void {
  const { left, top } = plotArea();
  let y = top + 16;
  for (const [label, color] of entries) {
    s.line(left + 10, y - 4, left + 34, y - 4, color, 2);
    s.text(left + 40, y, label, BLACK);
    y += CHAR_H + 6;
  }
  if (extra) {
    s.text(left + 10, y, extra, DARK_GRAY);
    y += CHAR_H + 6;
  }
}

function seriesName(path: string): string {
  const base = path.split("/").pop() ?? path;
  return base.replace(/\.csv$/i, "");
}

// ---------------------------------------------------------------------------
// reliability step curves (latency_cdf / *_reliability / pd_* files)

export function figCdf(tables: Table[], opts: FigureOptions, s: Surface): void {
  if (tables.length === 0) throw new SchemaError("cdf figure needs at least one CSV");
  const series: Array<{ name: string; deadlines: number[]; reliability: number[]; n: number }> = [];
  for (const table of tables) {
    const index = requireColumns(table, ["deadline_s", "reliability", "n_samples", "n_drops"]);
    const deadlines = numericColumn(table, index, "deadline_s");
    const reliability = numericColumn(table, index, "reliability");
    const n = numericColumn(table, index, "n_samples")[0] ?? 1;
    const order = deadlines.map((_, i) => i).sort((a, b) => deadlines[a] - deadlines[b]);
    series.push({
      name: seriesName(table.path),
      deadlines: order.map((i) => deadlines[i]),
      reliability: order.map((i) => reliability[i]),
      n,
    });
  }
  const { left, right, top, bottom } = plotArea();
  const allDeadlines = series.flatMap((sr) => sr.deadlines).filter((d) => d > 0);
  const xLog = !opts.linearX && allDeadlines.length > 0;
  const xMin = xLog ? Math.min(...allDeadlines) : Math.min(0, ...series.flatMap((sr) => sr.deadlines));
  const xMax = Math.max(...series.flatMap((sr) => sr.deadlines));
  const x = makeScale(xMin, xMax, left, right, xLog);

  let y: Scale;
  let yTicks: number[];
  let yFmt: ((v: number) => string) | undefined;
  if (opts.linearY) {
    y = makeScale(0, 1, bottom, top);
    yTicks = linearTicks(0, 1, 5);
  } else {
    // URLLC convention: log-scaled outage, reliability grows upward
    const floors = series.map((sr) => 0.5 / Math.max(sr.n, 2));
    const outages = series.flatMap((sr, k) =>
      sr.reliability.map((r) => Math.max(1 - r, floors[k]))
    );
    const lo = Math.min(...outages);
    const hi = Math.max(...outages, lo * 10);
    y = makeScale(lo, Math.min(1, hi), bottom, top, true);
    // note the inversion: smaller outage (higher reliability) plots higher
    const base = y;
    y = Object.assign((v: number) => bottom + top - base(v), {
      min: base.min,
      max: base.max,
      log: true,
    });
    yTicks = logTicks(y.min, y.max);
    yFmt = (outage: number) => {
      const k = Math.round(-Math.log10(outage));
      if (k <= 0) return "0";
      return "0." + "9".repeat(k);
    };
  }
  drawFrame(s, {
    x,
    y,
    xTicks: xLog ? logTicks(x.min, x.max) : linearTicks(x.min, x.max),
    yTicks,
    xLabel: "deadline [s]",
    yLabel: opts.linearY ? "reliability" : "reliability (log outage)",
    title: opts.title ?? "latency-reliability",
    yFmt,
  });

  series.forEach((sr, k) => {
    const color = PALETTE[k % PALETTE.length];
    const floor = 0.5 / Math.max(sr.n, 2);
    const points: Array<[number, number]> = [];
    let previous: number | null = null;
    for (let i = 0; i < sr.deadlines.length; i++) {
      const value = opts.linearY
        ? sr.reliability[i]
        : Math.max(1 - sr.reliability[i], floor);
      const px = x(Math.max(sr.deadlines[i], x.min));
      const py = y(value);
      if (previous !== null) points.push([px, previous]); // step: hold then jump
      points.push([px, py]);
      previous = py;
    }
    s.polyline(points, color, 2);
  });
  drawLegend(s, series.map((sr, k) => [sr.name, PALETTE[k % PALETTE.length]]));
}

// ---------------------------------------------------------------------------
// SER gain heat map

function divergingColor(t: number): Color {
  // t in [-1, 1]: blue (combining wins) .. white .. red (energy detection wins)
  const blue: Color = [33, 102, 172];
  const white: Color = [255, 255, 255];
  const red: Color = [178, 24, 43];
  const mix = (a: Color, b: Color, u: number): Color => [
    Math.round(a[0] + (b[0] - a[0]) * u),
    Math.round(a[1] + (b[1] - a[1]) * u),
    Math.round(a[2] + (b[2] - a[2]) * u),
  ];
  return t < 0 ? mix(white, blue, Math.min(1, -t)) : mix(white, red, Math.min(1, t));
}

export function figHeatmap(tables: Table[], opts: FigureOptions, s: Surface): void {
  if (tables.length !== 1) throw new SchemaError("heatmap figure takes exactly one CSV");
  const table = tables[0];
  const index = requireColumns(table, [
    "snr_db",
    "sigma",
    "ser_mrc",
    "ser_ed",
    "gain_log10",
    "trials",
    "censored",
  ]);
  const snr = numericColumn(table, index, "snr_db");
  const sigma = numericColumn(table, index, "sigma");
  const gain = numericColumn(table, index, "gain_log10");
  const censored = numericColumn(table, index, "censored");
  const trials = numericColumn(table, index, "trials")[0] ?? 0;

  const snrValues = [...new Set(snr)].sort((a, b) => a - b);
  const sigmaValues = [...new Set(sigma)].sort((a, b) => a - b);
  const { left, top, bottom } = plotArea();
  const right = plotArea().right - 70; // leave room for the colour bar
  const cellW = (right - left) / sigmaValues.length;
  const cellH = (bottom - top) / snrValues.length;
  const maxAbs = Math.max(1, ...gain.map((g) => Math.abs(g)));

  for (let r = 0; r < snr.length; r++) {
    const col = sigmaValues.indexOf(sigma[r]);
    const row = snrValues.indexOf(snr[r]);
    const x0 = left + col * cellW;
    const y0 = bottom - (row + 1) * cellH;
    s.rect(x0, y0, cellW, cellH, divergingColor(gain[r] / maxAbs));
    if (censored[r] !== 0) {
      s.hatchRect(x0, y0, cellW, cellH, DARK_GRAY, 7);
    }
  }
  for (let c = 0; c <= sigmaValues.length; c++) {
    s.line(left + c * cellW, top, left + c * cellW, bottom, BLACK);
  }
  for (let r = 0; r <= snrValues.length; r++) {
    s.line(left, top + r * cellH, right, top + r * cellH, BLACK);
  }
  sigmaValues.forEach((value, c) => {
    s.text(left + (c + 0.5) * cellW, bottom + 6 + CHAR_H, fmtNum(value), BLACK, "middle");
  });
  snrValues.forEach((value, r) => {
    s.text(left - 8, bottom - (r + 0.5) * cellH + CHAR_H / 2 - 2, fmtNum(value), BLACK, "end");
  });
  s.text((left + right) / 2, HEIGHT - 12, "mobility index sigma", BLACK, "middle");
  s.text(8 + CHAR_W, top - 10, "snr [db]", BLACK, "start");
  s.text((left + right) / 2, 22, opts.title ?? "ser gain log10(mrc/ed)", BLACK, "middle");

  // colour bar
  const barX = right + 24;
  const bands = 64;
  for (let b = 0; b < bands; b++) {
    const t = 1 - (2 * b) / (bands - 1);
    const y0 = top + (b * (bottom - top)) / bands;
    s.rect(barX, y0, 16, (bottom - top) / bands + 1, divergingColor(t));
  }
  s.strokeRect(barX, top, 16, bottom - top, BLACK);
  s.text(barX + 20, top + CHAR_H, fmtNum(maxAbs), BLACK);
  s.text(barX + 20, (top + bottom) / 2 + CHAR_H / 2, "0", BLACK);
  s.text(barX + 20, bottom, fmtNum(-maxAbs), BLACK);
  if (censored.some((c) => c !== 0)) {
    s.text(
      left + 10,
      bottom + 30 + CHAR_H,
      `hatched = censored (ser floor 1/${fmtNum(trials)})`,
      DARK_GRAY
    );
  }
}

// ---------------------------------------------------------------------------
// frame duration vs device energy trade-off

export function figTradeoff(tables: Table[], opts: FigureOptions, s: Surface): void {
  if (tables.length !== 1) throw new SchemaError("tradeoff figure takes exactly one CSV");
  const table = tables[0];
  const index = requireColumns(table, [
    "grouping_id",
    "total_cu",
    "max_device_energy_cu",
    "min_device_energy_cu",
  ]);
  const total = numericColumn(table, index, "total_cu");
  const maxEnergy = numericColumn(table, index, "max_device_energy_cu");
  const minEnergy = numericColumn(table, index, "min_device_energy_cu");

  const { left, right, top, bottom } = plotArea();
  const xMin = Math.min(...total);
  const xMax = Math.max(...total);
  const yMin = Math.min(...minEnergy);
  const yMax = Math.max(...maxEnergy);
  const pad = (yMax - yMin) * 0.08 + 1;
  const x = makeScale(xMin - (xMax - xMin) * 0.05 - 1, xMax + (xMax - xMin) * 0.05 + 1, left, right);
  const y = makeScale(yMin - pad, yMax + pad, bottom, top);
  drawFrame(s, {
    x,
    y,
    xTicks: linearTicks(x.min, x.max),
    yTicks: linearTicks(y.min, y.max),
    xLabel: "frame length [channel uses]",
    yLabel: "device energy [received cu]",
    title: opts.title ?? "frame duration vs device energy",
  });

  const order = total.map((_, i) => i).sort((a, b) => total[a] - total[b] || maxEnergy[a] - maxEnergy[b]);
  s.polyline(order.map((i) => [x(total[i]), y(maxEnergy[i])] as [number, number]), PALETTE[0], 1);
  for (const i of order) {
    s.marker(x(total[i]), y(maxEnergy[i]), PALETTE[0], "plus");
    s.marker(x(total[i]), y(minEnergy[i]), PALETTE[1], "cross");
  }
  drawLegend(s, [
    ["max device energy", PALETTE[0]],
    ["min device energy", PALETTE[1]],
  ]);
}

// ---------------------------------------------------------------------------
// latency vs base-station density

export function figDensity(tables: Table[], opts: FigureOptions, s: Surface): void {
  if (tables.length !== 1) throw new SchemaError("density figure takes exactly one CSV");
  const table = tables[0];
  const index = requireColumns(table, [
    "lambda_bs",
    "mode",
    "mean_latency_s",
    "ci95_low",
    "ci95_high",
    "replications",
  ]);
  const lambda = numericColumn(table, index, "lambda_bs");
  const mode = stringColumn(table, index, "mode");
  const mean = numericColumn(table, index, "mean_latency_s");
  const lo = numericColumn(table, index, "ci95_low");
  const hi = numericColumn(table, index, "ci95_high");

  const { left, right, top, bottom } = plotArea();
  const x = makeScale(Math.min(...lambda), Math.max(...lambda), left, right, !opts.linearX);
  const y = makeScale(0, Math.max(...hi) * 1.08, bottom, top);
  drawFrame(s, {
    x,
    y,
    xTicks: opts.linearX ? linearTicks(x.min, x.max) : logTicks(x.min, x.max),
    yTicks: linearTicks(y.min, y.max),
    xLabel: "bs density [per unit area]",
    yLabel: "mean latency [s]",
    title: opts.title ?? "densification",
  });

  const modes = [...new Set(mode)];
  modes.forEach((m, k) => {
    const color = PALETTE[k % PALETTE.length];
    const idx = mode
      .map((v, i) => (v === m ? i : -1))
      .filter((i) => i >= 0)
      .sort((a, b) => lambda[a] - lambda[b]);
    s.polyline(idx.map((i) => [x(lambda[i]), y(mean[i])] as [number, number]), color, 2);
    for (const i of idx) {
      const px = x(lambda[i]);
      s.line(px, y(lo[i]), px, y(hi[i]), color);
      s.line(px - 3, y(lo[i]), px + 3, y(lo[i]), color);
      s.line(px - 3, y(hi[i]), px + 3, y(hi[i]), color);
      s.marker(px, y(mean[i]), color, "dot");
    }
  });
  drawLegend(s, modes.map((m, k) => [m, PALETTE[k % PALETTE.length]]));
}

// ---------------------------------------------------------------------------
// mini-slot arrival scatter

export function figArrivals(tables: Table[], opts: FigureOptions, s: Surface): void {
  if (tables.length !== 1) throw new SchemaError("arrivals figure takes exactly one CSV");
  const table = tables[0];
  const index = requireColumns(table, [
    "arrival_time_s",
    "size_symbols",
    "latency_s",
    "dropped",
  ]);
  const times = numericColumn(table, index, "arrival_time_s");
  const latencyRaw = stringColumn(table, index, "latency_s");
  const dropped = numericColumn(table, index, "dropped");

  // final summary row: arrival_time_s = -1, latency_s = eMBB loss fraction
  let lossNote = "";
  const rows: Array<{ t: number; latency: number | null }> = [];
  for (let i = 0; i < times.length; i++) {
    if (times[i] < 0) {
      lossNote = `embb loss fraction: ${fmtNum(Number(latencyRaw[i]))}`;
      continue;
    }
    rows.push({
      t: times[i],
      latency: dropped[i] !== 0 ? null : Number(latencyRaw[i]),
    });
  }
  if (rows.length === 0) throw new SchemaError(`${table.path}: no arrivals to plot`);

  const { left, right, top, bottom } = plotArea();
  const delivered = rows.filter((r) => r.latency !== null).map((r) => r.latency!) ;
  const yMax = delivered.length ? Math.max(...delivered) : 1;
  const x = makeScale(0, Math.max(...rows.map((r) => r.t)), left, right);
  const y = makeScale(0, yMax * 1.15 + 1e-9, bottom, top);
  drawFrame(s, {
    x,
    y,
    xTicks: linearTicks(x.min, x.max),
    yTicks: linearTicks(y.min, y.max),
    xLabel: "arrival time [s]",
    yLabel: "latency [s]",
    title: opts.title ?? "mini-slot preemption latency",
  });
  for (const row of rows) {
    if (row.latency === null) {
      s.marker(x(row.t), top + 8, PALETTE[1], "cross"); // drops pinned to the top band
    } else {
      s.marker(x(row.t), y(row.latency), PALETTE[0], "plus");
    }
  }
  const entries: Array<[string, Color]> = [["delivered", PALETTE[0]]];
  if (rows.some((r) => r.latency === null)) entries.push(["dropped", PALETTE[1]]);
  drawLegend(s, entries, lossNote || undefined);
}

export const FIGURES: Record<
  string,
  (tables: Table[], opts: FigureOptions, s: Surface) => void
> = {
  cdf: figCdf,
  heatmap: figHeatmap,
  tradeoff: figTradeoff,
  density: figDensity,
  arrivals: figArrivals,
};
