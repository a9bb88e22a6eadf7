/**
 * Renderer-independent figure model. Plot builders emit a flat item list;
 * svg.ts and png.ts draw the same scene, so the two formats cannot drift.
 */

import { InputError } from "./csv.js";

export interface ClipRect {
  x: number;
  y: number;
  w: number;
  h: number;
}

export type SceneItem =
  | {
      kind: "line";
      x1: number;
      y1: number;
      x2: number;
      y2: number;
      color: string;
      width: number;
      dash?: string;
    }
  | {
      kind: "polyline";
      pts: Array<[number, number]>;
      color: string;
      width: number;
      dash?: string;
      clip?: ClipRect;
    }
  | {
      kind: "rect";
      x: number;
      y: number;
      w: number;
      h: number;
      fill: string;
      opacity?: number;
      cls?: string;
    }
  | { kind: "circle"; cx: number; cy: number; r: number; fill: string; clip?: ClipRect }
  | {
      kind: "text";
      x: number;
      y: number;
      text: string;
      size: number;
      color: string;
      anchor: "start" | "middle" | "end";
      rotate?: -90 | 90;
    };

export interface Scene {
  width: number;
  height: number;
  items: SceneItem[];
}

export const PALETTE = ["#4361ee", "#e63946", "#2d6a4f", "#f3722c", "#7209b7", "#577590"];

export interface Series {
  xs: number[];
  ys: number[];
  color: string;
  label: string;
  width?: number;
  dash?: string;
  markers?: boolean;
}

export interface PanelSpec {
  x: number;
  y: number;
  w: number;
  h: number;
  title?: string;
  xLabel?: string;
  yLabel?: string;
  logX?: boolean;
  logY?: boolean;
  series: Series[];
  /** tick positions in data space; defaults to nice ticks over the range */
  xTicks?: number[];
  legend?: boolean;
}

export function niceTicks(min: number, max: number, count: number): { ticks: number[]; step: number } {
  const range = max - min || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => s >= rough) ?? rough;
  const ticks: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return { ticks, step };
}

function linearLabel(v: number, step: number): string {
  const decimals = Math.max(0, -Math.floor(Math.log10(step) + 1e-9));
  return v.toFixed(Math.min(decimals, 6));
}

/** one tick per decade, labelled 1e<k> */
function decadeTicks(min: number, max: number): number[] {
  const ticks: number[] = [];
  for (let k = Math.ceil(min - 1e-9); k <= Math.floor(max + 1e-9); k++) ticks.push(k);
  if (ticks.length < 2) ticks.push(Math.floor(min), Math.ceil(max));
  return [...new Set(ticks)].sort((a, b) => a - b);
}

const ML = 58;
const MR = 12;
const MT = 24;
const MB = 42;

/**
 * Axes, grid, series, and an optional in-panel legend for one panel placed
 * at (x, y) with outer size w x h. Log axes work on log10-mapped values;
 * nonpositive data on a log axis is rejected up front.
 */
export function buildPanel(spec: PanelSpec): SceneItem[] {
  const items: SceneItem[] = [];
  const px = spec.x + ML;
  const py = spec.y + MT;
  const pw = spec.w - ML - MR;
  const ph = spec.h - MT - MB;

  const mapX = (v: number) => (spec.logX ? Math.log10(v) : v);
  const mapY = (v: number) => (spec.logY ? Math.log10(v) : v);
  for (const s of spec.series) {
    if (spec.logX && s.xs.some((v) => v <= 0)) {
      throw new InputError(`log x axis needs positive values ('${s.label}')`);
    }
    if (spec.logY && s.ys.some((v) => v <= 0)) {
      throw new InputError(`log y axis needs positive values ('${s.label}')`);
    }
  }

  const xsAll = spec.series.flatMap((s) => s.xs.map(mapX));
  const ysAll = spec.series.flatMap((s) => s.ys.map(mapY));
  let x0 = Math.min(...xsAll);
  let x1 = Math.max(...xsAll);
  let y0 = Math.min(...ysAll);
  let y1 = Math.max(...ysAll);
  const padX = (x1 - x0 || 1) * 0.04;
  const padY = (y1 - y0 || 1) * 0.06;
  x0 -= padX;
  x1 += padX;
  y0 -= padY;
  y1 += padY;

  const xOf = (v: number) => px + ((mapX(v) - x0) / (x1 - x0)) * pw;
  const yOf = (v: number) => py + ph - ((mapY(v) - y0) / (y1 - y0)) * ph;
  const clip: ClipRect = { x: px, y: py, w: pw, h: ph };

  // ticks
  let xTickVals: number[];
  let xLabelOf: (v: number) => string;
  if (spec.xTicks) {
    xTickVals = spec.xTicks;
    xLabelOf = (v) => String(v);
  } else if (spec.logX) {
    xTickVals = decadeTicks(x0, x1).map((k) => Math.pow(10, k));
    xLabelOf = (v) => `1e${Math.round(Math.log10(v))}`;
  } else {
    const t = niceTicks(x0, x1, 6);
    xTickVals = t.ticks;
    xLabelOf = (v) => linearLabel(v, t.step);
  }
  let yTickVals: number[];
  let yLabelOf: (v: number) => string;
  if (spec.logY) {
    yTickVals = decadeTicks(y0, y1).map((k) => Math.pow(10, k));
    yLabelOf = (v) => `1e${Math.round(Math.log10(v))}`;
  } else {
    const t = niceTicks(y0, y1, 5);
    yTickVals = t.ticks;
    yLabelOf = (v) => linearLabel(v, t.step);
  }

  // frame marker first so renderers and tests can count panels
  items.push({ kind: "rect", x: px, y: py, w: pw, h: ph, fill: "none", cls: "panel-frame" });

  for (const v of yTickVals) {
    if (mapY(v) < y0 || mapY(v) > y1) continue;
    const yy = yOf(v);
    items.push({ kind: "line", x1: px, y1: yy, x2: px + pw, y2: yy, color: "#eee", width: 0.5 });
    items.push({ kind: "line", x1: px - 3, y1: yy, x2: px, y2: yy, color: "#333", width: 0.5 });
    items.push({
      kind: "text", x: px - 5, y: yy + 2.5, text: yLabelOf(v), size: 7, color: "#555", anchor: "end",
    });
  }
  for (const v of xTickVals) {
    if (mapX(v) < x0 || mapX(v) > x1) continue;
    const xx = xOf(v);
    items.push({ kind: "line", x1: xx, y1: py, x2: xx, y2: py + ph, color: "#eee", width: 0.5 });
    items.push({ kind: "line", x1: xx, y1: py + ph, x2: xx, y2: py + ph + 3, color: "#333", width: 0.5 });
    items.push({
      kind: "text", x: xx, y: py + ph + 12, text: xLabelOf(v), size: 7, color: "#555", anchor: "middle",
    });
  }

  items.push({ kind: "line", x1: px, y1: py, x2: px, y2: py + ph, color: "#333", width: 0.8 });
  items.push({ kind: "line", x1: px, y1: py + ph, x2: px + pw, y2: py + ph, color: "#333", width: 0.8 });

  if (spec.title) {
    items.push({
      kind: "text", x: px, y: spec.y + 14, text: spec.title, size: 9, color: "#222", anchor: "start",
    });
  }
  if (spec.xLabel) {
    items.push({
      kind: "text", x: px + pw / 2, y: spec.y + spec.h - 8, text: spec.xLabel, size: 8,
      color: "#444", anchor: "middle",
    });
  }
  if (spec.yLabel) {
    items.push({
      kind: "text", x: spec.x + 12, y: py + ph / 2, text: spec.yLabel, size: 8,
      color: "#444", anchor: "middle", rotate: -90,
    });
  }

  for (const s of spec.series) {
    const pts = s.xs.map((vx, i) => [xOf(vx), yOf(s.ys[i])] as [number, number]);
    items.push({ kind: "polyline", pts, color: s.color, width: s.width ?? 1.2, dash: s.dash, clip });
    if (s.markers) {
      for (const [cx, cy] of pts) {
        items.push({ kind: "circle", cx, cy, r: 2.4, fill: s.color, clip });
      }
    }
  }

  if (spec.legend) {
    const labels = spec.series.map((s) => s.label);
    const boxW = Math.max(...labels.map((l) => l.length)) * 4.4 + 28;
    const boxH = labels.length * 12 + 6;
    const bx = px + pw - boxW - 4;
    const by = py + 4;
    items.push({ kind: "rect", x: bx, y: by, w: boxW, h: boxH, fill: "#fff", opacity: 0.85 });
    spec.series.forEach((s, i) => {
      const ly = by + 9 + i * 12;
      items.push({
        kind: "line", x1: bx + 4, y1: ly, x2: bx + 18, y2: ly, color: s.color,
        width: s.width ?? 1.2, dash: s.dash,
      });
      items.push({
        kind: "text", x: bx + 22, y: ly + 2.5, text: s.label, size: 7, color: "#333", anchor: "start",
      });
    });
  }

  return items;
}

/** horizontal legend strip for figures whose panels share one series set */
export function buildLegendStrip(
  entries: Array<{ label: string; color: string; dash?: string }>,
  x: number,
  y: number
): SceneItem[] {
  const items: SceneItem[] = [];
  let at = x;
  for (const e of entries) {
    items.push({ kind: "line", x1: at, y1: y, x2: at + 16, y2: y, color: e.color, width: 1.6, dash: e.dash });
    items.push({
      kind: "text", x: at + 20, y: y + 2.5, text: e.label, size: 8, color: "#333", anchor: "start",
    });
    at += 26 + e.label.length * 4.8;
  }
  return items;
}
