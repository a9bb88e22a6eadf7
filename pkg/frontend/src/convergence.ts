/**
 * Log-log convergence figure from the solver's error table. The headline
 * number is the fitted slope per scheme: least squares of ln(L1) against
 * ln(N) over the three finest mesh sizes, printed in the legend.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { ConvergenceRow, InputError, parseConvergenceCsv } from "./csv.js";
import { buildPanel, PALETTE, Scene, Series } from "./scene.js";
import { renderPng } from "./png.js";
import { renderSvg } from "./svg.js";

export interface SchemeFit {
  slope: number;
  /** (N, L1) pairs actually plotted, N ascending */
  points: Array<[number, number]>;
  wallSeconds: number[];
}

export function leastSquaresSlope(pts: Array<[number, number]>): number {
  const n = pts.length;
  const mx = pts.reduce((a, [x]) => a + x, 0) / n;
  const my = pts.reduce((a, [, y]) => a + y, 0) / n;
  let sxx = 0;
  let sxy = 0;
  for (const [x, y] of pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  return sxy / sxx;
}

export function fitSlopes(rows: ConvergenceRow[], variable: string): Map<string, SchemeFit> {
  const byScheme = new Map<string, ConvergenceRow[]>();
  for (const r of rows) {
    if (r.variable !== variable) continue;
    const list = byScheme.get(r.scheme) ?? [];
    list.push(r);
    byScheme.set(r.scheme, list);
  }
  if (byScheme.size === 0) {
    throw new InputError(`no rows for variable '${variable}'`);
  }
  const out = new Map<string, SchemeFit>();
  for (const [scheme, list] of byScheme) {
    list.sort((a, b) => a.n - b.n);
    if (new Set(list.map((r) => r.n)).size < 2) {
      throw new InputError(`scheme '${scheme}': need at least two mesh sizes, got ${list.length}`);
    }
    const finest = list.slice(-Math.min(3, list.length));
    const slope = leastSquaresSlope(finest.map((r) => [Math.log(r.n), Math.log(r.l1)]));
    out.set(scheme, {
      slope,
      points: list.map((r) => [r.n, r.l1]),
      wallSeconds: list.map((r) => r.wallSeconds),
    });
  }
  return out;
}

export interface ConvergencePlotOptions {
  table: string;
  output: string;
  variable?: string;
  /** add an error-vs-runtime panel */
  cpu?: boolean;
}

export function buildConvergenceScene(
  fits: Map<string, SchemeFit>,
  variable: string,
  cpu: boolean
): Scene {
  const schemes = [...fits.keys()].sort();
  const mkSeries = (xs: (f: SchemeFit) => number[]): Series[] =>
    schemes.map((scheme, i) => {
      const fit = fits.get(scheme)!;
      return {
        xs: xs(fit),
        ys: fit.points.map(([, e]) => e),
        color: PALETTE[i % PALETTE.length],
        label: `${scheme} (slope ${fit.slope.toFixed(2)})`,
        markers: true,
        width: 1.4,
      };
    });

  const panelW = 470;
  const panelH = 340;
  const scene: Scene = { width: cpu ? 2 * panelW : panelW, height: panelH, items: [] };
  const ns = [...new Set([...fits.values()].flatMap((f) => f.points.map(([n]) => n)))].sort(
    (a, b) => a - b
  );
  scene.items.push(
    ...buildPanel({
      x: 0, y: 0, w: panelW, h: panelH,
      title: `L1 error (${variable}) vs mesh size`,
      xLabel: "N", yLabel: "L1 error",
      logX: true, logY: true,
      xTicks: ns,
      series: mkSeries((f) => f.points.map(([n]) => n)),
      legend: true,
    })
  );
  if (cpu) {
    scene.items.push(
      ...buildPanel({
        x: panelW, y: 0, w: panelW, h: panelH,
        title: `L1 error (${variable}) vs runtime`,
        xLabel: "wall seconds", yLabel: "L1 error",
        logX: true, logY: true,
        series: mkSeries((f) => f.wallSeconds),
        legend: true,
      })
    );
  }
  return scene;
}

export function writeFigure(scene: Scene, output: string): void {
  if (output.endsWith(".svg")) {
    writeFileSync(output, renderSvg(scene));
  } else if (output.endsWith(".png")) {
    writeFileSync(output, renderPng(scene));
  } else {
    throw new InputError(`output '${output}' must end in .svg or .png`);
  }
}

export function plotConvergence(
  opts: ConvergencePlotOptions
): { output: string; slopes: Record<string, number> } {
  const variable = opts.variable ?? "f";
  const rows = parseConvergenceCsv(readFileSync(opts.table, "utf-8"), opts.table);
  const fits = fitSlopes(rows, variable);
  writeFigure(buildConvergenceScene(fits, variable, opts.cpu ?? false), opts.output);
  const slopes: Record<string, number> = {};
  for (const [scheme, fit] of fits) slopes[scheme] = fit.slope;
  return { output: opts.output, slopes };
}
