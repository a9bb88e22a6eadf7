/**
 * Solution overlays: one panel per selected variable, one curve per input
 * CSV. Inputs on different x grids are resampled onto the first input's
 * grid by nearest cell (with a warning), so step data stays step data.
 */

import { readFileSync } from "node:fs";
import { z } from "zod";
import { Dataset, InputError, readDataset, SOLUTION_VARS, SolutionVar } from "./csv.js";
import { buildLegendStrip, buildPanel, PALETTE, Scene } from "./scene.js";
import { writeFigure } from "./convergence.js";

export const FigureSpecSchema = z
  .object({
    inputs: z.array(z.string()).min(1),
    variables: z.array(z.enum(SOLUTION_VARS)).min(1).optional(),
    labels: z.array(z.string()).optional(),
    output: z.string(),
    logY: z.boolean().optional(),
  })
  .strict();

export type FigureSpec = z.infer<typeof FigureSpecSchema>;

export function loadFigureSpec(path: string): FigureSpec {
  let raw: unknown;
  try {
    raw = JSON.parse(readFileSync(path, "utf-8"));
  } catch (e) {
    throw new InputError(`${path}: ${(e as Error).message}`);
  }
  const res = FigureSpecSchema.safeParse(raw);
  if (!res.success) {
    const first = res.error.issues[0];
    throw new InputError(`${path}: ${first.path.join(".") || "spec"}: ${first.message}`);
  }
  return res.data;
}

function nearestResample(xs: number[], ys: number[], grid: number[]): number[] {
  return grid.map((x) => {
    // binary search for the closest sample
    let lo = 0;
    let hi = xs.length - 1;
    while (hi - lo > 1) {
      const mid = (lo + hi) >> 1;
      if (xs[mid] <= x) lo = mid;
      else hi = mid;
    }
    return Math.abs(xs[lo] - x) <= Math.abs(xs[hi] - x) ? ys[lo] : ys[hi];
  });
}

function sameGrid(a: number[], b: number[]): boolean {
  if (a.length !== b.length) return false;
  const span = Math.abs(a[a.length - 1] - a[0]) || 1;
  return a.every((v, i) => Math.abs(v - b[i]) <= 1e-12 * span);
}

export interface SolutionsResult {
  output: string;
  panels: number;
  labels: string[];
}

export function plotSolutions(
  spec: FigureSpec,
  warn: (msg: string) => void = (m) => console.error(m)
): SolutionsResult {
  if (spec.labels && spec.labels.length !== spec.inputs.length) {
    throw new InputError(
      `got ${spec.labels.length} labels for ${spec.inputs.length} inputs`
    );
  }
  const datasets: Dataset[] = spec.inputs.map((p, i) => readDataset(p, spec.labels?.[i]));
  const variables: SolutionVar[] = spec.variables ?? [...SOLUTION_VARS];

  for (const ds of datasets) {
    for (const v of variables) {
      if (!ds.columns.has(v)) {
        throw new InputError(`${ds.path}: missing column '${v}'`);
      }
    }
  }

  const grid = datasets[0].x;
  const curves = datasets.map((ds) => {
    if (sameGrid(datasets[0].x, ds.x)) {
      return { ds, at: (v: SolutionVar) => ds.columns.get(v)! };
    }
    warn(`resampling ${ds.path} onto the x grid of ${datasets[0].path} (nearest cell)`);
    return { ds, at: (v: SolutionVar) => nearestResample(ds.x, ds.columns.get(v)!, grid) };
  });

  const cols = variables.length > 1 ? 2 : 1;
  const rows = Math.ceil(variables.length / cols);
  const panelW = 390;
  const panelH = 250;
  const stripH = 20;
  const scene: Scene = {
    width: cols * panelW,
    height: rows * panelH + stripH,
    items: [],
  };
  scene.items.push(
    ...buildLegendStrip(
      curves.map(({ ds }, i) => ({ label: ds.label, color: PALETTE[i % PALETTE.length] })),
      10,
      12
    )
  );
  variables.forEach((v, pi) => {
    scene.items.push(
      ...buildPanel({
        x: (pi % cols) * panelW,
        y: stripH + Math.floor(pi / cols) * panelH,
        w: panelW,
        h: panelH,
        title: v,
        xLabel: "x",
        logY: spec.logY,
        series: curves.map(({ ds, at }, i) => ({
          xs: grid,
          ys: at(v),
          color: PALETTE[i % PALETTE.length],
          label: ds.label,
          width: 1.1,
        })),
      })
    );
  });

  writeFigure(scene, spec.output);
  return { output: spec.output, panels: variables.length, labels: curves.map((c) => c.ds.label) };
}
