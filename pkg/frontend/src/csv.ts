/**
 * Readers for the solver CLI's artifacts: solution CSVs (`x,f,b,g,q` plus a
 * `key = value` .meta sidecar) and the convergence table
 * (`N,scheme,var,L1,L1_order,...,wall_seconds`).
 */

import { existsSync, readFileSync } from "node:fs";
import { basename } from "node:path";

/** Bad or missing input; the CLIs turn this into exit code 1. */
export class InputError extends Error {}

export const SOLUTION_VARS = ["f", "b", "g", "q"] as const;
export type SolutionVar = (typeof SOLUTION_VARS)[number];

export interface Dataset {
  path: string;
  label: string;
  x: number[];
  columns: Map<string, number[]>;
  meta: Record<string, string>;
}

export interface ConvergenceRow {
  n: number;
  scheme: string;
  variable: string;
  l1: number;
  wallSeconds: number;
}

interface RawTable {
  header: string[];
  cells: string[][];
}

function splitTable(text: string, path: string): RawTable {
  const lines = text.split(/\r?\n/).filter((l) => l.trim() !== "");
  if (lines.length < 2) {
    throw new InputError(`${path}: no data rows`);
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const cells = lines.slice(1).map((line, i) => {
    const row = line.split(",");
    if (row.length !== header.length) {
      throw new InputError(
        `${path}: row ${i + 2} has ${row.length} fields, header has ${header.length}`
      );
    }
    return row;
  });
  return { header, cells };
}

function numericColumn(tbl: RawTable, name: string, path: string): number[] {
  const idx = tbl.header.indexOf(name);
  if (idx < 0) {
    throw new InputError(`${path}: missing column '${name}'`);
  }
  return tbl.cells.map((row, i) => {
    const v = Number(row[idx]);
    if (!Number.isFinite(v)) {
      throw new InputError(`${path}: row ${i + 2}, column '${name}': not a number`);
    }
    return v;
  });
}

/** `key = value` lines; unknown keys are kept verbatim. */
export function parseMeta(text: string): Record<string, string> {
  const out: Record<string, string> = {};
  for (const line of text.split(/\r?\n/)) {
    const at = line.indexOf("=");
    if (at < 0) continue;
    out[line.slice(0, at).trim()] = line.slice(at + 1).trim();
  }
  return out;
}

/**
 * Read one solution CSV plus its sidecar. Label priority: explicit label,
 * then the sidecar's `scheme`, then the file stem.
 */
export function readDataset(path: string, label?: string): Dataset {
  if (!existsSync(path)) {
    throw new InputError(`${path}: no such file`);
  }
  const tbl = splitTable(readFileSync(path, "utf-8"), path);
  const x = numericColumn(tbl, "x", path);
  const columns = new Map<string, number[]>();
  for (const name of tbl.header) {
    if (name !== "x") columns.set(name, numericColumn(tbl, name, path));
  }
  const metaPath = `${path}.meta`;
  const meta = existsSync(metaPath) ? parseMeta(readFileSync(metaPath, "utf-8")) : {};
  return {
    path,
    label: label ?? meta["scheme"] ?? basename(path).replace(/\.csv$/i, ""),
    x,
    columns,
    meta,
  };
}

export function parseConvergenceCsv(text: string, path: string): ConvergenceRow[] {
  const tbl = splitTable(text, path);
  const n = numericColumn(tbl, "N", path);
  const l1 = numericColumn(tbl, "L1", path);
  const wall = numericColumn(tbl, "wall_seconds", path);
  const schemeIdx = tbl.header.indexOf("scheme");
  const varIdx = tbl.header.indexOf("var");
  if (schemeIdx < 0) throw new InputError(`${path}: missing column 'scheme'`);
  if (varIdx < 0) throw new InputError(`${path}: missing column 'var'`);
  return tbl.cells.map((row, i) => ({
    n: n[i],
    scheme: row[schemeIdx].trim(),
    variable: row[varIdx].trim(),
    l1: l1[i],
    wallSeconds: wall[i],
  }));
}
