/**
 * Readers for the solver's file formats: diagnostics time series
 * (header row + numeric records) and phase-space snapshots (first row the
 * velocity grid, first column the cell centers).
 */

import { readFileSync } from "node:fs";

export interface Series {
  columns: string[];
  /** column name -> values, in file order */
  data: Map<string, number[]>;
  length: number;
}

export class MissingColumnError extends Error {
  constructor(column: string, path: string) {
    super(`column '${column}' not present in ${path}`);
    this.name = "MissingColumnError";
  }
}

function splitRows(text: string): string[] {
  return text
    .split(/\r\n|\n/)
    .map((line) => line.trim())
    .filter((line) => line.length > 0);
}

export function readSeries(path: string): Series {
  const rows = splitRows(readFileSync(path, "utf8"));
  if (rows.length === 0) {
    throw new Error(`empty series file ${path}`);
  }
  const columns = rows[0]!.split(",").map((c) => c.trim());
  const data = new Map<string, number[]>(columns.map((c) => [c, []]));
  for (const row of rows.slice(1)) {
    const fields = row.split(",");
    columns.forEach((c, i) => {
      data.get(c)!.push(Number(fields[i]));
    });
  }
  return { columns, data, length: rows.length - 1 };
}

export function seriesColumn(series: Series, column: string, path = "series"): number[] {
  const values = series.data.get(column);
  if (values === undefined) {
    throw new MissingColumnError(column, path);
  }
  return values;
}

/** Drop index pairs where either value is not finite (NaN remainder rows,
 * log of non-positive values downstream, ...). */
export function cleanPairs(xs: number[], ys: number[]): { x: number[]; y: number[] } {
  const x: number[] = [];
  const y: number[] = [];
  for (let i = 0; i < ys.length; i++) {
    const xv = xs[i]!;
    const yv = ys[i]!;
    if (Number.isFinite(xv) && Number.isFinite(yv)) {
      x.push(xv);
      y.push(yv);
    }
  }
  return { x, y };
}

export interface Snapshot {
  x: number[];
  v: number[];
  /** values[j][m] = f(x_j, v_m) */
  values: number[][];
}

export function readSnapshot(path: string): Snapshot {
  const rows = splitRows(readFileSync(path, "utf8"));
  if (rows.length < 2) {
    throw new Error(`snapshot ${path} has no data rows`);
  }
  const header = rows[0]!.split(",");
  const v = header.slice(1).map(Number);
  const x: number[] = [];
  const values: number[][] = [];
  for (const row of rows.slice(1)) {
    const fields = row.split(",");
    x.push(Number(fields[0]));
    values.push(fields.slice(1).map(Number));
  }
  for (const row of values) {
    if (row.length !== v.length) {
      throw new Error(`ragged snapshot row in ${path}`);
    }
  }
  return { x, v, values };
}
