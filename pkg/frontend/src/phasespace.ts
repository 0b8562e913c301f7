/** Phase-space heatmaps of f - f_inf from snapshot pairs. */

import { writeFileSync } from "node:fs";

import { diverging, symmetricBound } from "./colormap.js";
import { encodePng } from "./png.js";
import { readSnapshot, type Snapshot } from "./csv.js";

export class GridMismatchError extends Error {
  constructor(detail: string) {
    super(`snapshot grids do not match: ${detail}`);
    this.name = "GridMismatchError";
  }
}

export interface PhaseSpaceSpec {
  snapshot: string;
  equilibrium: string;
  output: string;
  /** fixed symmetric color bound; defaults to the data's own max |diff|
   * (record the manifest's diff_min/diff_max here for reproducible scales) */
  bound?: number;
  /** integer pixel upscaling per cell (x, v); default fits ~512 px wide */
  scaleX?: number;
  scaleV?: number;
}

function checkGrids(a: Snapshot, b: Snapshot): void {
  if (a.x.length !== b.x.length || a.v.length !== b.v.length) {
    throw new GridMismatchError(
      `${a.x.length}x${a.v.length} vs ${b.x.length}x${b.v.length}`);
  }
  for (let i = 0; i < a.x.length; i++) {
    if (Math.abs(a.x[i]! - b.x[i]!) > 1e-12 * (1 + Math.abs(a.x[i]!))) {
      throw new GridMismatchError(`x grid differs at index ${i}`);
    }
  }
  for (let i = 0; i < a.v.length; i++) {
    if (Math.abs(a.v[i]! - b.v[i]!) > 1e-12 * (1 + Math.abs(a.v[i]!))) {
      throw new GridMismatchError(`v grid differs at index ${i}`);
    }
  }
}

/** Render the difference heatmap (x horizontal, v vertical, v increasing
 * upward); returns the written path. */
export function plotPhaseSpace(spec: PhaseSpaceSpec): string {
  const snap = readSnapshot(spec.snapshot);
  const eq = readSnapshot(spec.equilibrium);
  checkGrids(snap, eq);

  const nx = snap.x.length;
  const nv = snap.v.length;
  const diff: number[][] = snap.values.map((row, j) =>
    row.map((value, m) => value - eq.values[j]![m]!));

  let bound = spec.bound;
  if (bound === undefined) {
    let lo = Infinity;
    let hi = -Infinity;
    for (const row of diff) {
      for (const value of row) {
        if (value < lo) lo = value;
        if (value > hi) hi = value;
      }
    }
    bound = symmetricBound(lo, hi);
  }

  const scaleX = spec.scaleX ?? Math.max(1, Math.round(512 / nx));
  const scaleV = spec.scaleV ?? Math.max(1, Math.round(512 / nv));
  const width = nx * scaleX;
  const height = nv * scaleV;
  const pixels = new Uint8Array(width * height * 3);
  for (let row = 0; row < height; row++) {
    const m = nv - 1 - Math.floor(row / scaleV);  // v increases upward
    for (let col = 0; col < width; col++) {
      const j = Math.floor(col / scaleX);
      const [r, g, b] = diverging(diff[j]![m]!, bound);
      const at = (row * width + col) * 3;
      pixels[at] = r;
      pixels[at + 1] = g;
      pixels[at + 2] = b;
    }
  }
  writeFileSync(spec.output, encodePng(width, height, pixels));
  return spec.output;
}
