/** Run-directory metadata written by the solver. */

import { readFileSync } from "node:fs";
import { join } from "node:path";

export interface SnapshotEntry {
  file: string;
  t: number | null;
  kind: "equilibrium" | "state";
  min: number;
  max: number;
  diff_min: number;
  diff_max: number;
}

export interface RunEntry {
  label: string;
  directory: string;
  csv: string;
  params: Record<string, unknown>;
  snapshots?: SnapshotEntry[];
  [key: string]: unknown;
}

export interface Manifest {
  software: { name: string; version: string };
  preset: string;
  csv_schema: string[];
  runs: RunEntry[];
  [key: string]: unknown;
}

export function readManifest(directory: string): Manifest {
  const raw = readFileSync(join(directory, "manifest.json"), "utf8");
  return JSON.parse(raw) as Manifest;
}

/** Legend label for a run: its label plus the physical parameters that vary
 * most often between sweep members. */
export function runLegend(run: RunEntry): string {
  const params = run.params ?? {};
  const bits: string[] = [run.label];
  if (typeof params["eps"] === "number") {
    bits.push(`eps=${formatNumber(params["eps"])}`);
  }
  if (typeof params["tau0"] === "number") {
    bits.push(`tau0=${formatNumber(params["tau0"])}`);
  }
  return bits.join("  ");
}

export function formatNumber(x: number): string {
  if (x === 0) return "0";
  const magnitude = Math.abs(x);
  if (magnitude >= 1e4 || magnitude < 1e-3) {
    return x.toExponential(0).replace("e+", "e");
  }
  return String(Number(x.toPrecision(6)));
}
