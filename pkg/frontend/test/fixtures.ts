/** Synthetic run directories matching the solver's on-disk layout. */

import { mkdirSync, mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export const CSV_COLUMNS = [
  "t", "t_over_eps", "energy", "dissipation", "remainder", "l2_f",
  "l2_local", "l2_rho", "e_pot", "mode1", "mode2", "mode3", "mode4",
  "mass", "h_functional",
];

export interface FixtureRun {
  label: string;
  eps: number;
  tau0: number;
  /** e_pot as a function of t (other columns are filled mechanically) */
  ePot: (t: number) => number;
  times: number[];
}

export function makeExperimentDir(runs: FixtureRun[]): string {
  const root = mkdtempSync(join(tmpdir(), "vpfp1d-fig-"));
  const entries = [];
  for (const run of runs) {
    const dir = join(root, run.label);
    mkdirSync(dir, { recursive: true });
    const rows = [CSV_COLUMNS.join(",")];
    run.times.forEach((t, i) => {
      const ep = run.ePot(t);
      const row = [
        t, t / run.eps, ep, ep / 10, i === 0 ? NaN : ep / 100,
        Math.sqrt(ep), Math.sqrt(ep / 2), Math.sqrt(ep / 2), ep,
        ep / 2, ep / 4, ep / 8, ep / 16, 12.0, 0.9 * ep,
      ];
      rows.push(row.map((v) => (Number.isNaN(v) ? "nan" : String(v))).join(","));
    });
    writeFileSync(join(dir, "series.csv"), rows.join("\r\n") + "\r\n");
    entries.push({
      label: run.label,
      directory: run.label,
      csv: "series.csv",
      params: { eps: run.eps, tau0: run.tau0, dt: 0.1, n_modes: 8 },
      snapshots: [],
    });
  }
  const manifest = {
    software: { name: "vpfp1d", version: "0.1.0" },
    preset: "custom",
    csv_schema: CSV_COLUMNS,
    runs: entries,
  };
  writeFileSync(join(root, "manifest.json"), JSON.stringify(manifest, null, 2));
  return root;
}

export function writeSnapshotCsv(path: string, x: number[], v: number[],
                                 values: number[][]): void {
  const rows = ["x/v," + v.join(",")];
  x.forEach((xj, j) => {
    rows.push(`${xj},` + values[j]!.join(","));
  });
  writeFileSync(path, rows.join("\r\n") + "\r\n");
}

export function tempFile(name: string): string {
  const dir = mkdtempSync(join(tmpdir(), "vpfp1d-out-"));
  return join(dir, name);
}
