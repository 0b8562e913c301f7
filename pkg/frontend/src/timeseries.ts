/** Overlaid time-series figures from one or more run directories. */

import { writeFileSync } from "node:fs";
import { join } from "node:path";

import { cleanPairs, readSeries, seriesColumn } from "./csv.js";
import { readManifest, runLegend, type Manifest, type RunEntry } from "./manifest.js";
import { extent, linearScale, logScale, positiveExtent } from "./scale.js";
import { Curve, HEIGHT, MARGIN, PALETTE, WIDTH, renderChart } from "./svg.js";

export interface FigureSpec {
  /** experiment directories containing manifest.json */
  inputs: string[];
  /** which diagnostics columns to draw */
  quantities: string[];
  logY: boolean;
  /** plot against t/eps instead of t */
  rescaledTime: boolean;
  output: string;
  /** restrict to runs with these labels (default: all runs) */
  runLabels?: string[];
  /** which per-run csv to read (default "series.csv" from the manifest) */
  csvName?: string;
  title?: string;
  /** optional x-axis window (e.g. the shared rescaled-time range) */
  xMin?: number;
  xMax?: number;
}

interface LoadedRun {
  directory: string;
  entry: RunEntry;
  legend: string;
}

function collectRuns(spec: FigureSpec): LoadedRun[] {
  const runs: LoadedRun[] = [];
  for (const input of spec.inputs) {
    const manifest: Manifest = readManifest(input);
    for (const entry of manifest.runs) {
      if (spec.runLabels && !spec.runLabels.includes(entry.label)) {
        continue;
      }
      runs.push({
        directory: join(input, entry.directory),
        entry,
        legend: runLegend(entry),
      });
    }
  }
  return runs;
}

/** Render the figure; returns the output path, or null for an empty
 * quantity list (warned, nothing written). */
export function plotTimeseries(spec: FigureSpec): string | null {
  if (spec.quantities.length === 0) {
    console.warn("warning: empty quantity list; nothing to plot");
    return null;
  }
  const runs = collectRuns(spec);
  if (runs.length === 0) {
    throw new Error("no runs selected");
  }

  const curves: Curve[] = [];
  let colorIndex = 0;
  for (const run of runs) {
    const csvPath = join(run.directory, spec.csvName ?? run.entry.csv);
    const series = readSeries(csvPath);
    const timeColumn = spec.rescaledTime ? "t_over_eps" : "t";
    const time = seriesColumn(series, timeColumn, csvPath);
    for (const quantity of spec.quantities) {
      const values = seriesColumn(series, quantity, csvPath);
      const clean = cleanPairs(time, values);
      const label = spec.quantities.length > 1
        ? `${run.legend}  ${quantity}`
        : run.legend;
      curves.push({
        x: clean.x,
        y: clean.y,
        label,
        color: PALETTE[colorIndex % PALETTE.length]!,
      });
      colorIndex += 1;
    }
  }

  const xs = curves.map((c) => c.x);
  const ys = curves.map((c) => c.y);
  let [xLo, xHi] = extent(xs);
  if (spec.xMin !== undefined) xLo = spec.xMin;
  if (spec.xMax !== undefined) xHi = spec.xMax;
  if (spec.xMin !== undefined || spec.xMax !== undefined) {
    for (const curve of curves) {
      const keep = curve.x.map((v) => v >= xLo && v <= xHi);
      curve.x = curve.x.filter((_, i) => keep[i]);
      curve.y = curve.y.filter((_, i) => keep[i]);
    }
  }
  const pxLo = MARGIN.left;
  const pxHi = WIDTH - MARGIN.right;
  const pyLo = HEIGHT - MARGIN.bottom;
  const pyHi = MARGIN.top;
  const xScale = linearScale(xLo, xHi, pxLo, pxHi);
  const yScale = spec.logY
    ? (() => {
        const [lo, hi] = positiveExtent(ys);
        return logScale(lo, hi, pyLo, pyHi);
      })()
    : (() => {
        const [lo, hi] = extent(ys);
        return linearScale(lo, hi, pyLo, pyHi);
      })();

  const svg = renderChart({
    curves,
    xScale,
    yScale,
    xLabel: spec.rescaledTime ? "t / eps" : "t",
    yLabel: spec.quantities.join(", ") + (spec.logY ? "  (log scale)" : ""),
    title: spec.title ?? spec.quantities.join(", "),
  });
  writeFileSync(spec.output, svg);
  return spec.output;
}
