#!/usr/bin/env node
/**
 * Figure regeneration from solver run directories.
 *
 *   vpfp1d-figures timeseries --input DIR [--input DIR2] \
 *       --quantities e_pot,l2_f [--log-y] [--rescale-time] \
 *       [--runs label1,label2] [--csv phase1.csv] --out fig.svg
 *
 *   vpfp1d-figures phase-space --snapshot FILE --equilibrium FILE \
 *       [--bound B] --out fig.png
 *
 * The plotting layer never recomputes physics; it renders exactly what the
 * solver wrote.
 */

import { parseArgs } from "node:util";

import { MissingColumnError } from "./csv.js";
import { GridMismatchError, plotPhaseSpace } from "./phasespace.js";
import { plotTimeseries } from "./timeseries.js";

function usage(): void {
  console.error("usage: vpfp1d-figures <timeseries|phase-space> [options]");
  console.error("  timeseries:  --input DIR [--input DIR] --quantities a,b " +
    "[--log-y] [--rescale-time] [--runs l1,l2] [--csv name.csv] " +
    "[--x-min A] [--x-max B] --out FILE.svg");
  console.error("  phase-space: --snapshot FILE --equilibrium FILE " +
    "[--bound B] --out FILE.png");
}

export function main(argv: string[]): number {
  const command = argv[0];
  try {
    if (command === "timeseries") {
      const { values } = parseArgs({
        args: argv.slice(1),
        options: {
          input: { type: "string", multiple: true },
          quantities: { type: "string" },
          "log-y": { type: "boolean", default: false },
          "rescale-time": { type: "boolean", default: false },
          runs: { type: "string" },
          csv: { type: "string" },
          title: { type: "string" },
          "x-min": { type: "string" },
          "x-max": { type: "string" },
          out: { type: "string" },
        },
      });
      if (!values.input || values.input.length === 0 || !values.out) {
        usage();
        return 2;
      }
      const quantities = (values.quantities ?? "")
        .split(",").map((q) => q.trim()).filter((q) => q.length > 0);
      const written = plotTimeseries({
        inputs: values.input,
        quantities,
        logY: values["log-y"] ?? false,
        rescaledTime: values["rescale-time"] ?? false,
        runLabels: values.runs ? values.runs.split(",") : undefined,
        csvName: values.csv,
        title: values.title,
        xMin: values["x-min"] !== undefined ? Number(values["x-min"]) : undefined,
        xMax: values["x-max"] !== undefined ? Number(values["x-max"]) : undefined,
        output: values.out,
      });
      if (written !== null) {
        console.error(`wrote ${written}`);
      }
      return 0;
    }
    if (command === "phase-space") {
      const { values } = parseArgs({
        args: argv.slice(1),
        options: {
          snapshot: { type: "string" },
          equilibrium: { type: "string" },
          bound: { type: "string" },
          out: { type: "string" },
        },
      });
      if (!values.snapshot || !values.equilibrium || !values.out) {
        usage();
        return 2;
      }
      const written = plotPhaseSpace({
        snapshot: values.snapshot,
        equilibrium: values.equilibrium,
        bound: values.bound !== undefined ? Number(values.bound) : undefined,
        output: values.out,
      });
      console.error(`wrote ${written}`);
      return 0;
    }
    usage();
    return 2;
  } catch (error) {
    if (error instanceof MissingColumnError || error instanceof GridMismatchError) {
      console.error(`error: ${error.message}`);
      return 3;
    }
    throw error;
  }
}

if (process.argv[1] && import.meta.url.endsWith(process.argv[1].split("/").pop()!)) {
  process.exit(main(process.argv.slice(2)));
}
