/** Linear and logarithmic axis scales with tick generation. */

export interface Scale {
  toPixel(value: number): number;
  ticks(): { value: number; label: string }[];
  domain: [number, number];
}

export function linearScale(lo: number, hi: number, pxLo: number, pxHi: number): Scale {
  if (!(hi > lo)) {
    hi = lo + 1;
  }
  const span = hi - lo;
  const step = niceStep(span / 6);
  const first = Math.ceil(lo / step) * step;
  const ticks: { value: number; label: string }[] = [];
  for (let v = first; v <= hi + 1e-12 * span; v += step) {
    const rounded = Math.abs(v) < 1e-12 * span ? 0 : v;
    ticks.push({ value: rounded, label: tickLabel(rounded) });
  }
  return {
    domain: [lo, hi],
    toPixel: (value) => pxLo + ((value - lo) / span) * (pxHi - pxLo),
    ticks: () => ticks,
  };
}

export function logScale(lo: number, hi: number, pxLo: number, pxHi: number): Scale {
  if (!(lo > 0) || !(hi > 0)) {
    throw new Error("log scale requires positive bounds");
  }
  if (!(hi > lo)) {
    hi = lo * 10;
  }
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi);
  const span = lhi - llo;
  const decadeStep = Math.max(1, Math.round(span / 6));
  const first = Math.ceil(llo);
  const ticks: { value: number; label: string }[] = [];
  for (let e = first; e <= lhi + 1e-9; e += decadeStep) {
    ticks.push({ value: 10 ** e, label: `1e${e}` });
  }
  return {
    domain: [lo, hi],
    toPixel: (value) => pxLo + ((Math.log10(value) - llo) / span) * (pxHi - pxLo),
    ticks: () => ticks,
  };
}

function niceStep(raw: number): number {
  const power = Math.floor(Math.log10(raw));
  const base = raw / 10 ** power;
  const nice = base < 1.5 ? 1 : base < 3.5 ? 2 : base < 7.5 ? 5 : 10;
  return nice * 10 ** power;
}

function tickLabel(v: number): string {
  if (v === 0) return "0";
  const magnitude = Math.abs(v);
  if (magnitude >= 1e5 || magnitude < 1e-4) {
    return v.toExponential(1).replace("e+", "e");
  }
  return String(Number(v.toPrecision(8)));
}

/** Finite positive minimum and maximum over several series (for log axes). */
export function positiveExtent(seriesList: number[][]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const values of seriesList) {
    for (const v of values) {
      if (Number.isFinite(v) && v > 0) {
        if (v < lo) lo = v;
        if (v > hi) hi = v;
      }
    }
  }
  if (!(lo < Infinity)) {
    throw new Error("no positive finite values for the log axis");
  }
  return [lo, hi];
}

export function extent(seriesList: number[][]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const values of seriesList) {
    for (const v of values) {
      if (Number.isFinite(v)) {
        if (v < lo) lo = v;
        if (v > hi) hi = v;
      }
    }
  }
  if (!(lo < Infinity)) {
    throw new Error("no finite values to plot");
  }
  return [lo, hi];
}
