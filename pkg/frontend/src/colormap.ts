/** Diverging blue-white-red colormap, symmetric about zero. */

export type Rgb = [number, number, number];

const NEGATIVE: Rgb = [33, 102, 172];
const CENTER: Rgb = [247, 247, 247];
const POSITIVE: Rgb = [178, 24, 43];

function mix(a: Rgb, b: Rgb, t: number): Rgb {
  return [
    Math.round(a[0] + (b[0] - a[0]) * t),
    Math.round(a[1] + (b[1] - a[1]) * t),
    Math.round(a[2] + (b[2] - a[2]) * t),
  ];
}

/**
 * Map a value to a color given the symmetric scale bound. The bound is the
 * largest |value| of the data (recorded in the manifest so regenerated
 * figures share color scales); zero data renders uniformly in the center
 * color.
 */
export function diverging(value: number, bound: number): Rgb {
  if (!(bound > 0) || !Number.isFinite(value)) {
    return CENTER;
  }
  const t = Math.max(-1, Math.min(1, value / bound));
  return t < 0 ? mix(CENTER, NEGATIVE, -t) : mix(CENTER, POSITIVE, t);
}

export function symmetricBound(min: number, max: number): number {
  return Math.max(Math.abs(min), Math.abs(max));
}
