/** Minimal deterministic SVG chart writer (no DOM, no dependencies). */

import type { Scale } from "./scale.js";

export const WIDTH = 880;
export const HEIGHT = 540;
export const MARGIN = { left: 78, right: 24, top: 44, bottom: 54 };

export const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2",
];

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export interface Curve {
  x: number[];
  y: number[];
  label: string;
  color: string;
}

export function renderChart(options: {
  curves: Curve[];
  xScale: Scale;
  yScale: Scale;
  xLabel: string;
  yLabel: string;
  title: string;
}): string {
  const { curves, xScale, yScale, xLabel, yLabel, title } = options;
  const plotLeft = MARGIN.left;
  const plotRight = WIDTH - MARGIN.right;
  const plotTop = MARGIN.top;
  const plotBottom = HEIGHT - MARGIN.bottom;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
    `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`);
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(`<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="16">${esc(title)}</text>`);

  // frame and grid
  parts.push(`<rect x="${plotLeft}" y="${plotTop}" width="${plotRight - plotLeft}" ` +
    `height="${plotBottom - plotTop}" fill="none" stroke="#333" stroke-width="1"/>`);
  for (const tick of xScale.ticks()) {
    const px = xScale.toPixel(tick.value);
    if (px < plotLeft - 0.5 || px > plotRight + 0.5) continue;
    parts.push(`<line x1="${fmt(px)}" y1="${plotTop}" x2="${fmt(px)}" y2="${plotBottom}" ` +
      `stroke="#ddd" stroke-width="0.6"/>`);
    parts.push(`<text x="${fmt(px)}" y="${plotBottom + 18}" text-anchor="middle" ` +
      `font-size="11">${esc(tick.label)}</text>`);
  }
  for (const tick of yScale.ticks()) {
    const py = yScale.toPixel(tick.value);
    if (py < plotTop - 0.5 || py > plotBottom + 0.5) continue;
    parts.push(`<line x1="${plotLeft}" y1="${fmt(py)}" x2="${plotRight}" y2="${fmt(py)}" ` +
      `stroke="#ddd" stroke-width="0.6"/>`);
    parts.push(`<text x="${plotLeft - 6}" y="${fmt(py + 4)}" text-anchor="end" ` +
      `font-size="11">${esc(tick.label)}</text>`);
  }
  parts.push(`<text x="${(plotLeft + plotRight) / 2}" y="${HEIGHT - 14}" ` +
    `text-anchor="middle" font-size="13">${esc(xLabel)}</text>`);
  parts.push(`<text x="20" y="${(plotTop + plotBottom) / 2}" text-anchor="middle" ` +
    `font-size="13" transform="rotate(-90 20 ${(plotTop + plotBottom) / 2})">${esc(yLabel)}</text>`);

  // clip curves to the frame
  parts.push(`<clipPath id="plot"><rect x="${plotLeft}" y="${plotTop}" ` +
    `width="${plotRight - plotLeft}" height="${plotBottom - plotTop}"/></clipPath>`);
  parts.push(`<g clip-path="url(#plot)">`);
  for (const curve of curves) {
    const d = pathData(curve, xScale, yScale);
    if (d.length > 0) {
      parts.push(`<path d="${d}" fill="none" stroke="${curve.color}" stroke-width="1.4"/>`);
    }
  }
  parts.push(`</g>`);

  // legend
  let ly = plotTop + 14;
  for (const curve of curves) {
    const lx = plotLeft + 12;
    parts.push(`<line x1="${lx}" y1="${ly - 4}" x2="${lx + 22}" y2="${ly - 4}" ` +
      `stroke="${curve.color}" stroke-width="2"/>`);
    parts.push(`<text x="${lx + 28}" y="${ly}" font-size="11">${esc(curve.label)}</text>`);
    ly += 16;
  }

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

function fmt(px: number): string {
  return px.toFixed(2);
}

export function pathData(curve: Curve, xScale: Scale, yScale: Scale): string {
  const segments: string[] = [];
  let pen = false;
  const [ylo, yhi] = yScale.domain;
  for (let i = 0; i < curve.x.length; i++) {
    const xv = curve.x[i]!;
    const yv = curve.y[i]!;
    const drawable = Number.isFinite(xv) && Number.isFinite(yv) &&
      yv >= Math.min(ylo, yhi) && yv <= Math.max(ylo, yhi);
    if (!drawable) {
      pen = false;
      continue;
    }
    const px = fmt(xScale.toPixel(xv));
    const py = fmt(yScale.toPixel(yv));
    segments.push(`${pen ? "L" : "M"}${px} ${py}`);
    pen = true;
  }
  return segments.join(" ");
}
