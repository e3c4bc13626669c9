/**
 * Geometry for the criterion-curve panel: maps (angle, value) samples
 * from GET /api/criterion/curves into SVG coordinates, plus the
 * highlight marker for the frame under review. The highlighted y value
 * is the server-reported soft accuracy, never a local evaluation of
 * the curve.
 */

import { CurvePoint } from "./types.js";

export interface PanelGeometry {
  width: number;
  height: number;
  padLeft: number;
  padRight: number;
  padTop: number;
  padBottom: number;
  angleMin: number;
  angleMax: number;
}

export const DEFAULT_GEOMETRY: PanelGeometry = {
  width: 460,
  height: 180,
  padLeft: 40,
  padRight: 12,
  padTop: 12,
  padBottom: 24,
  angleMin: -90,
  angleMax: 90,
};

export function xForAngle(angle: number, geom: PanelGeometry): number {
  const plotW = geom.width - geom.padLeft - geom.padRight;
  const t = (angle - geom.angleMin) / (geom.angleMax - geom.angleMin);
  return geom.padLeft + t * plotW;
}

export function yForValue(value: number, geom: PanelGeometry): number {
  const plotH = geom.height - geom.padTop - geom.padBottom;
  return geom.padTop + (1 - value) * plotH;
}

/** SVG polyline `points` attribute for one curve. */
export function curvePolyline(
  points: readonly CurvePoint[],
  geom: PanelGeometry,
): string {
  return points
    .map(([a, v]) => `${round2(xForAngle(a, geom))},${round2(yForValue(v, geom))}`)
    .join(" ");
}

/** Marker position for (predicted angle, server-reported soft value). */
export function highlightPoint(
  predAngle: number,
  softAccuracy: number,
  geom: PanelGeometry,
): { x: number; y: number } {
  return {
    x: xForAngle(predAngle, geom),
    y: yForValue(softAccuracy, geom),
  };
}

/**
 * Closed angular span where the curve sits exactly at 1. Used to label
 * the full-credit region of the ground-truth direction.
 */
export function plateauOf(
  points: readonly CurvePoint[],
): [number, number] | null {
  const ones = points.filter(([, v]) => v === 1);
  if (ones.length === 0) return null;
  const angles = ones.map(([a]) => a);
  return [Math.min(...angles), Math.max(...angles)];
}

function round2(v: number): number {
  return Math.round(v * 100) / 100;
}
