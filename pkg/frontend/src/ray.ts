/**
 * Predicted-angle ray geometry. The anchor is the image's bottom-center
 * and angles grow to the walker's left, the same convention the server
 * uses when it derives an angle from an ROI centroid, so the machine's
 * proposal and the human's rectangle are directly comparable on screen.
 */

export interface Point {
  x: number;
  y: number;
}

export function rayAnchor(width: number, height: number): Point {
  return { x: width / 2, y: height };
}

export function rayEndpoint(
  angleDeg: number,
  width: number,
  height: number,
  length: number,
): Point {
  const rad = (angleDeg * Math.PI) / 180;
  return {
    x: width / 2 - length * Math.sin(rad),
    y: height - length * Math.cos(rad),
  };
}

/** A length that stays visible without leaving the image for any angle. */
export function rayLength(width: number, height: number): number {
  return 0.85 * Math.min(height, width / 2);
}
