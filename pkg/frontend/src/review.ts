/**
 * Pure review-flow logic. Every number shown in the review pane comes
 * straight out of the evaluate response; nothing is recomputed locally,
 * so the service stays the single source of truth for metrics.
 */

import { EvaluateResponse, PerFrameRow } from "./types.js";

/** All scored frames, worst first (ascending soft accuracy). */
export function orderedRows(response: EvaluateResponse): PerFrameRow[] {
  return [...response.per_frame].sort(
    (a, b) => a.soft_accuracy - b.soft_accuracy,
  );
}

/** Frames where computer and human disagree at all (soft accuracy < 1). */
export function disagreements(response: EvaluateResponse): PerFrameRow[] {
  return orderedRows(response).filter((row) => row.soft_accuracy < 1);
}

export interface Badge {
  frameId: string;
  level: number;
  deviation: number | null;
  soft: number;
  text: string;
}

/**
 * Badge for one frame. The numeric fields are the response values
 * untouched; `text` is only a formatting of those same numbers.
 */
export function badge(row: PerFrameRow): Badge {
  const parts = [`level ${row.level}`];
  if (row.deviation !== null) {
    parts.push(`deviation ${formatNumber(row.deviation, 1)} deg`);
  }
  parts.push(`soft ${formatNumber(row.soft_accuracy, 3)}`);
  return {
    frameId: row.frame_id,
    level: row.level,
    deviation: row.deviation,
    soft: row.soft_accuracy,
    text: parts.join(", "),
  };
}

export function formatNumber(value: number, digits: number): string {
  return value.toFixed(digits);
}

/** Headline lines for the aggregate block, values straight off the wire. */
export function aggregateLines(response: EvaluateResponse): string[] {
  const a = response.aggregate;
  const lines = [
    `frames ${a.n_frames}`,
    `exact match ${formatNumber(a.exact_match_rate, 1)} %`,
    `mean soft accuracy ${formatNumber(a.mean_soft_accuracy, 2)} %`,
  ];
  if (a.mean_deviation !== null) {
    lines.push(`mean deviation ${formatNumber(a.mean_deviation, 2)} deg`);
  }
  return lines;
}
