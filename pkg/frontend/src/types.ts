/** Wire types mirrored from the evaluation service. */

export type DirectionToken =
  | "sharp_right"
  | "slight_right"
  | "straight"
  | "slight_left"
  | "sharp_left";

/** Ordinal order, least to greatest angle. Hotkeys 1..5 follow this order. */
export const ORDINAL_DIRECTIONS: readonly DirectionToken[] = [
  "sharp_right",
  "slight_right",
  "straight",
  "slight_left",
  "sharp_left",
];

/**
 * On-screen button order: a fan as seen by the walker, sharp left leftmost.
 * Hotkey numbers stay ordinal, so the two orders differ; the toolbar
 * legend spells this out.
 */
export const FAN_LAYOUT: readonly DirectionToken[] = [
  "sharp_left",
  "slight_left",
  "straight",
  "slight_right",
  "sharp_right",
];

export const DIRECTION_LABELS: Record<DirectionToken, string> = {
  sharp_right: "Sharp right",
  slight_right: "Slight right",
  straight: "Straight",
  slight_left: "Slight left",
  sharp_left: "Sharp left",
};

export interface Roi {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface FrameInfo {
  frame_id: string;
  source: string;
  width: number;
  height: number;
  scene_kind: string;
}

export interface AnnotationRecord {
  schema_version: number;
  frame_id: string;
  roi?: Roi;
  direction?: DirectionToken;
  explicit_angle?: number;
  annotator: string;
  created_at: string;
}

export interface PredictionRecord {
  schema_version: number;
  frame_id: string;
  angle: number;
  method_name?: string;
}

/** One scored frame as reported by POST /api/evaluate. */
export interface PerFrameRow {
  frame_id: string;
  gt_direction: DirectionToken;
  gt_angle: number | null;
  pred_angle: number;
  pred_direction: DirectionToken;
  deviation: number | null;
  level: number;
  soft_accuracy: number;
}

export interface AggregateDoc {
  n_frames: number;
  exact_match_rate: number;
  mean_soft_accuracy: number;
  mean_deviation: number | null;
  deviation_excluded: number;
  level_distribution: number[];
  one_level_split: { below: number; at_or_above: number; threshold: number };
  deviation_histogram: { inner_edges: number[]; counts: number[] };
}

export interface EvaluateResponse {
  aggregate: AggregateDoc;
  per_frame: PerFrameRow[];
}

export type CurvePoint = [number, number];

export interface CurvesResponse {
  step: number;
  curves: Record<DirectionToken, CurvePoint[]>;
}

export interface ConfigDoc {
  straight_halfwidth: number;
  slight_outer: number;
  full_range: number;
  ramp_width: number;
  gaussian_k: number;
}
