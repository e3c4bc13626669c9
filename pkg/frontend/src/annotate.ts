/**
 * Pure annotation-flow logic: drag normalization, bounds clipping, hotkey
 * mapping, PUT body construction and save-response interpretation. No DOM
 * access here so every rule is unit-testable.
 */

import {
  AnnotationRecord,
  DirectionToken,
  ORDINAL_DIRECTIONS,
  Roi,
} from "./types.js";

export interface Draft {
  roi: Roi | null;
  direction: DirectionToken | null;
}

export function emptyDraft(): Draft {
  return { roi: null, direction: null };
}

/** Two drag corners in image coordinates to a canonical rectangle. */
export function normalizeDrag(
  ax: number,
  ay: number,
  bx: number,
  by: number,
): Roi {
  const x = Math.min(ax, bx);
  const y = Math.min(ay, by);
  return { x, y, w: Math.abs(bx - ax), h: Math.abs(by - ay) };
}

/**
 * Clip a rectangle to the frame. The server rejects any ROI that leaves
 * the image, so this runs on every draft before save. Returns null when
 * nothing remains (drag entirely outside, or degenerate).
 */
export function clipRoiToBounds(
  roi: Roi,
  width: number,
  height: number,
): Roi | null {
  const x0 = Math.max(0, roi.x);
  const y0 = Math.max(0, roi.y);
  const x1 = Math.min(width, roi.x + roi.w);
  const y1 = Math.min(height, roi.y + roi.h);
  if (x1 <= x0 || y1 <= y0) return null;
  return { x: x0, y: y0, w: x1 - x0, h: y1 - y0 };
}

/** Hotkeys "1".."5" in ordinal order, sharp right through sharp left. */
export function directionForKey(key: string): DirectionToken | null {
  const idx = Number.parseInt(key, 10) - 1;
  if (!Number.isInteger(idx) || idx < 0 || idx >= ORDINAL_DIRECTIONS.length) {
    return null;
  }
  return ORDINAL_DIRECTIONS[idx] ?? null;
}

export function keyForDirection(direction: DirectionToken): string {
  return String(ORDINAL_DIRECTIONS.indexOf(direction) + 1);
}

/** The server requires at least one of roi / direction on every record. */
export function draftProblems(draft: Draft): string[] {
  const problems: string[] = [];
  if (draft.roi === null && draft.direction === null) {
    problems.push("draw a region or pick a direction before saving");
  }
  return problems;
}

/**
 * Build the PUT body for a draft. The ROI is clipped here as a final
 * guard even if the caller already clipped it interactively.
 */
export function buildPutBody(
  frameId: string,
  draft: Draft,
  frameWidth: number,
  frameHeight: number,
  annotator: string,
  createdAt: string,
): AnnotationRecord {
  const body: AnnotationRecord = {
    schema_version: 1,
    frame_id: frameId,
    annotator,
    created_at: createdAt,
  };
  if (draft.roi !== null) {
    const clipped = clipRoiToBounds(draft.roi, frameWidth, frameHeight);
    if (clipped !== null) body.roi = clipped;
  }
  if (draft.direction !== null) body.direction = draft.direction;
  // Key order on the wire: schema_version, frame_id, roi, direction,
  // annotator, created_at. Rebuild so optional fields slot in place.
  const ordered: AnnotationRecord = {
    schema_version: body.schema_version,
    frame_id: body.frame_id,
    ...(body.roi !== undefined ? { roi: body.roi } : {}),
    ...(body.direction !== undefined ? { direction: body.direction } : {}),
    annotator: body.annotator,
    created_at: body.created_at,
  };
  return ordered;
}

export type SaveOutcome =
  | { kind: "saved"; revision: number; conflict: boolean }
  | { kind: "rejected"; message: string };

/**
 * Revision check for the optimistic UI. `previous` is the last revision
 * this client saw for the frame, or null when unknown (preloaded
 * annotations, first visit). A known previous revision must advance by
 * exactly one, otherwise someone else wrote in between.
 */
export function checkRevision(
  previous: number | null,
  reported: number,
): "ok" | "conflict" {
  if (previous === null) return "ok";
  return reported === previous + 1 ? "ok" : "conflict";
}

/**
 * Interpret the PUT response. 200 carries {revision}; validation
 * failures carry {detail} and must keep the draft intact so the
 * annotator can fix it rather than retype it.
 */
export function interpretSaveResponse(
  status: number,
  responseBody: unknown,
  previousRevision: number | null,
): SaveOutcome {
  const body = (responseBody ?? {}) as Record<string, unknown>;
  if (status === 200 && typeof body.revision === "number") {
    return {
      kind: "saved",
      revision: body.revision,
      conflict: checkRevision(previousRevision, body.revision) === "conflict",
    };
  }
  const detail = body.detail;
  const message =
    typeof detail === "string" ? detail : `save failed with status ${status}`;
  return { kind: "rejected", message };
}
