/** Thin typed client for the evaluation service HTTP interface. */

import {
  AnnotationRecord,
  ConfigDoc,
  CurvesResponse,
  EvaluateResponse,
  FrameInfo,
  PredictionRecord,
} from "./types.js";

export interface PutResult {
  status: number;
  body: unknown;
}

export class ApiClient {
  constructor(readonly base: string = "") {}

  private url(path: string): string {
    return this.base + path;
  }

  async frames(): Promise<FrameInfo[]> {
    return this.getJson("/api/frames");
  }

  imageUrl(frameId: string): string {
    return this.url(`/api/frames/${encodeURIComponent(frameId)}/image`);
  }

  async annotations(): Promise<AnnotationRecord[]> {
    return this.getJson("/api/annotations");
  }

  /** PUT never throws on HTTP-level rejection; callers interpret status. */
  async putAnnotation(record: AnnotationRecord): Promise<PutResult> {
    const r = await fetch(
      this.url(`/api/annotations/${encodeURIComponent(record.frame_id)}`),
      {
        method: "PUT",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(record),
      },
    );
    return { status: r.status, body: await r.json().catch(() => null) };
  }

  async postPredictions(
    methodName: string,
    records: PredictionRecord[],
  ): Promise<{ method_name: string; count: number }> {
    const r = await fetch(
      this.url(`/api/predictions/${encodeURIComponent(methodName)}`),
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(records),
      },
    );
    if (!r.ok) throw new Error(await errorText(r));
    return r.json();
  }

  async evaluate(methodName: string): Promise<EvaluateResponse> {
    const r = await fetch(this.url("/api/evaluate"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ method_name: methodName }),
    });
    if (!r.ok) throw new Error(await errorText(r));
    return r.json();
  }

  async curves(step: number): Promise<CurvesResponse> {
    return this.getJson(`/api/criterion/curves?step=${step}`);
  }

  async config(): Promise<ConfigDoc> {
    return this.getJson("/api/config");
  }

  private async getJson<T>(path: string): Promise<T> {
    const r = await fetch(this.url(path));
    if (!r.ok) throw new Error(await errorText(r));
    return r.json();
  }
}

/** Surface the server's own message verbatim when there is one. */
async function errorText(r: Response): Promise<string> {
  try {
    const body = await r.json();
    if (body && typeof body.detail === "string") return body.detail;
  } catch {
    // fall through to the generic message
  }
  return `request failed with status ${r.status}`;
}
