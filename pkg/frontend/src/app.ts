/**
 * Labeling and review single-page app. All state of record lives on the
 * server; this class holds only the view of it plus unsaved drafts, so a
 * page reload rebuilds everything from GET endpoints alone.
 */

import { ApiClient } from "./api.js";
import {
  Draft,
  buildPutBody,
  clipRoiToBounds,
  directionForKey,
  draftProblems,
  emptyDraft,
  interpretSaveResponse,
  keyForDirection,
  normalizeDrag,
} from "./annotate.js";
import {
  DEFAULT_GEOMETRY,
  curvePolyline,
  highlightPoint,
  plateauOf,
  xForAngle,
  yForValue,
} from "./curvePanel.js";
import { rayAnchor, rayEndpoint, rayLength } from "./ray.js";
import { aggregateLines, badge, orderedRows } from "./review.js";
import {
  AnnotationRecord,
  CurvesResponse,
  DIRECTION_LABELS,
  DirectionToken,
  EvaluateResponse,
  FAN_LAYOUT,
  FrameInfo,
  PerFrameRow,
  Roi,
} from "./types.js";

interface DragState {
  startX: number;
  startY: number;
  lastX: number;
  lastY: number;
}

export class LabelerApp {
  private frames: FrameInfo[] = [];
  private annotations = new Map<string, AnnotationRecord>();
  private drafts = new Map<string, Draft>();
  private revisions = new Map<string, number>();
  private savesInFlight = new Set<string>();
  private currentIndex = 0;
  private curves: CurvesResponse | null = null;
  private evaluation: EvaluateResponse | null = null;
  private reviewRow: PerFrameRow | null = null;
  private drag: DragState | null = null;
  private image: HTMLImageElement | null = null;

  private canvas!: HTMLCanvasElement;
  private frameList!: HTMLUListElement;
  private message!: HTMLDivElement;
  private reviewMessage!: HTMLDivElement;
  private reviewList!: HTMLUListElement;
  private reviewSummary!: HTMLDivElement;
  private curveHost!: HTMLDivElement;
  private annotatorInput!: HTMLInputElement;
  private methodInput!: HTMLInputElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
  ) {}

  async init(): Promise<void> {
    this.root.innerHTML = this.shellHtml();
    this.canvas = this.byId("gl-canvas");
    this.frameList = this.byId("gl-frames");
    this.message = this.byId("gl-message");
    this.reviewMessage = this.byId("gl-review-message");
    this.reviewList = this.byId("gl-review-list");
    this.reviewSummary = this.byId("gl-review-summary");
    this.curveHost = this.byId("gl-curves");
    this.annotatorInput = this.byId("gl-annotator");
    this.methodInput = this.byId("gl-method");

    this.wireToolbar();
    this.wireCanvas();
    this.wireKeyboard();
    this.byId<HTMLButtonElement>("gl-load-eval").addEventListener("click", () =>
      void this.loadEvaluation(),
    );

    const [frames, annotations, curves] = await Promise.all([
      this.api.frames(),
      this.api.annotations(),
      this.api.curves(1),
    ]);
    this.frames = frames;
    for (const record of annotations) {
      this.annotations.set(record.frame_id, record);
    }
    this.curves = curves;
    this.renderFrameList();
    this.selectFrame(0);
    this.renderCurves();
  }

  // ---------------------------------------------------------------- layout

  private shellHtml(): string {
    const buttons = FAN_LAYOUT.map(
      (d) =>
        `<button class="gl-dir" data-direction="${d}">` +
        `${DIRECTION_LABELS[d]} <kbd>${keyForDirection(d)}</kbd></button>`,
    ).join("");
    return `
      <header class="gl-header">
        <strong>guideval labeler</strong>
        <label>annotator <input id="gl-annotator" value="annotator"></label>
        <span class="gl-hint">
          drag on the image for a region; keys 1 to 5 pick the direction in
          ordinal order (1 sharp right, 3 straight, 5 sharp left); buttons are
          laid out as the turn fan, sharp left on the left; Enter saves and
          advances; arrows move between frames
        </span>
      </header>
      <main class="gl-main">
        <nav class="gl-panel"><h2>Frames</h2><ul id="gl-frames"></ul></nav>
        <section class="gl-panel gl-center">
          <canvas id="gl-canvas" width="640" height="480"></canvas>
          <div class="gl-toolbar">${buttons}
            <button id="gl-save">Save <kbd>Enter</kbd></button>
          </div>
          <div id="gl-message" class="gl-message"></div>
        </section>
        <section class="gl-panel gl-review">
          <h2>Review</h2>
          <div>
            <label>method <input id="gl-method" value=""></label>
            <button id="gl-load-eval">Evaluate</button>
          </div>
          <div id="gl-review-message" class="gl-message"></div>
          <div id="gl-review-summary"></div>
          <ul id="gl-review-list"></ul>
          <div id="gl-curves"></div>
        </section>
      </main>`;
  }

  private byId<T extends HTMLElement = HTMLElement>(id: string): T {
    const el = this.root.querySelector(`#${id}`);
    if (!el) throw new Error(`missing element ${id}`);
    return el as T;
  }

  // --------------------------------------------------------------- wiring

  private wireToolbar(): void {
    for (const button of this.root.querySelectorAll<HTMLButtonElement>(
      "button.gl-dir",
    )) {
      button.addEventListener("click", () => {
        const token = button.dataset.direction as DirectionToken;
        this.setDirection(token);
      });
    }
    this.byId<HTMLButtonElement>("gl-save").addEventListener("click", () =>
      void this.saveCurrent(),
    );
  }

  private wireCanvas(): void {
    this.canvas.addEventListener("mousedown", (e) => {
      const p = this.canvasPoint(e);
      this.drag = { startX: p.x, startY: p.y, lastX: p.x, lastY: p.y };
    });
    this.canvas.addEventListener("mousemove", (e) => {
      if (!this.drag) return;
      const p = this.canvasPoint(e);
      this.drag.lastX = p.x;
      this.drag.lastY = p.y;
      this.redraw();
    });
    const finish = () => {
      if (!this.drag) return;
      const frame = this.currentFrame();
      const raw = normalizeDrag(
        this.drag.startX,
        this.drag.startY,
        this.drag.lastX,
        this.drag.lastY,
      );
      this.drag = null;
      if (frame && raw.w >= 3 && raw.h >= 3) {
        // clip immediately so the draft never holds an out-of-bounds box
        const clipped = clipRoiToBounds(raw, frame.width, frame.height);
        if (clipped) {
          this.draftFor(frame.frame_id).roi = clipped;
          this.setMessage("");
        }
      }
      this.redraw();
    };
    this.canvas.addEventListener("mouseup", finish);
    this.canvas.addEventListener("mouseleave", finish);
  }

  private wireKeyboard(): void {
    document.addEventListener("keydown", (e) => {
      if (
        e.target instanceof HTMLInputElement ||
        e.target instanceof HTMLTextAreaElement
      ) {
        return;
      }
      const direction = directionForKey(e.key);
      if (direction) {
        this.setDirection(direction);
        e.preventDefault();
        return;
      }
      switch (e.key) {
        case "Enter":
        case "s":
          void this.saveCurrent();
          e.preventDefault();
          break;
        case "ArrowDown":
        case "ArrowRight":
        case "j":
          this.selectFrame(this.currentIndex + 1);
          e.preventDefault();
          break;
        case "ArrowUp":
        case "ArrowLeft":
        case "k":
          this.selectFrame(this.currentIndex - 1);
          e.preventDefault();
          break;
        default:
          break;
      }
    });
  }

  // ---------------------------------------------------------------- frames

  private currentFrame(): FrameInfo | null {
    return this.frames[this.currentIndex] ?? null;
  }

  private draftFor(frameId: string): Draft {
    let draft = this.drafts.get(frameId);
    if (!draft) {
      // seed the draft from the saved annotation so editing starts from
      // the state of record
      const saved = this.annotations.get(frameId);
      draft = emptyDraft();
      if (saved?.roi) draft.roi = { ...saved.roi };
      if (saved?.direction) draft.direction = saved.direction;
      this.drafts.set(frameId, draft);
    }
    return draft;
  }

  private selectFrame(index: number): void {
    if (this.frames.length === 0) return;
    this.currentIndex = Math.max(0, Math.min(index, this.frames.length - 1));
    const frame = this.currentFrame();
    if (!frame) return;
    this.reviewRow = this.rowFor(frame.frame_id);
    this.image = new Image();
    this.image.onload = () => this.redraw();
    this.image.onerror = () => {
      this.image = null;
      this.redraw();
    };
    this.image.src = this.api.imageUrl(frame.frame_id);
    this.canvas.width = frame.width;
    this.canvas.height = frame.height;
    this.renderFrameList();
    this.renderCurves();
    this.redraw();
  }

  private rowFor(frameId: string): PerFrameRow | null {
    if (!this.evaluation) return null;
    return (
      this.evaluation.per_frame.find((r) => r.frame_id === frameId) ?? null
    );
  }

  private renderFrameList(): void {
    this.frameList.innerHTML = "";
    this.frames.forEach((frame, index) => {
      const li = document.createElement("li");
      const saved = this.annotations.get(frame.frame_id);
      li.textContent = saved?.direction
        ? `${frame.frame_id}  [${saved.direction}]`
        : frame.frame_id;
      if (index === this.currentIndex) li.classList.add("gl-current");
      li.addEventListener("click", () => this.selectFrame(index));
      this.frameList.appendChild(li);
    });
  }

  // ----------------------------------------------------------------- draft

  private setDirection(direction: DirectionToken): void {
    const frame = this.currentFrame();
    if (!frame) return;
    this.draftFor(frame.frame_id).direction = direction;
    this.setMessage("");
    this.redraw();
  }

  private async saveCurrent(): Promise<void> {
    const frame = this.currentFrame();
    if (!frame) return;
    const frameId = frame.frame_id;
    if (this.savesInFlight.has(frameId)) return;
    const draft = this.draftFor(frameId);
    const problems = draftProblems(draft);
    if (problems.length > 0) {
      this.setMessage(problems.join("; "), "error");
      return;
    }
    const body = buildPutBody(
      frameId,
      draft,
      frame.width,
      frame.height,
      this.annotatorInput.value || "annotator",
      new Date().toISOString(),
    );
    this.savesInFlight.add(frameId);
    try {
      const result = await this.api.putAnnotation(body);
      const outcome = interpretSaveResponse(
        result.status,
        result.body,
        this.revisions.get(frameId) ?? null,
      );
      if (outcome.kind === "saved") {
        this.revisions.set(frameId, outcome.revision);
        this.annotations.set(frameId, body);
        this.setMessage(
          outcome.conflict
            ? `saved as revision ${outcome.revision}, but another writer ` +
                `changed this frame in between; review before trusting it`
            : `saved ${frameId} (revision ${outcome.revision})`,
          outcome.conflict ? "error" : "ok",
        );
        this.renderFrameList();
        if (!outcome.conflict) this.selectFrame(this.currentIndex + 1);
      } else {
        // draft stays untouched so the annotator can correct it in place
        this.setMessage(outcome.message, "error");
      }
    } catch (err) {
      this.setMessage(String(err), "error");
    } finally {
      this.savesInFlight.delete(frameId);
    }
  }

  private setMessage(text: string, kind: "ok" | "error" = "ok"): void {
    this.message.textContent = text;
    this.message.className = `gl-message gl-${kind}`;
  }

  // ---------------------------------------------------------------- review

  private async loadEvaluation(): Promise<void> {
    const method = this.methodInput.value.trim();
    if (!method) {
      this.reviewMessage.textContent = "enter a method name first";
      return;
    }
    try {
      this.evaluation = await this.api.evaluate(method);
      this.reviewMessage.textContent = "";
    } catch (err) {
      // surfaces the server's message verbatim
      this.reviewMessage.textContent =
        err instanceof Error ? err.message : String(err);
      return;
    }
    this.renderReview();
    const frame = this.currentFrame();
    this.reviewRow = frame ? this.rowFor(frame.frame_id) : null;
    this.renderCurves();
    this.redraw();
  }

  private renderReview(): void {
    if (!this.evaluation) return;
    this.reviewSummary.innerHTML = aggregateLines(this.evaluation)
      .map((line) => `<div>${line}</div>`)
      .join("");
    this.reviewList.innerHTML = "";
    for (const row of orderedRows(this.evaluation)) {
      const li = document.createElement("li");
      const b = badge(row);
      li.textContent = `${row.frame_id}: ${b.text}`;
      // raw values ride along so what is displayed is provably the wire value
      li.dataset.frameId = b.frameId;
      li.dataset.soft = String(b.soft);
      li.dataset.level = String(b.level);
      if (b.deviation !== null) li.dataset.deviation = String(b.deviation);
      if (row.soft_accuracy < 1) li.classList.add("gl-disagree");
      li.addEventListener("click", () => {
        const index = this.frames.findIndex(
          (f) => f.frame_id === row.frame_id,
        );
        if (index >= 0) this.selectFrame(index);
      });
      this.reviewList.appendChild(li);
    }
  }

  // ---------------------------------------------------------------- curves

  private renderCurves(): void {
    if (!this.curves) return;
    const geom = DEFAULT_GEOMETRY;
    const gt = this.reviewRow?.gt_direction ?? null;
    const parts: string[] = [];
    parts.push(
      `<svg viewBox="0 0 ${geom.width} ${geom.height}" class="gl-curve-svg">`,
    );
    const axisY = yForValue(0, geom);
    parts.push(
      `<line x1="${geom.padLeft}" y1="${axisY}" ` +
        `x2="${geom.width - geom.padRight}" y2="${axisY}" class="gl-axis"/>`,
    );
    for (const label of [-90, 0, 90]) {
      const x = xForAngle(label, geom);
      parts.push(
        `<text x="${x}" y="${geom.height - 6}" class="gl-axis-label">` +
          `${label}</text>`,
      );
    }
    for (const [token, points] of Object.entries(this.curves.curves)) {
      const cls = token === gt ? "gl-curve gl-curve-gt" : "gl-curve";
      parts.push(
        `<polyline points="${curvePolyline(points, geom)}" class="${cls}"/>`,
      );
    }
    if (this.reviewRow && gt) {
      const p = highlightPoint(
        this.reviewRow.pred_angle,
        this.reviewRow.soft_accuracy,
        geom,
      );
      parts.push(
        `<circle cx="${p.x}" cy="${p.y}" r="5" class="gl-highlight"/>`,
      );
      const span = plateauOf(this.curves.curves[gt] ?? []);
      if (span) {
        parts.push(
          `<text x="${geom.padLeft}" y="${geom.padTop}" class="gl-plateau">` +
            `${gt} full credit on [${span[0]}, ${span[1]}]</text>`,
        );
      }
    }
    parts.push("</svg>");
    this.curveHost.innerHTML = parts.join("");
  }

  // ---------------------------------------------------------------- canvas

  private canvasPoint(e: MouseEvent): { x: number; y: number } {
    const rect = this.canvas.getBoundingClientRect();
    return {
      x: ((e.clientX - rect.left) * this.canvas.width) / rect.width,
      y: ((e.clientY - rect.top) * this.canvas.height) / rect.height,
    };
  }

  private redraw(): void {
    const frame = this.currentFrame();
    const ctx = this.canvas.getContext("2d");
    if (!frame || !ctx) return;
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
    if (this.image && this.image.complete && this.image.naturalWidth > 0) {
      ctx.drawImage(this.image, 0, 0, frame.width, frame.height);
    } else {
      ctx.fillStyle = "#ddd";
      ctx.fillRect(0, 0, frame.width, frame.height);
    }

    const draft = this.draftFor(frame.frame_id);
    if (draft.roi) this.strokeRoi(ctx, draft.roi, "#2563eb");
    if (this.drag) {
      const live = normalizeDrag(
        this.drag.startX,
        this.drag.startY,
        this.drag.lastX,
        this.drag.lastY,
      );
      this.strokeRoi(ctx, live, "#93c5fd");
    }

    if (this.reviewRow) {
      const anchor = rayAnchor(frame.width, frame.height);
      const tip = rayEndpoint(
        this.reviewRow.pred_angle,
        frame.width,
        frame.height,
        rayLength(frame.width, frame.height),
      );
      ctx.strokeStyle = "#dc2626";
      ctx.lineWidth = 3;
      ctx.beginPath();
      ctx.moveTo(anchor.x, anchor.y);
      ctx.lineTo(tip.x, tip.y);
      ctx.stroke();
      const b = badge(this.reviewRow);
      ctx.fillStyle = "#dc2626";
      ctx.font = "14px sans-serif";
      ctx.fillText(b.text, 8, 18);
    }

    if (draft.direction) {
      ctx.fillStyle = "#2563eb";
      ctx.font = "14px sans-serif";
      ctx.fillText(
        `draft: ${DIRECTION_LABELS[draft.direction]}`,
        8,
        frame.height - 10,
      );
    }
  }

  private strokeRoi(
    ctx: CanvasRenderingContext2D,
    roi: Roi,
    color: string,
  ): void {
    ctx.strokeStyle = color;
    ctx.lineWidth = 2;
    ctx.strokeRect(roi.x, roi.y, roi.w, roi.h);
  }
}
