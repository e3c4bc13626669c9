"""Local HTTP service for labeling sessions.

Serves dataset frames and images, stores annotation edits with
last-write-wins revisions, accepts prediction uploads, and evaluates on
demand through the same code path as the command line, so both produce
identical numbers for identical inputs. Single-user desk tool: binds
loopback by default and does no authentication.
"""

from __future__ import annotations

import json
import mimetypes
import os
import threading
import warnings
from contextlib import asynccontextmanager
from typing import Iterable, Optional

from fastapi import Body, FastAPI, HTTPException, Response

from .core import SimplifiedDirection, VideoFrameRef
from .criterion import DEFAULT_CONFIG, CriterionConfig, criterion_curve, load_config
from .errors import ValidationError
from .evaluate import aggregate, evaluate_many
from .report import render_report
from .store import (
    DatasetManifest,
    HumanAnnotation,
    Prediction,
    annotation_from_obj,
    annotation_to_obj,
    frame_to_obj,
    load_annotations,
    load_dataset,
    prediction_from_obj,
    roi_to_obj,
    save_annotations,
    working_set,
)


class SessionState:
    """Shared state of one labeling session.

    All mutation goes through one lock, so writes are serialized; readers
    get snapshots taken under the same lock.
    """

    def __init__(
        self,
        manifest: DatasetManifest,
        annotations: Iterable[HumanAnnotation] = (),
        cfg: CriterionConfig = DEFAULT_CONFIG,
        annotations_path: Optional[str] = None,
    ):
        self.manifest = manifest
        self.cfg = cfg
        self.annotations_path = annotations_path
        self._lock = threading.Lock()
        self._working = working_set(annotations)
        # records present at startup count as revision 1
        self._revisions = {frame_id: 1 for frame_id in self._working}
        self._predictions: dict[str, list[Prediction]] = {}
        self._dirty = False

    # -- annotations

    def get_annotation(self, frame_id: str) -> tuple[HumanAnnotation, int]:
        with self._lock:
            if frame_id not in self._working:
                raise KeyError(frame_id)
            return self._working[frame_id], self._revisions[frame_id]

    def put_annotation(self, ann: HumanAnnotation) -> int:
        with self._lock:
            revision = self._revisions.get(ann.frame_id, 0) + 1
            self._working[ann.frame_id] = ann
            self._revisions[ann.frame_id] = revision
            self._dirty = True
            return revision

    def annotation_snapshot(self) -> list[HumanAnnotation]:
        """Working set in manifest frame order."""
        with self._lock:
            ws = dict(self._working)
        return [ws[f.frame_id] for f in self.manifest.frames if f.frame_id in ws]

    # -- predictions

    def set_predictions(self, method_name: str, records: list[Prediction]) -> None:
        with self._lock:
            self._predictions[method_name] = list(records)

    def get_predictions(self, method_name: str) -> list[Prediction]:
        with self._lock:
            if method_name not in self._predictions:
                raise KeyError(method_name)
            return list(self._predictions[method_name])

    def method_names(self) -> list[str]:
        with self._lock:
            return sorted(self._predictions)

    # -- persistence

    def flush(self) -> None:
        """Write unsaved annotation edits back to the session file."""
        with self._lock:
            if not self._dirty or self.annotations_path is None:
                return
            snapshot = dict(self._working)
            self._dirty = False
        ordered = [
            snapshot[f.frame_id]
            for f in self.manifest.frames
            if f.frame_id in snapshot
        ]
        save_annotations(ordered, self.annotations_path)


def _http_validation(exc: ValidationError) -> HTTPException:
    return HTTPException(status_code=422, detail=str(exc))


def create_app(
    state: SessionState, ui_dir: Optional[str] = None
) -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        state.flush()

    app = FastAPI(title="guideval", lifespan=lifespan)
    app.state.session = state
    manifest = state.manifest
    frames_by_id = manifest.frames_by_id()

    @app.get("/api/frames")
    def list_frames():
        return [frame_to_obj(f) for f in manifest.frames]

    @app.get("/api/frames/{frame_id}/image")
    def frame_image(frame_id: str):
        frame = frames_by_id.get(frame_id)
        if frame is None:
            raise HTTPException(status_code=404, detail=f"unknown frame {frame_id!r}")
        if isinstance(frame.source, VideoFrameRef):
            raise HTTPException(
                status_code=415,
                detail="video-backed frames have no still image to serve",
            )
        root = os.path.realpath(manifest.root or os.getcwd())
        path = os.path.realpath(os.path.join(root, frame.source))
        # never serve anything that resolves outside the dataset root
        if path != root and not path.startswith(root + os.sep):
            raise HTTPException(
                status_code=403,
                detail=f"source of frame {frame_id!r} escapes the dataset root",
            )
        try:
            with open(path, "rb") as fh:
                payload = fh.read()
        except OSError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        media_type = mimetypes.guess_type(path)[0] or "application/octet-stream"
        return Response(content=payload, media_type=media_type)

    @app.get("/api/annotations")
    def all_annotations():
        return [annotation_to_obj(a) for a in state.annotation_snapshot()]

    @app.get("/api/annotations/{frame_id}")
    def get_annotation(frame_id: str):
        try:
            ann, _ = state.get_annotation(frame_id)
        except KeyError:
            raise HTTPException(
                status_code=404, detail=f"frame {frame_id!r} has no annotation"
            )
        return annotation_to_obj(ann)

    @app.put("/api/annotations/{frame_id}")
    def put_annotation(frame_id: str, body: dict = Body(...)):
        frame = frames_by_id.get(frame_id)
        if frame is None:
            raise HTTPException(status_code=404, detail=f"unknown frame {frame_id!r}")
        if body.get("frame_id", frame_id) != frame_id:
            raise HTTPException(
                status_code=422,
                detail=f"body frame_id {body.get('frame_id')!r} does not match "
                f"path frame {frame_id!r}",
            )
        obj = {"frame_id": frame_id, **body}
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")  # mismatch warnings are advisory
                ann = annotation_from_obj(obj, "body")
        except ValidationError as exc:
            raise _http_validation(exc)
        if ann.roi is not None and not ann.roi.inside(frame.width, frame.height):
            raise HTTPException(
                status_code=422,
                detail=f"roi {roi_to_obj(ann.roi)} extends outside frame "
                f"{frame_id!r} ({frame.width} x {frame.height})",
            )
        return {"revision": state.put_annotation(ann)}

    @app.post("/api/predictions/{method_name}")
    def post_predictions(method_name: str, body: list = Body(...)):
        records: list[Prediction] = []
        problems: list[str] = []
        seen: set[str] = set()
        for i, obj in enumerate(body):
            where = f"record {i}"
            if isinstance(obj, dict) and "method_name" not in obj:
                obj = {**obj, "method_name": method_name}
            try:
                pred = prediction_from_obj(obj, where)
            except ValidationError as exc:
                problems.extend(exc.problems)
                continue
            if pred.method_name != method_name:
                problems.append(
                    f"{where}: method_name {pred.method_name!r} does not match "
                    f"path method {method_name!r}"
                )
            elif pred.frame_id not in frames_by_id:
                problems.append(f"{where}: unknown frame {pred.frame_id!r}")
            elif pred.frame_id in seen:
                problems.append(f"{where}: duplicate frame {pred.frame_id!r}")
            else:
                seen.add(pred.frame_id)
                records.append(pred)
        if problems:
            raise _http_validation(ValidationError(problems))
        state.set_predictions(method_name, records)
        return {"method_name": method_name, "count": len(records)}

    @app.post("/api/evaluate")
    def evaluate_now(body: dict = Body(...)):
        method_name = body.get("method_name")
        if not isinstance(method_name, str) or not method_name:
            raise HTTPException(status_code=422, detail="method_name is required")
        try:
            predictions = state.get_predictions(method_name)
        except KeyError:
            raise HTTPException(
                status_code=404,
                detail=f"no predictions loaded for method {method_name!r}; "
                f"loaded methods: {state.method_names()}",
            )
        cfg = state.cfg
        if body.get("config") is not None:
            try:
                cfg = CriterionConfig.from_mapping(body["config"])
            except ValidationError as exc:
                raise _http_validation(exc)
        try:
            results, _skipped = evaluate_many(
                manifest, state.annotation_snapshot(), predictions, cfg,
                method_name=method_name,
            )
            report = aggregate(results, split_threshold=cfg.ramp_width)
        except ValidationError as exc:
            raise _http_validation(exc)
        # same renderer the CLI uses, so both emit identical numbers
        return json.loads(render_report(report, results, format="json"))

    @app.get("/api/criterion/curves")
    def curves(step: float = 1.0):
        try:
            sampled = {
                direction.token: criterion_curve(direction, step, state.cfg)
                for direction in SimplifiedDirection
            }
        except ValidationError as exc:
            raise _http_validation(exc)
        return {"step": step, "curves": sampled}

    @app.get("/api/config")
    def config():
        return state.cfg.to_mapping()

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        # mounted last so every /api route keeps precedence
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def run_service(
    dataset_path: str,
    annotations_path: Optional[str] = None,
    config_path: Optional[str] = None,
    host: str = "127.0.0.1",
    port: int = 8765,
    ui_dir: Optional[str] = None,
) -> None:
    """Load the session inputs and serve until interrupted.

    The dataset must load cleanly or the service refuses to start. The
    annotations file may not exist yet; it is created on flush.
    """
    import uvicorn

    manifest = load_dataset(dataset_path)
    annotations: list[HumanAnnotation] = []
    if annotations_path and os.path.exists(annotations_path):
        annotations = load_annotations(annotations_path, manifest)
    cfg = load_config(config_path) if config_path else DEFAULT_CONFIG
    state = SessionState(
        manifest, annotations, cfg=cfg, annotations_path=annotations_path
    )
    uvicorn.run(create_app(state, ui_dir=ui_dir), host=host, port=port)
