"""Dataset manifests, human annotations, and prediction records.

On-disk formats are versioned and line-oriented where it helps labeling:
the manifest is one JSON document, annotations and predictions are JSON
Lines (one record per line, append-friendly). Loaders validate everything
and never silently drop records: a file either loads fully or fails with
every offending record listed.

An annotation file may contain several records for the same frame (a
relabel appends rather than rewrites); :func:`working_set` reduces to the
effective last record per frame.
"""

from __future__ import annotations

import json
import math
import random
import warnings
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Optional, Union

from .core import (
    DirectionAngle,
    FrameRecord,
    Roi,
    SimplifiedDirection,
    VideoFrameRef,
)
from .criterion import DEFAULT_CONFIG, quantize
from .errors import ValidationError

SCHEMA_VERSION = 1
SUPPORTED_SCHEMA_VERSIONS = (1,)


class QuantizationMismatchWarning(UserWarning):
    """An annotation's explicit angle quantizes to a different direction than marked."""


class AngleClampWarning(UserWarning):
    """A derived angle fell outside [-90, 90] and was clamped."""


def _utc(dt: datetime) -> datetime:
    if dt.tzinfo is None:
        return dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


@dataclass(frozen=True)
class HumanAnnotation:
    """One stored human decision for a frame: an ROI, a direction, or both."""

    frame_id: str
    roi: Optional[Roi] = None
    direction: Optional[SimplifiedDirection] = None
    explicit_angle: Optional[DirectionAngle] = None
    annotator: str = ""
    created_at: datetime = field(
        default_factory=lambda: datetime.now(timezone.utc)
    )

    def __post_init__(self):
        if not self.frame_id:
            raise ValueError("annotation frame_id must be non-empty")
        if self.roi is None and self.direction is None:
            raise ValueError(
                f"annotation for frame {self.frame_id!r} needs an roi, "
                "a direction, or both"
            )
        object.__setattr__(self, "created_at", _utc(self.created_at))


@dataclass(frozen=True)
class Prediction:
    """One computed decision for a frame, identified by the producing method."""

    frame_id: str
    angle: DirectionAngle
    method_name: str

    def __post_init__(self):
        if not self.frame_id:
            raise ValueError("prediction frame_id must be non-empty")
        if not self.method_name:
            raise ValueError("prediction method_name must be non-empty")


@dataclass(frozen=True)
class DatasetManifest:
    dataset_id: str
    frames: tuple[FrameRecord, ...]
    schema_version: int = SCHEMA_VERSION
    root: Optional[Path] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "frames", tuple(self.frames))
        seen = set()
        for frame in self.frames:
            if frame.frame_id in seen:
                raise ValidationError(f"duplicate frame_id {frame.frame_id!r}")
            seen.add(frame.frame_id)

    def frame(self, frame_id: str) -> FrameRecord:
        for f in self.frames:
            if f.frame_id == frame_id:
                return f
        raise KeyError(frame_id)

    def frames_by_id(self) -> dict[str, FrameRecord]:
        return {f.frame_id: f for f in self.frames}


# ---------------------------------------------------------------------------
# record <-> object conversion

def _require(obj: dict, key: str, where: str):
    if key not in obj or obj[key] is None:
        raise ValidationError(f"{where}: missing required field {key!r}")
    return obj[key]


def _check_schema_version(obj: dict, where: str):
    version = _require(obj, "schema_version", where)
    if version not in SUPPORTED_SCHEMA_VERSIONS:
        raise ValidationError(
            f"{where}: unknown schema_version {version!r}; "
            f"supported versions are {list(SUPPORTED_SCHEMA_VERSIONS)}"
        )


def roi_to_obj(roi: Roi) -> dict:
    return {"x": roi.x, "y": roi.y, "w": roi.width, "h": roi.height}


def roi_from_obj(obj, where: str) -> Roi:
    if not isinstance(obj, dict):
        raise ValidationError(f"{where}: roi must be an object with x, y, w, h")
    try:
        return Roi(
            x=_require(obj, "x", where),
            y=_require(obj, "y", where),
            width=_require(obj, "w", where),
            height=_require(obj, "h", where),
        )
    except ValueError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def frame_to_obj(frame: FrameRecord) -> dict:
    source = frame.source
    if isinstance(source, VideoFrameRef):
        source = {"path": source.path, "frame_index": source.frame_index}
    return {
        "frame_id": frame.frame_id,
        "source": source,
        "width": frame.width,
        "height": frame.height,
        "scene_kind": frame.scene_kind,
    }


def frame_from_obj(obj, where: str) -> FrameRecord:
    if not isinstance(obj, dict):
        raise ValidationError(f"{where}: frame record must be an object")
    source = _require(obj, "source", where)
    if isinstance(source, dict):
        source = VideoFrameRef(
            path=_require(source, "path", f"{where} source"),
            frame_index=_require(source, "frame_index", f"{where} source"),
        )
    elif not isinstance(source, str):
        raise ValidationError(
            f"{where}: source must be an image path or a video reference object"
        )
    try:
        return FrameRecord(
            frame_id=_require(obj, "frame_id", where),
            source=source,
            width=_require(obj, "width", where),
            height=_require(obj, "height", where),
            scene_kind=obj.get("scene_kind") or "",
        )
    except ValueError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def annotation_to_obj(ann: HumanAnnotation) -> dict:
    obj: dict = {"schema_version": SCHEMA_VERSION, "frame_id": ann.frame_id}
    if ann.roi is not None:
        obj["roi"] = roi_to_obj(ann.roi)
    if ann.direction is not None:
        obj["direction"] = ann.direction.token
    if ann.explicit_angle is not None:
        obj["explicit_angle"] = ann.explicit_angle.degrees
    obj["annotator"] = ann.annotator
    obj["created_at"] = ann.created_at.isoformat()
    return obj


def annotation_from_obj(obj, where: str) -> HumanAnnotation:
    if not isinstance(obj, dict):
        raise ValidationError(f"{where}: annotation record must be an object")
    _check_schema_version(obj, where)
    frame_id = _require(obj, "frame_id", where)

    roi = None
    if obj.get("roi") is not None:
        roi = roi_from_obj(obj["roi"], where)

    direction = None
    if obj.get("direction") is not None:
        try:
            direction = SimplifiedDirection.from_token(obj["direction"])
        except (ValueError, AttributeError) as exc:
            raise ValidationError(f"{where}: {exc}") from exc

    explicit_angle = None
    if obj.get("explicit_angle") is not None:
        try:
            explicit_angle = DirectionAngle(obj["explicit_angle"])
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"{where}: explicit_angle: {exc}") from exc

    created_raw = _require(obj, "created_at", where)
    try:
        created_at = _utc(datetime.fromisoformat(str(created_raw).replace("Z", "+00:00")))
    except ValueError as exc:
        raise ValidationError(f"{where}: created_at: {exc}") from exc

    try:
        ann = HumanAnnotation(
            frame_id=frame_id,
            roi=roi,
            direction=direction,
            explicit_angle=explicit_angle,
            annotator=obj.get("annotator") or "",
            created_at=created_at,
        )
    except ValueError as exc:
        raise ValidationError(f"{where}: {exc}") from exc

    if ann.explicit_angle is not None and ann.direction is not None:
        quantized = quantize(ann.explicit_angle, DEFAULT_CONFIG)
        if quantized is not ann.direction:
            warnings.warn(
                f"{where}: explicit_angle {ann.explicit_angle.degrees} quantizes to "
                f"{quantized.token!r} but the marked direction is {ann.direction.token!r}",
                QuantizationMismatchWarning,
                stacklevel=3,
            )
    return ann


def prediction_to_obj(pred: Prediction) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "frame_id": pred.frame_id,
        "angle": pred.angle.degrees,
        "method_name": pred.method_name,
    }


def prediction_from_obj(obj, where: str) -> Prediction:
    if not isinstance(obj, dict):
        raise ValidationError(f"{where}: prediction record must be an object")
    _check_schema_version(obj, where)
    try:
        return Prediction(
            frame_id=_require(obj, "frame_id", where),
            angle=DirectionAngle(_require(obj, "angle", where)),
            method_name=_require(obj, "method_name", where),
        )
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{where}: {exc}") from exc


# ---------------------------------------------------------------------------
# dataset manifest I/O

def load_dataset(manifest_path, check_sources: bool = True) -> DatasetManifest:
    """Load and validate a dataset manifest.

    Frame sources are resolved relative to the manifest's directory and,
    unless ``check_sources`` is off, must exist on disk. All problems are
    collected and reported together.
    """
    manifest_path = Path(manifest_path)
    with open(manifest_path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{manifest_path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ValidationError(f"{manifest_path}: manifest must be a JSON object")

    where = str(manifest_path)
    _check_schema_version(data, where)
    dataset_id = _require(data, "dataset_id", where)
    frames_raw = _require(data, "frames", where)
    if not isinstance(frames_raw, list):
        raise ValidationError(f"{where}: frames must be an array")

    root = manifest_path.resolve().parent
    problems: list[str] = []
    frames: list[FrameRecord] = []
    seen: set[str] = set()
    for i, obj in enumerate(frames_raw):
        ctx = f"{where} frame[{i}]"
        try:
            frame = frame_from_obj(obj, ctx)
        except ValidationError as exc:
            problems.extend(exc.problems)
            continue
        if frame.frame_id in seen:
            problems.append(f"{ctx}: duplicate frame_id {frame.frame_id!r}")
            continue
        seen.add(frame.frame_id)
        if check_sources:
            source = Path(frame.source_path)
            resolved = source if source.is_absolute() else root / source
            if not resolved.exists():
                problems.append(
                    f"{ctx} ({frame.frame_id!r}): source {frame.source_path!r} not found"
                )
                continue
        frames.append(frame)

    if problems:
        raise ValidationError(problems)
    return DatasetManifest(
        dataset_id=dataset_id,
        frames=tuple(frames),
        schema_version=data["schema_version"],
        root=root,
    )


def save_dataset(manifest: DatasetManifest, path) -> None:
    data = {
        "schema_version": manifest.schema_version,
        "dataset_id": manifest.dataset_id,
        "frames": [frame_to_obj(f) for f in manifest.frames],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# annotation / prediction I/O

def _load_jsonl(path, parse, manifest: Optional[DatasetManifest], kind: str):
    records = []
    problems: list[str] = []
    by_id = manifest.frames_by_id() if manifest is not None else None
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            where = f"{path}:{line_no}"
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                problems.append(f"{where}: invalid JSON ({exc})")
                continue
            try:
                record = parse(obj, where)
            except ValidationError as exc:
                problems.extend(exc.problems)
                continue
            if by_id is not None and record.frame_id not in by_id:
                problems.append(
                    f"{where}: {kind} references unknown frame {record.frame_id!r}"
                )
                continue
            records.append((where, record))
    return records, problems


def load_annotations(
    path, manifest: Optional[DatasetManifest] = None
) -> list[HumanAnnotation]:
    """Load annotations from a JSON Lines file, in file order.

    With a manifest, each record must reference a known frame and any ROI
    must lie inside that frame. Emits a QuantizationMismatchWarning when a
    record carries both an explicit angle and a direction that disagree.
    """
    records, problems = _load_jsonl(path, annotation_from_obj, manifest, "annotation")
    if manifest is not None:
        by_id = manifest.frames_by_id()
        for where, ann in records:
            frame = by_id.get(ann.frame_id)
            if frame is not None and ann.roi is not None:
                if not ann.roi.inside(frame.width, frame.height):
                    problems.append(
                        f"{where}: roi {roi_to_obj(ann.roi)} extends outside frame "
                        f"{ann.frame_id!r} ({frame.width} x {frame.height})"
                    )
    if problems:
        raise ValidationError(problems)
    return [ann for _, ann in records]


def save_annotations(annotations: Iterable[HumanAnnotation], path) -> None:
    """Write annotations as JSON Lines, one record per line, in order."""
    with open(path, "w", encoding="utf-8") as fh:
        for ann in annotations:
            fh.write(json.dumps(annotation_to_obj(ann)))
            fh.write("\n")


def load_predictions(
    path, manifest: Optional[DatasetManifest] = None
) -> list[Prediction]:
    """Load predictions from a JSON Lines file; (frame, method) pairs must be unique."""
    records, problems = _load_jsonl(path, prediction_from_obj, manifest, "prediction")
    seen: set[tuple[str, str]] = set()
    for where, pred in records:
        key = (pred.frame_id, pred.method_name)
        if key in seen:
            problems.append(
                f"{where}: duplicate prediction for frame {pred.frame_id!r} "
                f"by method {pred.method_name!r}"
            )
        seen.add(key)
    if problems:
        raise ValidationError(problems)
    return [pred for _, pred in records]


def save_predictions(predictions: Iterable[Prediction], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for pred in predictions:
            fh.write(json.dumps(prediction_to_obj(pred)))
            fh.write("\n")


def working_set(annotations: Iterable[HumanAnnotation]) -> dict[str, HumanAnnotation]:
    """Effective annotation per frame: the last record in order wins."""
    ws: dict[str, HumanAnnotation] = {}
    for ann in annotations:
        ws[ann.frame_id] = ann
    return ws


# ---------------------------------------------------------------------------
# ground-truth geometry

def derive_gt_angle(annotation: HumanAnnotation, frame: FrameRecord) -> DirectionAngle:
    """Ground-truth direction angle for an annotation.

    An explicit angle wins. Otherwise the angle is measured at the frame's
    bottom-center point, between the vertical axis and the ray toward the
    ROI centroid, positive to the left. Geometry outside [-90, 90] (ROI
    below the baseline, from invalid data) is clamped with a warning.
    """
    if annotation.explicit_angle is not None:
        return annotation.explicit_angle
    if annotation.roi is None:
        raise ValidationError(
            f"annotation for frame {annotation.frame_id!r} has neither an "
            "explicit angle nor an roi to derive one from"
        )
    cx, cy = annotation.roi.centroid
    left_offset = frame.width / 2.0 - cx
    rise = float(frame.height) - cy
    angle = math.degrees(math.atan2(left_offset, rise))
    if abs(angle) > 90.0:
        warnings.warn(
            f"derived angle {angle:.3f} for frame {annotation.frame_id!r} is outside "
            "[-90, 90]; clamping",
            AngleClampWarning,
            stacklevel=2,
        )
        angle = math.copysign(90.0, angle)
    return DirectionAngle(angle)


# ---------------------------------------------------------------------------
# synthetic predictor

def synthetic_predictions(
    manifest: DatasetManifest,
    annotations: Iterable[HumanAnnotation],
    noise_stddev: float,
    seed: int,
    method_name: str = "synthetic",
) -> list[Prediction]:
    """Deterministic noisy predictions around each frame's ground-truth angle.

    For every manifest frame, in manifest order, the predicted angle is the
    derived ground-truth angle plus Gaussian noise, clamped to [-90, 90].
    Noise generation is pinned down so identical inputs and seed give
    byte-identical prediction files anywhere: uniforms come from
    ``random.Random(seed).random()`` (a stable stream for a given seed) and
    are shaped by the Box-Muller transform
    ``z = sqrt(-2*ln(1 - u1)) * cos(2*pi*u2)``, two uniforms per frame.
    """
    if noise_stddev < 0:
        raise ValidationError(f"noise_stddev must be >= 0, got {noise_stddev}")
    ws = working_set(annotations)

    problems = []
    gt_angles: list[float] = []
    for frame in manifest.frames:
        ann = ws.get(frame.frame_id)
        if ann is None:
            problems.append(f"frame {frame.frame_id!r} has no annotation")
            continue
        try:
            gt_angles.append(derive_gt_angle(ann, frame).degrees)
        except ValidationError as exc:
            problems.extend(exc.problems)
    if problems:
        raise ValidationError(problems)

    rng = random.Random(seed)
    predictions = []
    for frame, gt in zip(manifest.frames, gt_angles):
        u1, u2 = rng.random(), rng.random()
        z = math.sqrt(-2.0 * math.log(1.0 - u1)) * math.cos(2.0 * math.pi * u2)
        angle = min(90.0, max(-90.0, gt + noise_stddev * z))
        predictions.append(
            Prediction(
                frame_id=frame.frame_id,
                angle=DirectionAngle(angle),
                method_name=method_name,
            )
        )
    return predictions
