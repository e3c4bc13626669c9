"""Joins annotations with predictions and computes per-frame and aggregate metrics.

Per frame there are three verdicts: the angle deviation between ground
truth and prediction, the level deviation (0-4 steps on the instruction
scale), and the soft accuracy in [0, 1]. Aggregation mirrors the usual
reporting layout: level shares, a below/at-or-above threshold split of the
one-level errors, a deviation histogram, and mean soft accuracy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import (
    Accuracy,
    AngleDeviation,
    DirectionAngle,
    SimplifiedDirection,
    ordinal_distance,
)
from .criterion import DEFAULT_CONFIG, CriterionConfig, angle_deviation, quantize, soft_accuracy
from .errors import ValidationError
from .store import (
    DatasetManifest,
    HumanAnnotation,
    Prediction,
    derive_gt_angle,
    working_set,
)

# histogram bins default to [0,5), [5,10), [10,15), [15,inf) degrees,
# aligned with the 15-degree one-level split
DEFAULT_HISTOGRAM_EDGES = (5.0, 10.0, 15.0)


@dataclass(frozen=True)
class FrameResult:
    """Verdicts for one frame."""

    frame_id: str
    gt_direction: SimplifiedDirection
    gt_angle: Optional[DirectionAngle]
    pred_angle: DirectionAngle
    pred_direction: SimplifiedDirection
    deviation: Optional[AngleDeviation]
    level: int
    soft_accuracy: Accuracy


@dataclass(frozen=True)
class AggregateReport:
    """Aggregate metrics over a result set.

    Percentages are stored at full precision; renderers round. Frames
    without a ground-truth angle still count toward levels and soft
    accuracy but are excluded from the deviation mean, split, and
    histogram; ``deviation_excluded`` reports how many.
    """

    n_frames: int
    exact_match_rate: float
    mean_soft_accuracy: float
    mean_deviation: Optional[float]
    deviation_excluded: int
    level_distribution: tuple[float, float, float, float, float]
    one_level_below: float
    one_level_at_or_above: float
    split_threshold: float
    histogram_edges: tuple[float, ...]
    histogram_counts: tuple[int, ...]


def evaluate_frame(
    annotation: HumanAnnotation,
    prediction: Prediction,
    cfg: CriterionConfig = DEFAULT_CONFIG,
    gt_angle: Optional[DirectionAngle] = None,
) -> FrameResult:
    """Score one prediction against one annotation.

    ``gt_angle`` carries an ROI-derived angle when the caller has one (see
    store.derive_gt_angle); an explicit annotated angle wins over it. The
    ground-truth direction falls back to quantizing the angle when the
    annotator marked only an ROI.
    """
    if annotation.frame_id != prediction.frame_id:
        raise ValidationError(
            f"annotation frame {annotation.frame_id!r} does not match "
            f"prediction frame {prediction.frame_id!r}"
        )
    if annotation.explicit_angle is not None:
        gt_angle = annotation.explicit_angle

    gt_direction = annotation.direction
    if gt_direction is None:
        if gt_angle is None:
            raise ValidationError(
                f"frame {annotation.frame_id!r}: direction underivable "
                "(no marked direction and no ground-truth angle)"
            )
        gt_direction = quantize(gt_angle, cfg)

    pred_direction = quantize(prediction.angle, cfg)
    return FrameResult(
        frame_id=annotation.frame_id,
        gt_direction=gt_direction,
        gt_angle=gt_angle,
        pred_angle=prediction.angle,
        pred_direction=pred_direction,
        deviation=None if gt_angle is None else angle_deviation(gt_angle, prediction.angle),
        level=ordinal_distance(gt_direction, pred_direction),
        soft_accuracy=soft_accuracy(gt_direction, prediction.angle, cfg),
    )


def evaluate_many(
    manifest: DatasetManifest,
    annotations: Iterable[HumanAnnotation],
    predictions: Sequence[Prediction],
    cfg: CriterionConfig = DEFAULT_CONFIG,
    method_name: Optional[str] = None,
) -> tuple[list[FrameResult], list[str]]:
    """Evaluate a prediction set against the annotation working set.

    Returns results in manifest frame order plus the frame ids of
    predictions that had no annotation to compare against. This is the one
    evaluation path; the CLI and the HTTP service both call it.
    """
    if method_name is not None:
        predictions = [p for p in predictions if p.method_name == method_name]
        if not predictions:
            raise ValidationError(f"no predictions for method {method_name!r}")
    methods = sorted({p.method_name for p in predictions})
    if len(methods) > 1:
        raise ValidationError(
            f"predictions span several methods {methods}; pick one via method_name"
        )

    by_id = manifest.frames_by_id()
    unknown = sorted({p.frame_id for p in predictions} - set(by_id))
    if unknown:
        raise ValidationError(
            [f"prediction references unknown frame {fid!r}" for fid in unknown]
        )

    ws = working_set(annotations)
    unknown_ann = sorted(set(ws) - set(by_id))
    if unknown_ann:
        raise ValidationError(
            [f"annotation references unknown frame {fid!r}" for fid in unknown_ann]
        )
    preds_by_frame = {p.frame_id: p for p in predictions}
    results: list[FrameResult] = []
    skipped: list[str] = []
    for frame in manifest.frames:
        pred = preds_by_frame.get(frame.frame_id)
        if pred is None:
            continue
        ann = ws.get(frame.frame_id)
        if ann is None:
            skipped.append(frame.frame_id)
            continue
        gt_angle = None
        if ann.explicit_angle is not None or ann.roi is not None:
            gt_angle = derive_gt_angle(ann, frame)
        results.append(evaluate_frame(ann, pred, cfg, gt_angle=gt_angle))
    if not results:
        raise ValidationError("no annotated frames overlap the prediction set")
    return results, skipped


def aggregate(
    results: Sequence[FrameResult],
    histogram_edges: Sequence[float] = DEFAULT_HISTOGRAM_EDGES,
    split_threshold: float = DEFAULT_CONFIG.ramp_width,
) -> AggregateReport:
    """Fold per-frame results into an AggregateReport.

    ``histogram_edges`` are the inner bin edges in degrees; bins are
    [0, e0), [e0, e1), ..., [e_last, inf). ``split_threshold`` divides the
    one-level errors by their angle deviation.
    """
    if not results:
        raise ValidationError("cannot aggregate an empty result set")
    edges = tuple(float(e) for e in histogram_edges)
    if any(e <= 0 for e in edges) or list(edges) != sorted(set(edges)):
        raise ValidationError(
            f"histogram edges must be positive and strictly ascending, got {list(edges)}"
        )

    n = len(results)
    levels = [r.level for r in results]
    level_counts = [levels.count(level) for level in range(5)]
    devs = np.array([float(r.deviation) for r in results if r.deviation is not None])

    below = sum(
        1
        for r in results
        if r.level == 1 and r.deviation is not None and float(r.deviation) < split_threshold
    )
    at_or_above = sum(
        1
        for r in results
        if r.level == 1 and r.deviation is not None and float(r.deviation) >= split_threshold
    )

    counts, _ = np.histogram(devs, bins=[0.0, *edges, np.inf])
    return AggregateReport(
        n_frames=n,
        exact_match_rate=100.0 * level_counts[0] / n,
        mean_soft_accuracy=100.0 * sum(float(r.soft_accuracy) for r in results) / n,
        mean_deviation=float(devs.mean()) if devs.size else None,
        deviation_excluded=n - devs.size,
        level_distribution=tuple(100.0 * c / n for c in level_counts),
        one_level_below=100.0 * below / n,
        one_level_at_or_above=100.0 * at_or_above / n,
        split_threshold=float(split_threshold),
        histogram_edges=edges,
        histogram_counts=tuple(int(c) for c in counts),
    )
