"""Evaluation toolkit for direction-based guidance systems.

Stores human ground-truth decisions (region of interest and/or one of five
simplified directions), scores predicted direction angles against them with
hard level-deviation and soft plateau-ramp criteria, and renders aggregate
reports, histograms, and criterion curves. A small HTTP service and the
``guideval`` command expose the same code paths for interactive labeling
and batch evaluation.
"""

__version__ = "0.1.0"

from .core import (
    Accuracy,
    AngleDeviation,
    DirectionAngle,
    FrameRecord,
    Roi,
    SimplifiedDirection,
    VideoFrameRef,
    ordinal_distance,
)
from .criterion import (
    DEFAULT_CONFIG,
    CriterionConfig,
    angle_deviation,
    criterion_curve,
    quantize,
    soft_accuracy,
    soft_accuracy_sweep,
)
from .errors import ValidationError
from .store import (
    DatasetManifest,
    HumanAnnotation,
    Prediction,
    derive_gt_angle,
    load_annotations,
    load_dataset,
    load_predictions,
    save_annotations,
    save_dataset,
    save_predictions,
    synthetic_predictions,
    working_set,
)
from .evaluate import (
    AggregateReport,
    FrameResult,
    aggregate,
    evaluate_frame,
    evaluate_many,
)
from .report import render_criterion_curves, render_report

__all__ = [
    "Accuracy",
    "AggregateReport",
    "AngleDeviation",
    "CriterionConfig",
    "DEFAULT_CONFIG",
    "DatasetManifest",
    "DirectionAngle",
    "FrameRecord",
    "FrameResult",
    "HumanAnnotation",
    "Prediction",
    "Roi",
    "SimplifiedDirection",
    "ValidationError",
    "VideoFrameRef",
    "aggregate",
    "angle_deviation",
    "criterion_curve",
    "derive_gt_angle",
    "evaluate_frame",
    "evaluate_many",
    "load_annotations",
    "load_dataset",
    "load_predictions",
    "ordinal_distance",
    "quantize",
    "render_criterion_curves",
    "render_report",
    "save_annotations",
    "save_dataset",
    "save_predictions",
    "soft_accuracy",
    "soft_accuracy_sweep",
    "synthetic_predictions",
    "working_set",
]
