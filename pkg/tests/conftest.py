"""Shared fixtures: the canonical 10-frame dataset and its gold numbers.

The gold aggregate values below were computed with the reference evaluator
in oracle.py (hand-checkable: nine perfect frames and one where the human
said straight but the method predicted 25 degrees) and then frozen.
"""

import math
import os
from datetime import datetime, timezone

import pytest

from guideval.core import DirectionAngle, FrameRecord
from guideval.criterion import quantize
from guideval.store import (
    DatasetManifest,
    HumanAnnotation,
    Prediction,
    save_annotations,
    save_dataset,
    save_predictions,
)

# one disagreement frame: gt straight, predicted 25 deg
GOLD = {
    "n_frames": 10,
    "exact_match_rate": 90.0,
    "mean_soft_accuracy": 100.0 * (9.0 + math.exp(-0.75)) / 10.0,  # 94.72366552741015
    "mean_deviation": 2.5,
    "level_distribution": (90.0, 10.0, 0.0, 0.0, 0.0),
    "one_level_below": 0.0,
    "one_level_at_or_above": 10.0,
    "histogram_counts": (9, 0, 0, 1),
    "disagreement_frame": "f05",
    "disagreement_soft": math.exp(-0.75),  # 0.4723665527410147
}

FIXTURE_METHOD = "cv_baseline"

# (frame_id, gt angle, predicted angle); f05 is the one miss
FIXTURE_ROWS = [
    ("f00", -70.0, -70.0),
    ("f01", -35.0, -35.0),
    ("f02", -25.0, -25.0),
    ("f03", 0.0, 0.0),
    ("f04", 10.0, 10.0),
    ("f05", 0.0, 25.0),
    ("f06", 30.0, 30.0),
    ("f07", 45.0, 45.0),
    ("f08", 60.0, 60.0),
    ("f09", 85.0, 85.0),
]

_CREATED = datetime(2026, 8, 1, 12, 0, 0, tzinfo=timezone.utc)

# tiny but real: 1x1 PNG, enough for byte-serving tests
PNG_BYTES = bytes.fromhex(
    "89504e470d0a1a0a0000000d49484452000000010000000108060000001f15c489"
    "0000000d4944415478da63fcffff3f0300080101ff6c3c60650000000049454e44ae426082"
)


def fixture_frames() -> list[FrameRecord]:
    return [
        FrameRecord(frame_id=fid, source=f"images/{fid}.png", width=640, height=480)
        for fid, _, _ in FIXTURE_ROWS
    ]


def fixture_manifest(root=None) -> DatasetManifest:
    return DatasetManifest(
        dataset_id="fixture-10", frames=tuple(fixture_frames()), root=root
    )


def fixture_annotations() -> list[HumanAnnotation]:
    return [
        HumanAnnotation(
            frame_id=fid,
            direction=quantize(gt),
            explicit_angle=DirectionAngle(gt),
            annotator="tester",
            created_at=_CREATED,
        )
        for fid, gt, _ in FIXTURE_ROWS
    ]


def fixture_predictions(method: str = FIXTURE_METHOD) -> list[Prediction]:
    return [
        Prediction(frame_id=fid, angle=DirectionAngle(pred), method_name=method)
        for fid, _, pred in FIXTURE_ROWS
    ]


def build_fixture_files(root) -> dict:
    """Write the fixture dataset to disk; returns the file paths."""
    root = str(root)
    images = os.path.join(root, "images")
    os.makedirs(images, exist_ok=True)
    for fid, _, _ in FIXTURE_ROWS:
        with open(os.path.join(images, f"{fid}.png"), "wb") as fh:
            fh.write(PNG_BYTES)
    paths = {
        "root": root,
        "manifest": os.path.join(root, "manifest.json"),
        "annotations": os.path.join(root, "annotations.jsonl"),
        "predictions": os.path.join(root, "predictions.jsonl"),
    }
    save_dataset(fixture_manifest(), paths["manifest"])
    save_annotations(fixture_annotations(), paths["annotations"])
    save_predictions(fixture_predictions(), paths["predictions"])
    return paths


@pytest.fixture()
def fixture_files(tmp_path):
    return build_fixture_files(tmp_path)
