"""Renderers for evaluation reports and criterion curves.

All renderers return the document as a string and are deterministic:
rendering the same inputs twice gives byte-identical output. Text output
rounds percentages for reading; CSV and JSON carry full precision and
parse back to the same numbers.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Sequence

from .core import SimplifiedDirection
from .criterion import DEFAULT_CONFIG, CriterionConfig, criterion_curve
from .errors import ValidationError
from .evaluate import AggregateReport, FrameResult

REPORT_FORMATS = ("text", "csv", "json")
CURVE_FORMATS = ("csv", "svg")

_LEVEL_LABELS = ("Without deviation", "1 level", "2 levels", "3 levels", "4 levels")


def frame_result_to_obj(result: FrameResult) -> dict:
    return {
        "frame_id": result.frame_id,
        "gt_direction": result.gt_direction.token,
        "gt_angle": None if result.gt_angle is None else result.gt_angle.degrees,
        "pred_angle": result.pred_angle.degrees,
        "pred_direction": result.pred_direction.token,
        "deviation": None if result.deviation is None else result.deviation.degrees,
        "level": result.level,
        "soft_accuracy": float(result.soft_accuracy),
    }


def report_to_obj(report: AggregateReport) -> dict:
    return {
        "n_frames": report.n_frames,
        "exact_match_rate": report.exact_match_rate,
        "mean_soft_accuracy": report.mean_soft_accuracy,
        "mean_deviation": report.mean_deviation,
        "deviation_excluded": report.deviation_excluded,
        "level_distribution": list(report.level_distribution),
        "one_level_split": {
            "below": report.one_level_below,
            "at_or_above": report.one_level_at_or_above,
            "threshold": report.split_threshold,
        },
        "deviation_histogram": {
            "inner_edges": list(report.histogram_edges),
            "counts": list(report.histogram_counts),
        },
    }


def _histogram_bin_labels(edges: Sequence[float]) -> list[str]:
    bounds = [0.0, *edges, None]
    labels = []
    for low, high in zip(bounds[:-1], bounds[1:]):
        high_txt = "inf" if high is None else f"{high:g}"
        labels.append(f"[{low:g}, {high_txt})")
    return labels


def _render_report_text(report: AggregateReport) -> str:
    lines = ["Guidance evaluation report", "=========================="]
    lines.append(f"Frames evaluated      {report.n_frames}")
    lines.append(f"Exact match rate      {report.exact_match_rate:.1f} %")
    lines.append(f"Mean soft accuracy    {report.mean_soft_accuracy:.2f} %")
    if report.mean_deviation is None:
        lines.append("Mean angle deviation  n/a (no frame carries an angle)")
    else:
        note = (
            f" ({report.deviation_excluded} frames without angle excluded)"
            if report.deviation_excluded
            else ""
        )
        lines.append(f"Mean angle deviation  {report.mean_deviation:.2f} deg{note}")
    lines.append("")

    thr = f"{report.split_threshold:g}"
    rows = [(_LEVEL_LABELS[0], report.level_distribution[0])]
    rows.append((_LEVEL_LABELS[1], report.level_distribution[1]))
    rows.append((f"  deviation < {thr} deg", report.one_level_below))
    rows.append((f"  deviation >= {thr} deg", report.one_level_at_or_above))
    for level in (2, 3, 4):
        rows.append((_LEVEL_LABELS[level], report.level_distribution[level]))
    width = max(len(label) for label, _ in rows)
    lines.append("Deviation levels")
    for label, value in rows:
        lines.append(f"  {label.ljust(width)}  {value:5.1f} %")
    lines.append("")

    lines.append("Angle deviation histogram (deg)")
    labels = _histogram_bin_labels(report.histogram_edges)
    label_width = max(len(label) for label in labels)
    for label, count in zip(labels, report.histogram_counts):
        lines.append(f"  {label.ljust(label_width)}  {count}")
    return "\n".join(lines) + "\n"


_PER_FRAME_HEADER = (
    "frame_id",
    "gt_direction",
    "gt_angle_deg",
    "pred_angle_deg",
    "pred_direction",
    "deviation_deg",
    "level",
    "soft_accuracy",
)


def per_frame_rows(per_frame: Sequence[FrameResult]) -> list[list]:
    rows = [list(_PER_FRAME_HEADER)]
    for r in per_frame:
        rows.append(
            [
                r.frame_id,
                r.gt_direction.token,
                "" if r.gt_angle is None else r.gt_angle.degrees,
                r.pred_angle.degrees,
                r.pred_direction.token,
                "" if r.deviation is None else r.deviation.degrees,
                r.level,
                float(r.soft_accuracy),
            ]
        )
    return rows


def _render_report_csv(report: AggregateReport, per_frame: Sequence[FrameResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["metric", "value"])
    writer.writerow(["n_frames", report.n_frames])
    writer.writerow(["exact_match_rate_pct", report.exact_match_rate])
    writer.writerow(["mean_soft_accuracy_pct", report.mean_soft_accuracy])
    writer.writerow(
        ["mean_deviation_deg", "" if report.mean_deviation is None else report.mean_deviation]
    )
    writer.writerow(["deviation_excluded", report.deviation_excluded])
    for level, share in enumerate(report.level_distribution):
        writer.writerow([f"level_{level}_pct", share])
    writer.writerow(["one_level_below_pct", report.one_level_below])
    writer.writerow(["one_level_at_or_above_pct", report.one_level_at_or_above])
    writer.writerow(["split_threshold_deg", report.split_threshold])
    for i, edge in enumerate(report.histogram_edges):
        writer.writerow([f"histogram_edge_{i}", edge])
    for i, count in enumerate(report.histogram_counts):
        writer.writerow([f"histogram_count_{i}", count])
    writer.writerow([])
    for row in per_frame_rows(per_frame):
        writer.writerow(row)
    return buf.getvalue()


def render_report(
    report: AggregateReport,
    per_frame: Sequence[FrameResult] = (),
    format: str = "text",
) -> str:
    """Render an aggregate report (with per-frame rows in csv/json form).

    Formats: "text" (aggregate tables), "csv" (aggregate key/value block,
    blank line, per-frame block), "json" ({"aggregate": ..., "per_frame": ...}).
    """
    if format == "text":
        return _render_report_text(report)
    if format == "csv":
        return _render_report_csv(report, per_frame)
    if format == "json":
        doc = {
            "aggregate": report_to_obj(report),
            "per_frame": [frame_result_to_obj(r) for r in per_frame],
        }
        return json.dumps(doc, indent=2) + "\n"
    raise ValidationError(
        f"unknown report format {format!r}; expected one of {list(REPORT_FORMATS)}"
    )


# ---------------------------------------------------------------------------
# criterion curves

def _curves(cfg: CriterionConfig, step: float):
    return [
        (direction.token, criterion_curve(direction, step, cfg))
        for direction in SimplifiedDirection
    ]


def _render_curves_csv(cfg: CriterionConfig, step: float) -> str:
    curves = _curves(cfg, step)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["angle_deg", *(token for token, _ in curves)])
    n = len(curves[0][1])
    for i in range(n):
        angle = curves[0][1][i][0]
        writer.writerow([angle, *(samples[i][1] for _, samples in curves)])
    return buf.getvalue()


# fixed geometry so output is stable; one panel per direction, stacked
_SVG_PANEL_W = 500
_SVG_PANEL_H = 110
_SVG_LEFT = 70
_SVG_TOP = 30
_SVG_VSPACE = 160


def _render_curves_svg(cfg: CriterionConfig, step: float) -> str:
    curves = _curves(cfg, step)
    total_h = _SVG_TOP + len(curves) * _SVG_VSPACE
    total_w = _SVG_LEFT + _SVG_PANEL_W + 30
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{total_w}" '
        f'height="{total_h}" viewBox="0 0 {total_w} {total_h}">',
        '<style>text{font-family:sans-serif;font-size:11px;fill:#333}'
        ".axis{stroke:#333;stroke-width:1}.grid{stroke:#ccc;stroke-width:0.5}"
        ".curve{stroke:#1f77b4;stroke-width:1.5;fill:none}</style>",
    ]

    def x_px(angle: float) -> float:
        return _SVG_LEFT + (angle + 90.0) / 180.0 * _SVG_PANEL_W

    for panel, (token, samples) in enumerate(curves):
        top = _SVG_TOP + panel * _SVG_VSPACE

        def y_px(value: float, top=top) -> float:
            return top + (1.0 - value) * _SVG_PANEL_H

        out.append(f'<text x="{_SVG_LEFT}" y="{top - 8}">{token}</text>')
        out.append(
            f'<line class="axis" x1="{_SVG_LEFT}" y1="{top + _SVG_PANEL_H}" '
            f'x2="{_SVG_LEFT + _SVG_PANEL_W}" y2="{top + _SVG_PANEL_H}"/>'
        )
        out.append(
            f'<line class="axis" x1="{_SVG_LEFT}" y1="{top}" '
            f'x2="{_SVG_LEFT}" y2="{top + _SVG_PANEL_H}"/>'
        )
        for tick in range(-90, 91, 30):
            tx = x_px(tick)
            out.append(
                f'<line class="grid" x1="{tx:.2f}" y1="{top}" '
                f'x2="{tx:.2f}" y2="{top + _SVG_PANEL_H}"/>'
            )
            out.append(
                f'<text x="{tx:.2f}" y="{top + _SVG_PANEL_H + 14}" '
                f'text-anchor="middle">{tick}</text>'
            )
        for tick in (0.0, 0.5, 1.0):
            ty = y_px(tick)
            out.append(
                f'<text x="{_SVG_LEFT - 8}" y="{ty + 4:.2f}" '
                f'text-anchor="end">{tick:g}</text>'
            )
        points = " ".join(
            f"{x_px(angle):.2f},{y_px(value):.2f}" for angle, value in samples
        )
        out.append(f'<polyline class="curve" points="{points}"/>')

    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_criterion_curves(
    cfg: CriterionConfig = DEFAULT_CONFIG,
    step: float = 1.0,
    format: str = "csv",
) -> str:
    """Render the five accuracy curves sampled across the angle domain.

    "csv" gives one angle column plus one column per direction; "svg" gives
    five stacked labeled panels (plateau, decay ramps, zero tails).
    """
    if format == "csv":
        return _render_curves_csv(cfg, step)
    if format == "svg":
        return _render_curves_svg(cfg, step)
    raise ValidationError(
        f"unknown curve format {format!r}; expected one of {list(CURVE_FORMATS)}"
    )
