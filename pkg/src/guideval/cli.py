"""Command line front end.

Subcommands: evaluate (score a prediction file against annotations),
curves (export the accuracy curves), synth (generate noisy synthetic
predictions), serve (start the local annotation/evaluation service).

Exit codes: 0 success, 1 validation failure, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from typing import Optional, Sequence

from .criterion import DEFAULT_CONFIG, load_config
from .errors import ValidationError
from .evaluate import DEFAULT_HISTOGRAM_EDGES, aggregate, evaluate_many
from .report import per_frame_rows, render_criterion_curves, render_report
from .store import (
    load_annotations,
    load_dataset,
    load_predictions,
    save_predictions,
    synthetic_predictions,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2

_REPORT_FILENAMES = {"text": "report.txt", "csv": "report.csv", "json": "report.json"}


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; 2 is reserved for I/O here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _parse_bins(text: str) -> tuple[float, ...]:
    try:
        edges = tuple(float(part) for part in text.split(","))
    except ValueError:
        raise ValidationError(f"--bins must be comma-separated numbers, got {text!r}")
    return edges


def _load_cfg(path: Optional[str]):
    return load_config(path) if path else DEFAULT_CONFIG


def _cmd_evaluate(args) -> int:
    cfg = _load_cfg(args.config)
    # sources are not opened during scoring, so missing image files are fine
    manifest = load_dataset(args.dataset, check_sources=False)
    annotations = load_annotations(args.annotations, manifest)
    predictions = load_predictions(args.predictions, manifest)
    results, skipped = evaluate_many(
        manifest, annotations, predictions, cfg, method_name=args.method
    )
    edges = _parse_bins(args.bins) if args.bins else DEFAULT_HISTOGRAM_EDGES
    report = aggregate(results, histogram_edges=edges, split_threshold=cfg.ramp_width)

    os.makedirs(args.out_dir, exist_ok=True)
    report_path = os.path.join(args.out_dir, _REPORT_FILENAMES[args.format])
    with open(report_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(render_report(report, results, format=args.format))
    per_frame_path = os.path.join(args.out_dir, "per_frame.csv")
    with open(per_frame_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerows(per_frame_rows(results))

    if skipped:
        print(
            f"note: {len(skipped)} frames had no annotation and were skipped: "
            + ", ".join(skipped),
            file=sys.stderr,
        )
    sys.stdout.write(render_report(report, results, format="text"))
    return EXIT_OK


def _cmd_curves(args) -> int:
    cfg = _load_cfg(args.config)
    doc = render_criterion_curves(cfg, step=args.step, format=args.format)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(doc)
    return EXIT_OK


def _cmd_synth(args) -> int:
    manifest = load_dataset(args.dataset, check_sources=False)
    annotations = load_annotations(args.annotations, manifest)
    predictions = synthetic_predictions(
        manifest, annotations, noise_stddev=args.noise, seed=args.seed,
        method_name=args.method,
    )
    save_predictions(predictions, args.out)
    return EXIT_OK


def _cmd_serve(args) -> int:
    from .service import run_service  # deferred: pulls in the HTTP stack

    run_service(
        dataset_path=args.dataset,
        annotations_path=args.annotations,
        config_path=args.config,
        host=args.host,
        port=args.port,
        ui_dir=args.ui,
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="guideval", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("evaluate", help="score predictions against annotations")
    p_eval.add_argument("--dataset", required=True, help="dataset manifest JSON")
    p_eval.add_argument("--annotations", required=True, help="annotation JSONL file")
    p_eval.add_argument("--predictions", required=True, help="prediction JSONL file")
    p_eval.add_argument("--config", help="criterion config JSON (defaults otherwise)")
    p_eval.add_argument("--method", help="prediction method to score (required only "
                        "when the file holds several)")
    p_eval.add_argument("--bins", help="histogram inner edges, e.g. 5,10,15")
    p_eval.add_argument("--out-dir", required=True, help="directory for report files")
    p_eval.add_argument("--format", choices=sorted(_REPORT_FILENAMES), default="text")
    p_eval.set_defaults(func=_cmd_evaluate)

    p_curves = sub.add_parser("curves", help="export accuracy curves")
    p_curves.add_argument("--config", help="criterion config JSON")
    p_curves.add_argument("--step", type=float, required=True, help="sample step, degrees")
    p_curves.add_argument("--format", choices=("csv", "svg"), required=True)
    p_curves.add_argument("--out", required=True, help="output file path")
    p_curves.set_defaults(func=_cmd_curves)

    p_synth = sub.add_parser("synth", help="generate noisy synthetic predictions")
    p_synth.add_argument("--dataset", required=True, help="dataset manifest JSON")
    p_synth.add_argument("--annotations", required=True, help="annotation JSONL file")
    p_synth.add_argument("--noise", type=float, required=True, help="stddev, degrees")
    p_synth.add_argument("--seed", type=int, required=True)
    p_synth.add_argument("--method", default="synthetic", help="method_name to record")
    p_synth.add_argument("--out", required=True, help="output predictions JSONL")
    p_synth.set_defaults(func=_cmd_synth)

    p_serve = sub.add_parser("serve", help="run the local annotation service")
    p_serve.add_argument("--dataset", required=True, help="dataset manifest JSON")
    p_serve.add_argument("--annotations", help="annotation JSONL to load and flush to")
    p_serve.add_argument("--config", help="criterion config JSON")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8765)
    p_serve.add_argument(
        "--ui", help="directory with the labeling frontend to host at /"
    )
    p_serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"guideval: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"guideval: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
