import csv
import json
import os

import pytest

from guideval.cli import EXIT_IO, EXIT_OK, EXIT_VALIDATION, main

from conftest import GOLD, build_fixture_files


def run_evaluate(paths, out_dir, *extra):
    return main(
        [
            "evaluate",
            "--dataset", paths["manifest"],
            "--annotations", paths["annotations"],
            "--predictions", paths["predictions"],
            "--out-dir", str(out_dir),
            *extra,
        ]
    )


class TestEvaluateCommand:
    def test_happy_path_writes_report_and_per_frame(self, fixture_files, tmp_path, capsys):
        out = tmp_path / "out"
        assert run_evaluate(fixture_files, out, "--format", "json") == EXIT_OK
        doc = json.loads((out / "report.json").read_text())
        assert doc["aggregate"]["n_frames"] == 10
        assert doc["aggregate"]["mean_soft_accuracy"] == pytest.approx(
            GOLD["mean_soft_accuracy"], abs=1e-9
        )
        assert len(doc["per_frame"]) == 10
        rows = list(csv.reader((out / "per_frame.csv").open()))
        assert len(rows) == 11
        assert "94.72 %" in capsys.readouterr().out

    def test_two_runs_byte_identical(self, fixture_files, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            for fmt in ("text", "csv", "json"):
                assert run_evaluate(fixture_files, out, "--format", fmt) == EXIT_OK
        for name in ("report.txt", "report.csv", "report.json", "per_frame.csv"):
            assert (a / name).read_bytes() == (b / name).read_bytes(), name

    def test_text_report_file(self, fixture_files, tmp_path):
        out = tmp_path / "out"
        assert run_evaluate(fixture_files, out, "--format", "text") == EXIT_OK
        text = (out / "report.txt").read_text()
        assert "Frames evaluated      10" in text
        assert "94.72 %" in text

    def test_custom_bins_change_the_histogram(self, fixture_files, tmp_path):
        out = tmp_path / "out"
        assert run_evaluate(fixture_files, out, "--format", "json", "--bins", "20,30") == EXIT_OK
        doc = json.loads((out / "report.json").read_text())
        assert doc["aggregate"]["deviation_histogram"]["counts"] == [9, 1, 0]

    def test_custom_config_file(self, fixture_files, tmp_path):
        cfg_path = tmp_path / "criterion.json"
        cfg_path.write_text(json.dumps({"ramp_width": 5.0, "gaussian_k": 0.1}))
        out = tmp_path / "out"
        assert run_evaluate(
            fixture_files, out, "--format", "json", "--config", str(cfg_path)
        ) == EXIT_OK
        doc = json.loads((out / "report.json").read_text())
        assert doc["aggregate"]["one_level_split"]["threshold"] == 5.0

    def test_malformed_bins_exit_validation(self, fixture_files, tmp_path, capsys):
        code = run_evaluate(fixture_files, tmp_path / "out", "--bins", "5;10")
        assert code == EXIT_VALIDATION
        assert "bins" in capsys.readouterr().err

    def test_bad_predictions_exit_validation(self, fixture_files, tmp_path, capsys):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"schema_version": 1, "frame_id": "ghost", "angle": 1.0, "method_name": "m"}\n')
        code = main(
            [
                "evaluate",
                "--dataset", fixture_files["manifest"],
                "--annotations", fixture_files["annotations"],
                "--predictions", str(bad),
                "--out-dir", str(tmp_path / "out"),
            ]
        )
        assert code == EXIT_VALIDATION
        assert "ghost" in capsys.readouterr().err

    def test_missing_dataset_exit_io(self, fixture_files, tmp_path, capsys):
        code = main(
            [
                "evaluate",
                "--dataset", str(tmp_path / "absent.json"),
                "--annotations", fixture_files["annotations"],
                "--predictions", fixture_files["predictions"],
                "--out-dir", str(tmp_path / "out"),
            ]
        )
        assert code == EXIT_IO
        assert "i/o error" in capsys.readouterr().err

    def test_usage_errors_exit_validation_not_two(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["evaluate", "--no-such-flag"])
        assert exc.value.code == EXIT_VALIDATION

    def test_method_flag_disambiguates(self, fixture_files, tmp_path):
        # append a second method to the predictions file
        with open(fixture_files["predictions"]) as fh:
            lines = fh.read().strip().splitlines()
        with open(fixture_files["predictions"], "w") as fh:
            for line in lines:
                fh.write(line + "\n")
            for line in lines:
                obj = json.loads(line)
                obj["method_name"] = "other"
                obj["angle"] = 0.0
                fh.write(json.dumps(obj) + "\n")
        out = tmp_path / "out"
        assert run_evaluate(fixture_files, out) == EXIT_VALIDATION
        assert run_evaluate(fixture_files, out, "--method", "cv_baseline") == EXIT_OK


class TestCurvesCommand:
    def test_csv_export(self, tmp_path):
        out = tmp_path / "curves.csv"
        code = main(["curves", "--step", "1", "--format", "csv", "--out", str(out)])
        assert code == EXIT_OK
        rows = list(csv.reader(out.open()))
        assert len(rows) == 182

    def test_svg_export(self, tmp_path):
        out = tmp_path / "curves.svg"
        code = main(["curves", "--step", "1", "--format", "svg", "--out", str(out)])
        assert code == EXIT_OK
        assert out.read_text().startswith("<svg")

    def test_bad_step_exits_validation(self, tmp_path, capsys):
        out = tmp_path / "curves.csv"
        code = main(["curves", "--step", "0", "--format", "csv", "--out", str(out)])
        assert code == EXIT_VALIDATION

    def test_unwritable_out_exits_io(self, tmp_path):
        out = tmp_path / "no" / "such" / "dir" / "curves.csv"
        code = main(["curves", "--step", "1", "--format", "csv", "--out", str(out)])
        assert code == EXIT_IO


class TestSynthCommand:
    def test_deterministic_output_files(self, fixture_files, tmp_path):
        outs = []
        for name in ("s1.jsonl", "s2.jsonl"):
            out = tmp_path / name
            code = main(
                [
                    "synth",
                    "--dataset", fixture_files["manifest"],
                    "--annotations", fixture_files["annotations"],
                    "--noise", "6",
                    "--seed", "17",
                    "--out", str(out),
                ]
            )
            assert code == EXIT_OK
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_zero_noise_scores_perfectly_end_to_end(self, fixture_files, tmp_path):
        preds = tmp_path / "perfect.jsonl"
        assert main(
            [
                "synth",
                "--dataset", fixture_files["manifest"],
                "--annotations", fixture_files["annotations"],
                "--noise", "0",
                "--seed", "1",
                "--out", str(preds),
            ]
        ) == EXIT_OK
        out = tmp_path / "out"
        code = main(
            [
                "evaluate",
                "--dataset", fixture_files["manifest"],
                "--annotations", fixture_files["annotations"],
                "--predictions", str(preds),
                "--out-dir", str(out),
                "--format", "json",
            ]
        )
        assert code == EXIT_OK
        doc = json.loads((out / "report.json").read_text())
        assert doc["aggregate"]["mean_soft_accuracy"] == 100.0
        assert doc["aggregate"]["mean_deviation"] == 0.0

    def test_negative_noise_exits_validation(self, fixture_files, tmp_path):
        code = main(
            [
                "synth",
                "--dataset", fixture_files["manifest"],
                "--annotations", fixture_files["annotations"],
                "--noise", "-2",
                "--seed", "1",
                "--out", str(tmp_path / "x.jsonl"),
            ]
        )
        assert code == EXIT_VALIDATION
