"""Command line interface tests (run in-process through main)."""

import json
import re
from pathlib import Path

from qrclab.cli import main

FAST_CASE = {
    "task": {"T": 120},
    "reservoir": {"n_qubits": 3},
    "protocol": {"washout": 20, "train_fraction": 0.7},
}


def write_config(tmp_path: Path, doc: dict, name="config.json") -> str:
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def run_dir_from(capsys) -> Path:
    out = capsys.readouterr().out
    match = re.search(r"run_dir: (.+)", out)
    assert match, f"no run_dir line in output:\n{out}"
    return Path(match.group(1))


class TestCaseCommands:
    def test_parity_bundle_contents(self, tmp_path, capsys):
        cfg = write_config(tmp_path, FAST_CASE)
        code = main(["case-parity", "--config", cfg, "--out", str(tmp_path / "runs")])
        assert code == 0
        run_dir = run_dir_from(capsys)
        metrics = json.loads((run_dir / "metrics.json").read_text())
        assert "train_accuracy" in metrics and "test_accuracy" in metrics
        assert (run_dir / "predictions.csv").exists()
        assert (run_dir / "features.csv").exists()
        assert (run_dir / "overlay.svg").exists()
        assert (run_dir / "config_echo.json").exists()

    def test_run_dir_name_format(self, tmp_path, capsys):
        cfg = write_config(tmp_path, FAST_CASE)
        assert main(["case-memory", "--config", cfg, "--out", str(tmp_path / "r")]) == 0
        run_dir = run_dir_from(capsys)
        assert re.fullmatch(r"run_\d{8}_\d{6}_[0-9a-f]{8}", run_dir.name)

    def test_seed_override_recorded(self, tmp_path, capsys):
        cfg = write_config(tmp_path, FAST_CASE)
        assert main(["case-parity", "--config", cfg, "--seed", "7", "--out", str(tmp_path / "r")]) == 0
        echo = json.loads((run_dir_from(capsys) / "config_echo.json").read_text())
        assert echo["master_seed"] == 7

    def test_defaults_without_config(self, tmp_path, capsys):
        # full Table-style defaults: slower (T=600, N=4) but must work
        assert main(["case-memory", "--out", str(tmp_path / "r")]) == 0
        echo = json.loads((run_dir_from(capsys) / "config_echo.json").read_text())
        assert echo["reservoir"]["n_qubits"] == 4
        assert echo["task"]["kind"] == "stm"

    def test_features_flag_off(self, tmp_path, capsys):
        doc = dict(FAST_CASE) | {"output": {"features": False, "plots": False}}
        cfg = write_config(tmp_path, doc)
        assert main(["case-parity", "--config", cfg, "--out", str(tmp_path / "r")]) == 0
        run_dir = run_dir_from(capsys)
        assert not (run_dir / "features.csv").exists()
        assert not (run_dir / "overlay.svg").exists()

    def test_metrics_summary_line_printed(self, tmp_path, capsys):
        cfg = write_config(tmp_path, FAST_CASE)
        main(["case-narma10", "--config", cfg, "--out", str(tmp_path / "r")])
        out = capsys.readouterr().out
        assert "test_r2=" in out


class TestSchemaFailures:
    def test_unknown_key_names_offender(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"qbits": 4})
        assert main(["case-parity", "--config", cfg]) == 1
        assert "qbits" in capsys.readouterr().err

    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["case-parity", "--config", str(path)]) == 1

    def test_kind_conflict(self, tmp_path):
        cfg = write_config(tmp_path, {"task": {"kind": "stm"}})
        assert main(["case-parity", "--config", cfg]) == 1

    def test_delta_zero(self, tmp_path):
        assert main(["theory-scan", "--delta", "0", "--out", str(tmp_path)]) == 1

    def test_bad_qubits_flag(self, tmp_path):
        assert main(["theory-scan", "--qubits", "4,3", "--out", str(tmp_path)]) == 1
        assert main(["theory-scan", "--qubits", "x", "--out", str(tmp_path)]) == 1


class TestRuntimeFailures:
    def test_too_short_series_exit_2(self, tmp_path):
        cfg = write_config(tmp_path, {"task": {"T": 40}})
        assert main(["case-parity", "--config", cfg, "--out", str(tmp_path / "r")]) == 2

    def test_no_partial_bundle_on_failure(self, tmp_path):
        out = tmp_path / "r"
        cfg = write_config(tmp_path, {"task": {"T": 40}})
        main(["case-parity", "--config", cfg, "--out", str(out)])
        assert not out.exists() or not any(out.iterdir())

    def test_unwritable_output_exit_3(self, tmp_path):
        blocker = tmp_path / "blocked"
        blocker.write_text("a file, not a directory")
        cfg = write_config(tmp_path, FAST_CASE)
        assert main(["case-parity", "--config", cfg, "--out", str(blocker)]) == 3


class TestTheoryScan:
    def test_scan_rows_match_qubits(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"task": {"T": 100}, "protocol": {"washout": 20}})
        code = main([
            "theory-scan", "--config", cfg, "--qubits", "2,3,4",
            "--replicates", "2", "--out", str(tmp_path / "r"),
        ])
        assert code == 0
        run_dir = run_dir_from(capsys)
        lines = (run_dir / "scan.csv").read_text().strip().split("\n")
        assert len(lines) == 4  # header + 3 rows
        assert (run_dir / "scan.svg").exists()

    def test_rerun_identical_scan_csv(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"task": {"T": 100}, "protocol": {"washout": 20}})
        argv = ["theory-scan", "--config", cfg, "--qubits", "2,3",
                "--replicates", "2", "--out", str(tmp_path / "r")]
        assert main(argv) == 0
        first = (run_dir_from(capsys) / "scan.csv").read_bytes()
        assert main(argv) == 0
        second = (run_dir_from(capsys) / "scan.csv").read_bytes()
        assert first == second


class TestRoundTrip:
    def test_rerun_from_echo_is_byte_identical(self, tmp_path, capsys):
        cfg = write_config(tmp_path, FAST_CASE)
        assert main(["case-parity", "--config", cfg, "--out", str(tmp_path / "r")]) == 0
        first = run_dir_from(capsys)
        echo_path = first / "config_echo.json"
        assert main(["case-parity", "--config", str(echo_path)]) == 0
        second = run_dir_from(capsys)
        assert second != first
        for name in ("predictions.csv", "features.csv"):
            assert (first / name).read_bytes() == (second / name).read_bytes()
