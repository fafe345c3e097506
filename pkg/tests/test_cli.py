import csv
import json
import subprocess
import sys

import pytest

from gaaf.cli import EXIT_CONFIG, EXIT_UNSTABLE, SUMMARY_HEADER, ConfigError, main, parse_taps

SMALL = ["--runs", "2", "--iterations", "30", "--window", "10"]


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_run_writes_outputs(tmp_path):
    assert main(["run", "--taps", "3", *SMALL, "--out", str(tmp_path)]) == 0
    curve = read_rows(tmp_path / "learning_curve.csv")
    assert len(curve) == 30
    assert list(curve[0]) == ["iteration", "mse", "emse", "mse_db", "emse_db"]
    summary = read_rows(tmp_path / "summary.csv")
    assert len(summary) == 1 and list(summary[0]) == SUMMARY_HEADER
    assert summary[0]["mask"] == "full3" and summary[0]["M"] == "3"
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert {f["file"] for f in manifest["files"]} == {"learning_curve.csv", "summary.csv"}
    assert manifest["config"]["taps"] == 3


def test_single_iteration_smoke(tmp_path):
    assert main(["run", "--runs", "1", "--iterations", "1", "--out", str(tmp_path)]) == 0
    assert len(read_rows(tmp_path / "learning_curve.csv")) == 1
    assert len(read_rows(tmp_path / "summary.csv")) == 1


def test_bad_mask_lists_choices(tmp_path, capsys):
    assert main(["run", "--mask", "octonion", "--out", str(tmp_path)]) == EXIT_CONFIG
    err = capsys.readouterr().err
    for name in ("full3", "rotor3", "complex", "real"):
        assert name in err


def test_bad_values(tmp_path):
    assert main(["run", "--taps", "three", "--out", str(tmp_path)]) == EXIT_CONFIG
    assert main(["run", "--runs", "0", "--out", str(tmp_path)]) == EXIT_CONFIG
    assert main(["run", "--config", str(tmp_path / "missing.cfg")]) == EXIT_CONFIG


def test_unstable_exit_code(tmp_path, capsys):
    assert main(["run", "--mu", "0.1", *SMALL, "--out", str(tmp_path)]) == EXIT_UNSTABLE
    assert "2 - mu" in capsys.readouterr().err
    assert not (tmp_path / "summary.csv").exists()


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("# small rotor run\nmask = rotor3\ntaps = 4\nsigma-v2 = 1e-5\nruns = 2\niterations = 20\nwindow = 5\n")
    out = tmp_path / "a"
    assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0
    row = read_rows(out / "summary.csv")[0]
    assert (row["mask"], row["M"], row["sigma_v2"]) == ("rotor3", "4", "1e-05")
    out = tmp_path / "b"
    assert main(["run", "--config", str(cfg), "--taps", "2", "--out", str(out)]) == 0
    row = read_rows(out / "summary.csv")[0]
    assert (row["mask"], row["M"]) == ("rotor3", "2")


def test_config_file_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert main(["run", "--config", str(bad)]) == EXIT_CONFIG
    bad.write_text("taps 3\n")
    assert main(["run", "--config", str(bad)]) == EXIT_CONFIG


def test_real_theory_value(tmp_path):
    assert main(["run", "--mask", "real", *SMALL, "--out", str(tmp_path)]) == 0
    row = read_rows(tmp_path / "summary.csv")[0]
    assert float(row["emse_theory"]) == pytest.approx(2.564e-5, rel=1e-3)
    assert float(row["mse_theory"]) - float(row["emse_theory"]) == pytest.approx(1e-3, rel=1e-9)


def test_sweep(tmp_path, capsys):
    args = ["sweep", "--mask", "real", "--sweep", "1,2,500", *SMALL, "--out", str(tmp_path)]
    assert main(args) == 0
    rows = read_rows(tmp_path / "sweep.csv")
    assert [r["M"] for r in rows] == ["1", "2", "500"]
    assert [r["unstable"] for r in rows] == ["0", "0", "1"]
    assert rows[2]["mse_ss"] == "nan"
    assert "M = 500" in capsys.readouterr().err


def test_parse_taps():
    assert parse_taps("1,5,10") == [1, 5, 10]
    assert parse_taps("1-4") == [1, 2, 3, 4]
    assert parse_taps("2, 7-8") == [2, 7, 8]
    assert len(parse_taps("1-40")) == 40
    for bad in ("", "0", "a-b", "1,,x"):
        with pytest.raises(ConfigError):
            parse_taps(bad)


def test_deterministic_outputs(tmp_path):
    for sub in ("a", "b"):
        assert main(["run", "--mask", "complex", *SMALL, "--seed", "4", "--out", str(tmp_path / sub)]) == 0
    for name in ("learning_curve.csv", "summary.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_csv_values_round_trip(tmp_path):
    from gaaf.sim import ExperimentConfig, run_experiment

    assert main(["run", "--taps", "2", *SMALL, "--seed", "9", "--out", str(tmp_path)]) == 0
    curve = run_experiment(ExperimentConfig(taps=2, runs=2, iterations=30, seed=9))
    rows = read_rows(tmp_path / "learning_curve.csv")
    assert [float(r["mse"]) for r in rows] == curve.mse.tolist()
    assert [float(r["emse"]) for r in rows] == curve.emse.tolist()


def test_table(capsys):
    assert main(["table", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert [line.split() for line in lines] == [["1", "γ1"], ["1", "1", "γ1"], ["γ1", "γ1", "1"]]
    assert main(["table", "7"]) == EXIT_CONFIG
    assert main(["table", "0"]) == EXIT_CONFIG


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gaaf", "table", "2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.split("\n")[0].split() == ["1", "γ1", "γ2", "γ12"]
    proc = subprocess.run([sys.executable, "-m", "gaaf", "table", "9"], capture_output=True, text=True)
    assert proc.returncode == 2
