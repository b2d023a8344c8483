from __future__ import annotations

import json
import os

import pytest

from lbmcrack.cli import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, main
from lbmcrack.experiments import steady_strip_config
from lbmcrack.io import read_csv


def _config(tmp_path, t_max=2.0, **kw):
    cfg = steady_strip_config(0.4, dh=1 / 8, t0=1.0, b=10.0, r_min=0.25, **kw)
    cfg.run.t_max = t_max
    path = tmp_path / "strip.json"
    path.write_text(cfg.to_json())
    return path


def test_run_writes_csv_and_snapshots(tmp_path):
    out = tmp_path / "out"
    rc = main(["run", str(_config(tmp_path)), "--out", str(out), "--snapshot-every", "8"])
    assert rc == EXIT_OK
    rows = read_csv(out / "strip.csv")
    assert len(rows) == 32 and rows[-1]["t"] == 2.0
    assert rows[-1]["K_left"] is None and rows[-1]["da_right"] == pytest.approx(0.8)
    snaps = sorted(os.listdir(out / "snapshots"))
    assert snaps == [f"w_{k:07d}.vtk" for k in (8, 16, 24, 32)]


def test_run_is_byte_identical(tmp_path):
    cfg = _config(tmp_path)
    for name in ("a", "b"):
        assert main(["run", str(cfg), "--out", str(tmp_path / name)]) == EXIT_OK
    assert (tmp_path / "a/strip.csv").read_bytes() == (tmp_path / "b/strip.csv").read_bytes()


def test_config_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"run": {"t_max": 0}}')
    assert main(["run", str(bad)]) == EXIT_CONFIG
    assert main(["run", str(tmp_path / "missing.json")]) == EXIT_CONFIG
    assert main(["kcrit", "--w0", "0.001", "--dh", "0.0625", "--out", str(tmp_path)]) == EXIT_CONFIG
    assert "raise w0" in capsys.readouterr().err


def test_divergence_exits_3(tmp_path):
    assert main(["run", str(_config(tmp_path, t_max=10.0, kappa=1.0)), "--out", str(tmp_path)]) == EXIT_NUMERICAL


def test_steady_prints_statistics(tmp_path, capsys):
    assert main(["steady", "--v", "0.2", "--dh", "0.125", "--out", str(tmp_path)]) == EXIT_OK
    stats = json.loads(capsys.readouterr().out)
    assert set(stats) == {"v", "median", "mean", "std", "minus25", "plus75"}
    assert (tmp_path / "steady_v0.2.csv").exists() and (tmp_path / "steady_v0.2.json").exists()


def test_calibrate(capsys):
    assert main(["calibrate", "--kappa", "2.0", "--travel", "200"]) == EXIT_OK
    row = json.loads(capsys.readouterr().out)
    assert row["ok"] and abs(row["speed_ratio"] - 1) < 0.02


def test_usage_error():
    with pytest.raises(SystemExit):
        main(["steady"])
