import json
import subprocess
import sys

import pytest

from leobeam.cli import main

# tiny configs so every driver finishes in seconds
TINY = {
    "cdf": {"trials": 3, "r_cell_km": [60.0, 90.0]},
    "bound-chain": {"trials": 6, "n_list": [2, 3]},
    "gain-map": {"trials": 3, "p_grid": [0.3, 0.7], "q_grid": [0.0, 0.4]},
    "power-sweep": {"trials": 2, "u_candidates": 32, "k_users": 6,
                    "tx_power_dbm": [40.0, 50.0], "alpha_grid": [0.5]},
    "maxload": {"trials": 5, "m_list": [256, 1024]},
    "tune-alpha": {"trials": 2, "u_candidates": 24, "k_users": 6,
                   "alpha_grid": [0.4, 0.8]},
}


def _write_cfg(tmp_path, cmd):
    path = tmp_path / f"{cmd}.json"
    path.write_text(json.dumps(TINY[cmd]))
    return path


@pytest.mark.parametrize("cmd", sorted(TINY))
def test_driver_runs_and_is_byte_identical(tmp_path, cmd):
    cfg = _write_cfg(tmp_path, cmd)
    out1, out2, out3 = tmp_path / "run1", tmp_path / "run2", tmp_path / "run3"
    base = [cmd, "--config", str(cfg), "--seed", "11"]
    assert main(base + ["--out", str(out1)]) == 0
    assert main(base + ["--out", str(out2)]) == 0
    assert main(base + ["--out", str(out3), "--threads", "4"]) == 0
    name = cmd.replace("-", "_")
    ref = (out1 / f"{name}.csv").read_bytes()
    assert ref == (out2 / f"{name}.csv").read_bytes()
    assert ref == (out3 / f"{name}.csv").read_bytes()
    ref_meta = (out1 / f"{name}_meta.json").read_bytes()
    assert ref_meta == (out3 / f"{name}_meta.json").read_bytes()


def test_classify_command(tmp_path, capsys):
    out = tmp_path / "cls"
    assert main(["classify", "--p", "0.5", "--r", "0.3", "--out", str(out)]) == 0
    assert "sparse" in capsys.readouterr().out
    text = (out / "classify.csv").read_text()
    assert "M^p log M" in text


def test_power_sweep_writes_summary(tmp_path):
    cfg = _write_cfg(tmp_path, "power-sweep")
    out = tmp_path / "ps"
    assert main(["power-sweep", "--config", str(cfg), "--out", str(out)]) == 0
    assert (out / "power_sweep_summary.csv").exists()


def test_plot_flag(tmp_path):
    cfg = _write_cfg(tmp_path, "maxload")
    out = tmp_path / "ml"
    assert main(["maxload", "--config", str(cfg), "--out", str(out), "--plot"]) == 0
    assert (out / "maxload.svg").exists()


def test_config_error_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"bogus_key": 1}))
    assert main(["cdf", "--config", str(bad), "--out", str(tmp_path / "x")]) == 2
    worse = tmp_path / "worse.json"
    worse.write_text(json.dumps({"trials": 0}))
    assert main(["cdf", "--config", str(worse), "--out", str(tmp_path / "y")]) == 2


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "leobeam", "classify", "--p", "0.9", "--r", "0.5",
         "--out", str(tmp_path / "out")],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "dense" in proc.stdout
