import json
import math

import numpy as np
import pytest

from leobeam import (ConfigError, ExperimentConfig, ResultTable, ScalingPoint,
                     empirical_cdf, run_bound_chain, run_cdf, run_gain_map,
                     run_maxload_study, run_power_sweep, run_threshold_scan,
                     summarize_power_sweep)


def _small(**kw):
    base = dict(trials=5, seed=42)
    base.update(kw)
    return ExperimentConfig().replace(**base)


def test_noise_and_rho_conversion():
    cfg = ExperimentConfig()
    assert cfg.noise_power_dbm == pytest.approx(-107.01029995663981, rel=1e-12)
    assert math.log10(cfg.rho(40.0)) == pytest.approx(14.701029995663982, rel=1e-12)


def test_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig(trials=0)
    with pytest.raises(ConfigError):
        ExperimentConfig(r_cell_km=-3.0)
    with pytest.raises(ConfigError):
        ExperimentConfig(alpha_grid=[0.5, 1.5])
    with pytest.raises(ConfigError):
        ExperimentConfig(array_kind="dish")


def test_config_from_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"trials": 7, "tx_power_dbm": [35.0, 45.0]}))
    cfg = ExperimentConfig.from_file(path)
    assert cfg.trials == 7 and cfg.power_list == [35.0, 45.0]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"no_such_key": 1}))
    with pytest.raises(ConfigError):
        ExperimentConfig.from_file(bad)
    with pytest.raises(ConfigError):
        ExperimentConfig.from_file(tmp_path / "missing.json")


def test_result_table_formatting(tmp_path):
    t = ResultTable(["a", "b"], [(1, 0.1), (2, 1 / 3)], {"driver": "demo"})
    text = t.to_csv_string()
    assert text.splitlines()[0] == "a,b"
    assert "0.33333333333333331" in text  # 17 significant digits
    path = t.write(tmp_path, "demo")
    assert path.read_text() == text
    meta = json.loads((tmp_path / "demo_meta.json").read_text())
    assert meta["driver"] == "demo"
    np.testing.assert_array_equal(t.column("a"), [1, 2])


def test_empirical_cdf():
    grid, prob = empirical_cdf([3.0, 1.0, 2.0])
    np.testing.assert_allclose(grid, [1.0, 2.0, 3.0])
    np.testing.assert_allclose(prob, [1 / 3, 2 / 3, 1.0])


def test_run_cdf_deterministic_and_thread_invariant():
    cfg = _small(r_cell_km=[60.0, 90.0], trials=4)
    a = run_cdf(cfg)
    b = run_cdf(cfg)
    assert a.to_csv_string() == b.to_csv_string()
    c = run_cdf(cfg.replace(threads=3))
    assert a.to_csv_string() == c.to_csv_string()
    assert a.metadata == c.metadata  # threads excluded from the snapshot


def test_run_gain_map_zero_q_column_and_regions():
    cfg = _small(array_kind="ula", m_x=256, m_y=1, trials=30, tx_power_dbm=40.0)
    # spec example cells: spatial-dense + recovered -> positive;
    # spatial-sparse with snapshots -> nonpositive; q = 0 -> exactly zero
    tab = run_gain_map(cfg, p_grid=[0.2, 0.7], q_grid=[0.0, 0.4, 0.6])
    gain = {(row[0], row[1]): row[6] for row in tab.rows}
    assert gain[(0.2, 0.0)] == 0.0 and gain[(0.7, 0.0)] == 0.0
    assert gain[(0.7, 0.4)] > 0.0
    assert gain[(0.2, 0.6)] <= 0.0


def test_run_bound_chain_small():
    cfg = _small(array_kind="ula", m_x=256, m_y=1, k_users=16,
                 tx_power_dbm=30.0, trials=25, n_list=[2, 3], n_bins=16)
    tab = run_bound_chain(cfg)
    again = run_bound_chain(cfg)
    assert tab.to_csv_string() == again.to_csv_string()
    for row in tab.rows:
        n, emp, dom, sur, low = row
        assert emp <= dom + 1e-9
        assert dom <= sur + 1e-9
    with pytest.raises(ConfigError):
        run_bound_chain(cfg.replace(array_kind="upa", m_x=16, m_y=16))


def test_run_maxload_columns_and_floor():
    cfg = _small(array_kind="ula", trials=40, m_list=[256, 1024], p=0.9, r=0.5)
    tab = run_maxload_study(cfg)
    assert tab.column("pigeonhole_floor")[0] <= tab.column("mean_max_load")[0]
    assert "fitted_slope" in tab.metadata
    assert tab.column("n_bins").tolist() == [16, 32]


def test_run_maxload_critical_grows_slowly():
    cfg = _small(array_kind="ula", trials=60, m_list=[256, 1024, 4096, 16384],
                 p=0.5, q=0.0, r=0.5)
    tab = run_maxload_study(cfg, point=ScalingPoint(0.5, 0.0, 0.5, "ula"))
    assert tab.metadata["fitted_slope"] < 0.1


def test_run_maxload_planar_and_snapshot_bins():
    cfg = _small(trials=20, m_list=[256])
    planar = run_maxload_study(cfg, point=ScalingPoint(0.5, 0.0, 0.25, "upa"))
    assert planar.column("n_bins")[0] == 16  # (256^0.25)^2 = M^(1-2r)
    stacked = run_maxload_study(cfg, point=ScalingPoint(0.7, 0.25, 0.5, "ula"))
    assert stacked.column("n_bins")[0] == 16 * 4  # spatial x Doppler bins
    assert stacked.column("mean_max_load")[0] >= 1.0


def test_run_power_sweep_summary_and_determinism():
    cfg = _small(trials=3, u_candidates=48, k_users=8,
                 tx_power_dbm=[40.0, 50.0], alpha_grid=[0.5], tune_trials=2)
    tab = run_power_sweep(cfg)
    assert tab.to_csv_string() == run_power_sweep(cfg).to_csv_string()
    assert tab.metadata["alpha_st"] == 0.5
    summary = summarize_power_sweep(tab)
    assert summary.column("power_dbm").tolist() == [40.0, 50.0]
    assert all(summary.column("mean_space_time_rate") > 0)


def test_run_threshold_scan():
    cfg = _small(trials=4, u_candidates=32, k_users=8, tx_power_dbm=45.0,
                 alpha_grid=[0.4, 0.6])
    tab = run_threshold_scan(cfg)
    assert tab.metadata["best_alpha"] in (0.4, 0.6)
    assert [row[0] for row in tab.rows] == [0.4, 0.6]
