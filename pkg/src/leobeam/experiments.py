"""Seeded Monte Carlo drivers behind the figure-class experiments, plus the
flat config document and CSV/JSON persistence they share.

Every driver is a deterministic function of (config, seed): per-trial
generators are derived through a splittable seed sequence and aggregation
runs in a fixed order, so repeat runs emit identical bytes regardless of the
thread count.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import __version__
from .channel import (ULA, UPA, ArrayConfig, build_channel,
                      build_spacetime_channel, draw_users)
from .crowding import ScalingPoint, int_power, max_load, predicted_max_load
from .bounds import ConditioningError, bound_chain, cluster_eig_lower
from .precoding import (gram, gram_from_users, mrt_sum_rate, rate_from_gram,
                        tdma_sum_rate)
from .scheduling import (semi_orthogonal_select, space_doppler_select,
                         threshold_curve, top_norm_select)


class ConfigError(ValueError):
    """Invalid experiment configuration (CLI exit code 2)."""


class NumericalError(RuntimeError):
    """Unrecoverable numerical breakdown (CLI exit code 3)."""


# ---------------------------------------------------------------------------
#  Configuration
# ---------------------------------------------------------------------------

@dataclass
class ExperimentConfig:
    """Flat, typed experiment configuration.

    Scalars accept sweep lists where a driver sweeps them (tx_power_dbm,
    r_cell_km). Fields past the blank group are driver-specific knobs with
    harmless defaults elsewhere.
    """

    f_c_hz: float = 1.9925e9
    bandwidth_hz: float = 5e6
    altitude_km: float = 600.0
    noise_density_dbm_hz: float = -174.0
    tx_power_dbm: object = 40.0          # scalar or sweep list, dBm
    array_kind: str = UPA
    m_x: int = 16
    m_y: int = 16
    k_users: int = 16
    l_snapshots: int = 3
    r_cell_km: object = 60.0             # scalar or sweep list, km
    u_candidates: int = 256
    trials: int = 1000
    seed: int = 0
    alpha_grid: list = field(default_factory=lambda: [0.2, 0.3, 0.4, 0.5, 0.6, 0.8, 1.0])
    threads: int = 1
    path_loss_exponent: float = 2.0
    unit_gain: bool = False

    n_list: list = field(default_factory=lambda: [2, 3, 4, 5, 6])
    n_bins: int = 16
    p_grid: list = field(default_factory=lambda: [0.1, 0.26, 0.42, 0.58, 0.74, 0.9])
    q_grid: list = field(default_factory=lambda: [0.0, 0.16, 0.32, 0.48, 0.64, 0.8])
    r_exponent: float = 0.6
    m_list: list = field(default_factory=lambda: [256, 1024, 4096, 16384])
    p: float = 0.9
    q: float = 0.0
    r: float = 0.5
    tune_trials: int = 50

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        for name in ("f_c_hz", "bandwidth_hz", "altitude_km", "u_candidates",
                     "k_users", "l_snapshots", "m_x", "m_y", "tune_trials"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.array_kind not in (ULA, UPA):
            raise ConfigError(f"unknown array kind {self.array_kind!r}")
        for r in np.atleast_1d(self.r_cell_km):
            if r <= 0:
                raise ConfigError("cell half-width must be positive")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        for a in self.alpha_grid:
            if not 0.0 < a <= 1.0:
                raise ConfigError("alpha grid values must lie in (0, 1]")

    @property
    def array(self) -> ArrayConfig:
        return ArrayConfig(self.array_kind, self.m_x, self.m_y)

    @property
    def noise_power_dbm(self) -> float:
        return self.noise_density_dbm_hz + 10.0 * math.log10(self.bandwidth_hz)

    def rho(self, tx_power_dbm: float) -> float:
        """Linear transmit SNR 10^((P - sigma^2)/10)."""
        return 10.0 ** ((tx_power_dbm - self.noise_power_dbm) / 10.0)

    @property
    def power_list(self) -> list:
        return [float(p) for p in np.atleast_1d(self.tx_power_dbm)]

    @property
    def r_cell_list(self) -> list:
        return [float(r) for r in np.atleast_1d(self.r_cell_km)]

    def replace(self, **kw) -> "ExperimentConfig":
        return replace(self, **kw)

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            if f.name == "threads":  # execution detail, not part of the result
                continue
            v = getattr(self, f.name)
            out[f.name] = list(v) if isinstance(v, (tuple, np.ndarray)) else v
        return out

    @staticmethod
    def from_file(path, base: "ExperimentConfig" = None) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        cfg = base if base is not None else ExperimentConfig()
        known = {f.name for f in fields(ExperimentConfig)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cfg.replace(**raw)


# ---------------------------------------------------------------------------
#  Result tables
# ---------------------------------------------------------------------------

def _format_value(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.17g}"


@dataclass
class ResultTable:
    columns: list
    rows: list
    metadata: dict = field(default_factory=dict)

    def column(self, name) -> np.ndarray:
        j = self.columns.index(name)
        return np.array([row[j] for row in self.rows])

    def to_csv_string(self) -> str:
        lines = [",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(_format_value(v) for v in row))
        return "\n".join(lines) + "\n"

    def write(self, outdir, name: str) -> Path:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        csv_path = outdir / f"{name}.csv"
        csv_path.write_text(self.to_csv_string())
        meta_path = outdir / f"{name}_meta.json"
        meta_path.write_text(json.dumps(self.metadata, indent=2, sort_keys=True) + "\n")
        return csv_path


def _metadata(driver: str, config: ExperimentConfig, **extra) -> dict:
    meta = {"driver": driver, "version": __version__, "config": config.to_dict()}
    meta.update(extra)
    return meta


def _seed_key(*parts) -> list:
    """Entropy list for a derived seed; string parts hash deterministically."""
    out = []
    for p in parts:
        if isinstance(p, str):
            out.append(int.from_bytes(hashlib.sha256(p.encode()).digest()[:8], "big"))
        else:
            out.append(int(p))
    return out


def _run_trials(worker, n_trials: int, seed, threads: int) -> list:
    """Apply worker(i, rng) across derived per-trial generators; the output
    order is by trial index, independent of the thread count."""
    seeds = np.random.SeedSequence(seed).spawn(n_trials)

    def call(i):
        return worker(i, np.random.default_rng(seeds[i]))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(call, range(n_trials)))
    return [call(i) for i in range(n_trials)]


def empirical_cdf(values) -> tuple:
    """Sorted sample grid and cumulative probabilities (i+1)/n."""
    v = np.sort(np.asarray(values, dtype=float))
    return v, np.arange(1, len(v) + 1) / len(v)


# ---------------------------------------------------------------------------
#  Drivers
# ---------------------------------------------------------------------------

def run_cdf(config: ExperimentConfig) -> ResultTable:
    """Per-trial ZF and space-time sum rates per cell size (rate CDF study).

    Columns: r_km, trial, zf_rate, space_time_rate [b/s/Hz], and 0/1
    collapse flags for numerically singular Grams.
    """
    rho = config.rho(config.power_list[0])
    array = config.array
    dims = "square" if array.kind == UPA else "line"
    rows = []
    for ri, r_km in enumerate(config.r_cell_list):

        def worker(i, rng, _r=r_km):
            users = draw_users(config.k_users, _r, config.altitude_km, dims, rng,
                               config.f_c_hz, config.path_loss_exponent,
                               config.unit_gain)
            zf = rate_from_gram(gram(build_channel(users, array)), rho)
            st_ch = build_spacetime_channel(users, array, config.l_snapshots)
            st = rate_from_gram(gram(st_ch), rho, prelog=1.0 / config.l_snapshots)
            return (zf.sum_rate, st.sum_rate, zf.collapsed, st.collapsed)

        results = _run_trials(worker, config.trials, (config.seed, ri), config.threads)
        for t, (zf_rate, st_rate, zf_c, st_c) in enumerate(results):
            rows.append((r_km, t, zf_rate, st_rate, int(zf_c), int(st_c)))
    return ResultTable(
        ["r_km", "trial", "zf_rate", "space_time_rate", "zf_collapsed",
         "space_time_collapsed"],
        rows, _metadata("cdf", config))


def run_bound_chain(config: ExperimentConfig) -> ResultTable:
    """Mean empirical ZF rate vs the dominant-submatrix and equispaced
    surrogate rate bounds, conditioned on maximum load n.

    Columns: n, empirical_rate (mean over conditioned trials),
    dominant_bound (mean of K log2(1 + rho M lambda_1(G_S))),
    surrogate_bound (closed form), equispaced_lower (closed-form lower bound
    mapped through the same rate expression).
    """
    if config.array_kind != ULA:
        raise ConfigError("the bound chain study uses a linear array")
    m = config.array.m
    rho = config.rho(config.power_list[0])
    rows = []
    for ni, n in enumerate(config.n_list):
        try:
            res = bound_chain(n, m, config.k_users, rho, config.trials,
                              (config.seed, ni), n_bins=config.n_bins,
                              threads=config.threads)
        except ConditioningError as exc:
            raise ConfigError(str(exc)) from exc
        rate_lower = config.k_users * math.log2(1.0 + rho * m * cluster_eig_lower(n, m))
        rows.append((n, res.empirical_mean, res.dominant_mean, res.surrogate,
                     rate_lower))
    return ResultTable(
        ["n", "empirical_rate", "dominant_bound", "surrogate_bound",
         "equispaced_lower"],
        rows, _metadata("bound-chain", config))


def run_gain_map(config: ExperimentConfig, p_grid=None, q_grid=None) -> ResultTable:
    """Mean space-time-minus-spatial ZF rate over the (p, q) exponent grid.

    Columns: p, q, k_users, l_snapshots, mean_zf, mean_space_time, mean_gain
    [b/s/Hz], zf_collapse_frac, space_time_collapse_frac.
    """
    if config.array_kind != ULA:
        raise ConfigError("the gain map study uses a linear array")
    p_grid = list(config.p_grid if p_grid is None else p_grid)
    q_grid = list(config.q_grid if q_grid is None else q_grid)
    m = config.array.m
    array = config.array
    rho = config.rho(config.power_list[0])
    r_km = config.altitude_km * m ** (-config.r_exponent)
    rows = []
    for ci, (p, q) in enumerate((p, q) for p in p_grid for q in q_grid):
        k = max(1, int_power(m, p))
        l = max(1, int_power(m, q))

        def worker(i, rng, _k=k, _l=l):
            users = draw_users(_k, r_km, config.altitude_km, "line", rng,
                               config.f_c_hz, config.path_loss_exponent,
                               config.unit_gain)
            zf = rate_from_gram(gram_from_users(users, array, 1), rho)
            if _l == 1:
                st = zf
            else:
                st = rate_from_gram(gram_from_users(users, array, _l), rho,
                                    prelog=1.0 / _l)
            return (zf.sum_rate, st.sum_rate, zf.collapsed, st.collapsed)

        results = _run_trials(worker, config.trials, (config.seed, ci), config.threads)
        zf_rates = np.array([x[0] for x in results])
        st_rates = np.array([x[1] for x in results])
        rows.append((p, q, k, l,
                     float(zf_rates.mean()), float(st_rates.mean()),
                     float((st_rates - zf_rates).mean()),
                     float(np.mean([x[2] for x in results])),
                     float(np.mean([x[3] for x in results]))))
    return ResultTable(
        ["p", "q", "k_users", "l_snapshots", "mean_zf", "mean_space_time",
         "mean_gain", "zf_collapse_frac", "space_time_collapse_frac"],
        rows, _metadata("gain-map", config,
                        r_exponent=config.r_exponent, r_km=r_km))


def _pool_sampler(config: ExperimentConfig, space_time: bool):
    array = config.array
    dims = "square" if array.kind == UPA else "line"
    r_km = config.r_cell_list[0]

    def sample(rng):
        users = draw_users(config.u_candidates, r_km, config.altitude_km, dims,
                           rng, config.f_c_hz, config.path_loss_exponent,
                           config.unit_gain)
        if space_time:
            return build_spacetime_channel(users, array, config.l_snapshots)
        return build_channel(users, array)

    return sample


def tuned_threshold(config: ExperimentConfig) -> float:
    """Grid-search the space-Doppler selection threshold at the median sweep
    power; all schemes share the single threshold."""
    grid = sorted(config.alpha_grid)
    if len(grid) == 1:
        return grid[0]
    powers = config.power_list
    rho_mid = config.rho(sorted(powers)[len(powers) // 2])
    curve = threshold_curve(_pool_sampler(config, True), config.k_users,
                            rho_mid, grid, config.tune_trials,
                            _seed_key(config.seed, "tune-sds"))
    return grid[int(np.argmax(curve))]


def run_power_sweep(config: ExperimentConfig) -> ResultTable:
    """Scheduled sum rates vs transmit power: space-time ZF with space-Doppler
    selection against spatial ZF / MRT (semi-orthogonal selection) and TDMA
    (strongest-norm selection).

    Every scheme serves exactly min(k_users, u_candidates) users so the
    comparison is at equal multiplexing load: selection fills greedily past
    the semi-orthogonality filter once the filtered pool empties. The
    n_semiorthogonal columns record how many picks the filter admitted.

    Columns: power_dbm, trial, space_time_rate, spatial_zf_rate, mrt_rate,
    tdma_rate [b/s/Hz], n_semiorthogonal_sd, n_semiorthogonal_spatial.
    """
    array = config.array
    dims = "square" if array.kind == UPA else "line"
    r_km = config.r_cell_list[0]
    alpha_st = tuned_threshold(config)
    rows = []
    for pi, p_dbm in enumerate(config.power_list):
        rho = config.rho(p_dbm)

        def worker(i, rng, _rho=rho):
            users = draw_users(config.u_candidates, r_km, config.altitude_km,
                               dims, rng, config.f_c_hz,
                               config.path_loss_exponent, config.unit_gain)
            sp = build_channel(users, array)
            st = build_spacetime_channel(users, array, config.l_snapshots)
            sds = space_doppler_select(st, config.k_users, alpha_st,
                                       fill_to_target=True)
            sus = semi_orthogonal_select(sp, config.k_users, alpha_st,
                                         fill_to_target=True)
            sel_top = top_norm_select(sp, config.k_users).selected
            st_rate = rate_from_gram(gram(st.take(sds.selected)), _rho,
                                  prelog=1.0 / config.l_snapshots).sum_rate
            zf = rate_from_gram(gram(sp.take(sus.selected)), _rho).sum_rate
            mrt = mrt_sum_rate(sp.take(sus.selected), _rho).sum_rate
            tdma = tdma_sum_rate(sp.take(sel_top), _rho).sum_rate
            return (st_rate, zf, mrt, tdma, sds.n_semiorthogonal,
                    sus.n_semiorthogonal)

        results = _run_trials(worker, config.trials, (config.seed, pi), config.threads)
        for t, (st_rate, zf, mrt, tdma, n_sd, n_sp) in enumerate(results):
            rows.append((p_dbm, t, st_rate, zf, mrt, tdma, n_sd, n_sp))
    return ResultTable(
        ["power_dbm", "trial", "space_time_rate", "spatial_zf_rate",
         "mrt_rate", "tdma_rate", "n_semiorthogonal_sd",
         "n_semiorthogonal_spatial"],
        rows, _metadata("power-sweep", config, alpha_st=alpha_st))


def summarize_power_sweep(table: ResultTable) -> ResultTable:
    """Per-power mean and 95% confidence half-width for each scheme."""
    schemes = ["space_time_rate", "spatial_zf_rate", "mrt_rate", "tdma_rate"]
    powers = sorted(set(table.column("power_dbm")))
    p_col = table.column("power_dbm")
    rows = []
    for p in powers:
        mask = p_col == p
        row = [p]
        for s in schemes:
            vals = table.column(s)[mask]
            half = 1.96 * vals.std(ddof=1) / math.sqrt(len(vals)) if len(vals) > 1 else 0.0
            row += [float(vals.mean()), float(half)]
        rows.append(tuple(row))
    cols = ["power_dbm"]
    for s in schemes:
        cols += [f"mean_{s}", f"ci_{s}"]
    return ResultTable(cols, rows, dict(table.metadata, summary_of="power-sweep"))


def run_maxload_study(config: ExperimentConfig, m_list=None,
                      point: ScalingPoint = None) -> ResultTable:
    """Empirical maximum bin load vs aperture, with the predicted overlay and
    the fitted log-log slope in the metadata.

    Columns: m, k_users, n_bins, mean_max_load, q10, median, q90,
    pigeonhole_floor (ceil(K/B)), predicted.
    """
    if point is None:
        point = ScalingPoint(config.p, config.q, config.r, config.array_kind)
    m_list = sorted(config.m_list if m_list is None else m_list)
    rows = []
    means = []
    for mi, m in enumerate(m_list):
        k = max(1, int_power(m, point.p))
        width = m ** (-point.r)
        if point.array_kind == ULA:
            axes_bins = [max(1, int_power(m, 1.0 - point.r))]
            supports = [(-width / 2.0, width / 2.0)]
            d_spatial = 1
        else:
            per_axis = max(1, int_power(m, 0.5 - point.r))
            axes_bins = [per_axis, per_axis]
            supports = [(-width / 2.0, width / 2.0)] * 2
            d_spatial = 2
        if point.q > 0.0:
            axes_bins.append(max(1, int_power(m, point.q)))
            supports.append((-0.5, 0.5))

        def worker(i, rng, _k=k, _w=width, _d=d_spatial):
            f = rng.uniform(-_w / 2.0, _w / 2.0, (_k, _d))
            if point.q > 0.0:
                f = np.column_stack([f, rng.uniform(-0.5, 0.5, _k)])
            return max_load(f, tuple(axes_bins), tuple(supports), m=m).max_load

        loads = np.array(_run_trials(worker, config.trials, (config.seed, mi),
                                     config.threads), dtype=float)
        b_total = int(np.prod(axes_bins))
        means.append(loads.mean())
        rows.append((m, k, b_total, float(loads.mean()),
                     float(np.quantile(loads, 0.1)), float(np.quantile(loads, 0.5)),
                     float(np.quantile(loads, 0.9)),
                     int(math.ceil(k / b_total)), predicted_max_load(point, m)))
    slope = float(np.polyfit(np.log(np.array(m_list, dtype=float)),
                             np.log(np.array(means)), 1)[0]) if len(m_list) > 1 else 0.0
    return ResultTable(
        ["m", "k_users", "n_bins", "mean_max_load", "q10", "median", "q90",
         "pigeonhole_floor", "predicted"],
        rows, _metadata("maxload", config, fitted_slope=slope,
                        point={"p": point.p, "q": point.q, "r": point.r,
                               "array_kind": point.array_kind}))


def run_threshold_scan(config: ExperimentConfig) -> ResultTable:
    """Mean scheduled space-time sum rate per threshold value.

    Columns: alpha, mean_rate [b/s/Hz]; the winning alpha lands in the
    metadata as best_alpha.
    """
    grid = sorted(config.alpha_grid)
    rho = config.rho(config.power_list[0])
    curve = threshold_curve(_pool_sampler(config, True), config.k_users, rho,
                            grid, config.trials, _seed_key(config.seed, "tune-alpha"))
    best = grid[int(np.argmax(curve))]
    rows = [(a, float(c)) for a, c in zip(grid, curve)]
    return ResultTable(["alpha", "mean_rate"], rows,
                       _metadata("tune-alpha", config, best_alpha=best))
