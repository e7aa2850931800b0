"""Command-line driver front end.

Each subcommand resolves a preset config, applies an optional JSON config
file and flag overrides, runs the matching driver, and writes CSV plus a
sibling metadata JSON into the output directory. Exit codes: 0 success,
2 configuration error, 3 unrecoverable numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .crowding import ScalingPoint, classify_regime
from .experiments import (ConfigError, ExperimentConfig, NumericalError,
                          ResultTable, empirical_cdf, run_bound_chain, run_cdf,
                          run_gain_map, run_maxload_study, run_power_sweep,
                          run_threshold_scan, summarize_power_sweep)

PRESETS = {
    "cdf": dict(array_kind="upa", m_x=16, m_y=16, k_users=16, l_snapshots=3,
                tx_power_dbm=40.0, r_cell_km=[60.0, 90.0, 120.0], trials=1000),
    "bound-chain": dict(array_kind="ula", m_x=256, m_y=1, k_users=16,
                        tx_power_dbm=30.0, trials=500, n_bins=16,
                        n_list=[2, 3, 4, 5, 6]),
    "gain-map": dict(array_kind="ula", m_x=256, m_y=1, tx_power_dbm=40.0,
                     trials=200, r_exponent=0.6),
    "power-sweep": dict(array_kind="upa", m_x=16, m_y=16, k_users=16,
                        l_snapshots=3, u_candidates=256, r_cell_km=60.0,
                        tx_power_dbm=[30.0, 35.0, 40.0, 45.0, 50.0, 55.0, 60.0],
                        trials=500),
    "maxload": dict(array_kind="ula", trials=200, p=0.9, q=0.0, r=0.5,
                    m_list=[256, 1024, 4096, 16384]),
    "classify": dict(array_kind="ula", trials=1),
    "tune-alpha": dict(array_kind="upa", m_x=16, m_y=16, k_users=16,
                       l_snapshots=3, u_candidates=256, r_cell_km=60.0,
                       tx_power_dbm=45.0, trials=100),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="leobeam",
                                     description="LEO downlink MU-MIMO experiment drivers")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("cdf", "per-trial ZF and space-time rate CDFs over cell sizes"),
        ("bound-chain", "crowding rate bound chain vs maximum load"),
        ("gain-map", "space-time minus spatial rate over the (p, q) grid"),
        ("power-sweep", "scheduled sum rates vs transmit power"),
        ("maxload", "maximum bin load scaling study"),
        ("classify", "regime lookup for a (p, q, r) triple"),
        ("tune-alpha", "scan the selection threshold grid"),
    ]:
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", type=Path, help="flat JSON config file")
        cmd.add_argument("--seed", type=int, help="master seed override")
        cmd.add_argument("--trials", type=int, help="trial count override")
        cmd.add_argument("--out", type=Path, default=Path("out"),
                         help="output directory (default ./out)")
        cmd.add_argument("--threads", type=int, default=1,
                         help="worker threads; results do not depend on this")
        cmd.add_argument("--plot", action="store_true",
                         help="also write an SVG figure next to the CSV")
        if name == "classify":
            cmd.add_argument("--p", type=float, required=True)
            cmd.add_argument("--q", type=float, default=0.0)
            cmd.add_argument("--r", type=float, required=True)
            cmd.add_argument("--array-kind", choices=["ula", "upa"], default="ula")
    return parser


def _resolve_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig().replace(**PRESETS[args.command])
    if args.config is not None:
        cfg = ExperimentConfig.from_file(args.config, base=cfg)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.trials is not None:
        overrides["trials"] = args.trials
    overrides["threads"] = args.threads
    return cfg.replace(**overrides)


def _run_classify(args) -> ResultTable:
    point = ScalingPoint(args.p, args.q, args.r, args.array_kind)
    report = classify_regime(point)
    print(f"(p={args.p}, q={args.q}, r={args.r}, {args.array_kind}): "
          f"{report.regime.value} regime, rate scaling {report.rate_scaling}")
    return ResultTable(
        ["p", "q", "r", "regime", "rate_scaling"],
        [(args.p, args.q, args.r, report.regime.value, report.rate_scaling)],
        {"driver": "classify", "array_kind": args.array_kind})


def _plot(table: ResultTable, command: str, path: Path):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(4.2, 3.2))
    if command == "cdf":
        for r in sorted(set(table.column("r_km"))):
            mask = table.column("r_km") == r
            for col, style in [("zf_rate", "--"), ("space_time_rate", "-")]:
                grid, prob = empirical_cdf(table.column(col)[mask])
                ax.plot(grid, prob, style, label=f"{col} R={r:g} km")
        ax.set_xlabel("sum rate [b/s/Hz]"), ax.set_ylabel("CDF")
    elif command == "bound-chain":
        n = table.column("n")
        for col in ("empirical_rate", "dominant_bound", "surrogate_bound",
                    "equispaced_lower"):
            ax.semilogy(n, np.maximum(table.column(col), 1e-12), "o-", label=col)
        ax.set_xlabel("max load n"), ax.set_ylabel("rate [b/s/Hz]")
    elif command == "gain-map":
        p = sorted(set(table.column("p")))
        q = sorted(set(table.column("q")))
        grid = np.full((len(q), len(p)), np.nan)
        for row in table.rows:
            grid[q.index(row[1]), p.index(row[0])] = row[6]
        im = ax.imshow(grid, origin="lower", aspect="auto",
                       extent=(min(p), max(p), min(q), max(q)), cmap="RdBu_r")
        fig.colorbar(im, ax=ax, label="mean gain [b/s/Hz]")
        ax.set_xlabel("p"), ax.set_ylabel("q")
    elif command == "power-sweep":
        summary = summarize_power_sweep(table)
        pw = summary.column("power_dbm")
        for s in ("space_time_rate", "spatial_zf_rate", "mrt_rate", "tdma_rate"):
            ax.errorbar(pw, summary.column(f"mean_{s}"),
                        yerr=summary.column(f"ci_{s}"), label=s, marker="o")
        ax.set_xlabel("transmit power [dBm]"), ax.set_ylabel("mean sum rate")
    elif command == "maxload":
        m = table.column("m")
        ax.loglog(m, table.column("mean_max_load"), "o-", label="empirical mean")
        ax.loglog(m, table.column("predicted"), "s--", label="predicted")
        ax.set_xlabel("M"), ax.set_ylabel("max load")
    elif command == "tune-alpha":
        ax.plot(table.column("alpha"), table.column("mean_rate"), "o-")
        ax.set_xlabel("alpha"), ax.set_ylabel("mean rate")
    else:
        plt.close(fig)
        return
    if ax.get_legend_handles_labels()[0]:
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "classify":
            table = _run_classify(args)
        else:
            config = _resolve_config(args)
            driver = {
                "cdf": run_cdf,
                "bound-chain": run_bound_chain,
                "gain-map": run_gain_map,
                "power-sweep": run_power_sweep,
                "maxload": run_maxload_study,
                "tune-alpha": run_threshold_scan,
            }[args.command]
            table = driver(config)
        name = args.command.replace("-", "_")
        csv_path = table.write(args.out, name)
        if args.command == "power-sweep":
            summarize_power_sweep(table).write(args.out, name + "_summary")
        if args.plot:
            _plot(table, args.command, Path(args.out) / f"{name}.svg")
        print(f"wrote {csv_path}")
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
