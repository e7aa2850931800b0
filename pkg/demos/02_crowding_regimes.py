#!/usr/bin/env python3
"""Balls-and-bins crowding: regimes and maximum-load scaling.

Users land in resolution bins of width 1/M; the maximum bin load drives the
Gram conditioning. This demo classifies a few scaling points, then measures
how the empirical maximum load grows with the aperture in each regime.

Run:  python demos/02_crowding_regimes.py
"""

from leobeam import (ExperimentConfig, ScalingPoint, bin_count,
                     classify_regime, predicted_max_load, run_maxload_study)

print("=== Regime lookup ===")
for p, q, r, kind in [(0.5, 0.0, 0.3, "ula"), (0.9, 0.0, 0.5, "ula"),
                      (0.5, 0.0, 0.5, "ula"), (0.6, 0.3, 0.6, "ula"),
                      (0.6, 0.0, 0.25, "upa"), (0.6, 0.4, 0.25, "upa")]:
    point = ScalingPoint(p, q, r, kind)
    rep = classify_regime(point)
    print(f"  (p={p}, q={q}, r={r}, {kind}): {rep.regime.value:8s} "
          f"rate ~ {rep.rate_scaling:20s} bins(M=256) = {bin_count(point, 256)}")

print("\n=== Maximum load vs aperture ===")
for label, point in [("dense (p=0.9, r=0.5)", ScalingPoint(0.9, 0.0, 0.5, "ula")),
                     ("critical (p=0.5, r=0.5)", ScalingPoint(0.5, 0.0, 0.5, "ula"))]:
    cfg = ExperimentConfig().replace(array_kind="ula", trials=100, seed=1,
                                     m_list=[2 ** 8, 2 ** 10, 2 ** 12, 2 ** 14],
                                     p=point.p, q=point.q, r=point.r)
    tab = run_maxload_study(cfg, point=point)
    print(f"  {label}: fitted log-log slope {tab.metadata['fitted_slope']:+.3f}")
    for row in tab.rows:
        m, k, b, mean = row[0], row[1], row[2], row[3]
        print(f"    M={m:6d}  K={k:5d}  B={b:4d}  mean max load {mean:6.2f}  "
              f"predicted {predicted_max_load(point, m):6.2f}")
print("\nIn the dense regime the load grows like M^(p+r-1) = M^0.4; at the\n"
      "critical point it creeps up like log M / log log M, hence the tiny slope.")
