#!/usr/bin/env python3
"""Greedy user selection in the joint space-Doppler domain.

With a crowded cell the spatial scheduler runs out of semi-orthogonal users
after a handful of picks; the space-Doppler variant keeps going because
distinct residual Dopplers decorrelate co-located users. This demo compares
both on one candidate pool, scans the selection threshold, and ends with a
small scheduled power sweep.

Run:  python demos/05_user_selection.py   (about a minute)
"""

from leobeam import (ArrayConfig, ExperimentConfig, build_channel,
                     build_spacetime_channel, draw_users, run_power_sweep,
                     run_threshold_scan, semi_orthogonal_select,
                     space_doppler_select, summarize_power_sweep)

ARR = ArrayConfig.upa(16, 16)

print("=== One crowded pool: U=256 candidates in a 60 km cell ===")
users = draw_users(256, 60.0, 600.0, "square", seed=3)
sp = build_channel(users, ARR)
st = build_spacetime_channel(users, ARR, 3)
for alpha in (0.3, 0.5, 0.7):
    sus = semi_orthogonal_select(sp, 16, alpha)
    sds = space_doppler_select(st, 16, alpha)
    print(f"  alpha={alpha}: spatial picks {len(sus):2d} semi-orthogonal users, "
          f"space-Doppler picks {len(sds):2d}")
print("the Doppler axis multiplies the number of separable directions.")

print("\n=== Threshold scan for the space-Doppler scheduler ===")
cfg = ExperimentConfig().replace(array_kind="upa", m_x=16, m_y=16, k_users=16,
                                 l_snapshots=3, u_candidates=256,
                                 r_cell_km=60.0, tx_power_dbm=45.0, trials=30,
                                 seed=4, alpha_grid=[0.3, 0.4, 0.5, 0.6, 0.8, 1.0])
scan = run_threshold_scan(cfg)
for alpha, rate in scan.rows:
    print(f"  alpha={alpha:.2f}: mean scheduled rate {rate:6.2f} b/s/Hz")
print(f"best threshold: {scan.metadata['best_alpha']}")

print("\n=== Scheduled power sweep (equal load: every scheme serves 16) ===")
cfg2 = cfg.replace(tx_power_dbm=[35.0, 45.0, 55.0], trials=100, tune_trials=20)
summary = summarize_power_sweep(run_power_sweep(cfg2))
print(f"{'P [dBm]':>8} {'ST+SDS':>8} {'ZF+SUS':>8} {'MRT':>8} {'TDMA':>8}")
for row in summary.rows:
    print(f"{row[0]:8.0f} {row[1]:8.2f} {row[3]:8.2f} {row[5]:8.2f} {row[7]:8.2f}")
print("forced to the same load, the spatial schemes drown in crowding-induced\n"
      "interference while the space-Doppler scheduler keeps its 16 users apart.")
