#!/usr/bin/env python3
"""Minimum-eigenvalue bounds for crowded clusters.

Packs n users into a single resolution bin (equispaced), then shows the full
sandwich: closed-form lower bound <= numeric lambda_1 <= alternating-binomial
Rayleigh quotient <= closed-form upper bound. Ends with the Monte Carlo rate
bound chain conditioned on the maximum load.

Run:  python demos/03_eigenvalue_bounds.py
"""

from leobeam import (bound_chain, cluster_bound_report, cluster_eig_upper,
                     ExperimentConfig)

M = 256
print(f"=== Bound sandwich for equispaced clusters, M = {M} ===")
print(f"{'n':>2} {'lower':>12} {'lambda_1':>12} {'rayleigh':>12} {'upper':>12}")
for n in range(2, 9):
    rep = cluster_bound_report(n, M)
    print(f"{n:2d} {rep.lower_bound:12.3e} {rep.lambda_min_numeric:12.3e} "
          f"{rep.rayleigh_value:12.3e} {rep.upper_bound:12.3e}")
print("lambda_1 decays super-exponentially in the cluster size; the bounds\n"
      "track the decay on both sides.")

print("\n=== 2D grid clusters (space-Doppler) soften the decay ===")
for n in (4, 9, 16):
    print(f"  n={n:2d}: 1D upper bound {cluster_eig_upper(n):.3e}   "
          f"2D grid upper bound {cluster_eig_upper(n, dims=2):.3e}")

print("\n=== Rate bound chain conditioned on max load (K=16, 16 bins) ===")
rho = ExperimentConfig().rho(30.0)
print(f"{'n':>2} {'empirical':>12} {'dominant':>12} {'surrogate':>12}")
for n in (2, 3, 4, 5):
    res = bound_chain(n, M, 16, rho, trials=100, seed=0, n_bins=16)
    print(f"{n:2d} {res.empirical_mean:12.4g} {res.dominant_mean:12.4g} "
          f"{res.surrogate:12.4g}")
print("the empirical ZF rate sits below the dominant-submatrix bound, which\n"
      "sits below the equispaced closed-form surrogate, at every load.")
