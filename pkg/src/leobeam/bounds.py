"""Minimum-eigenvalue machinery for crowded Vandermonde Gram matrices.

Covers the constructive side of the analysis: equispaced cluster generators,
closed-form upper bounds on lambda_1 for 1D/2D/3D clusters, the matching
lower bound for the 1D equispaced cluster, the alternating-binomial Rayleigh
test vector, and the Monte Carlo rate bound chain used to validate the
dominant-submatrix argument. All factorial arithmetic runs in the log domain
so the closed forms stay finite up to n around 50.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Optional

import numpy as np
from scipy.special import gammaln

from .channel import UserState
from .precoding import GramMatrix, SINGULAR_RTOL

HERMITIAN_ATOL = 1e-9


@dataclass(frozen=True)
class ClusterSpec:
    """Equispaced cluster of n users packed into a single resolution bin.

    dims = 1 places n points spaced 1/(m (n-1)) along u_x; dims = 2 needs a
    perfect-square n and forms a side x side grid spaced 1/(m_i (side-1)) on
    each axis; dims = 3 needs a perfect cube. axes names which frequency each
    grid axis drives, defaulting to ("u_x",), ("u_x", "omega"),
    ("u_x", "u_y", "omega").
    """

    n: int
    dims: int = 1
    m_per_axis: tuple = (256,)
    base_offset: tuple = ()
    axes: tuple = ()

    def __post_init__(self):
        if self.dims not in (1, 2, 3):
            raise ValueError("dims must be 1, 2 or 3")
        if self.n < 2:
            raise ValueError("a cluster needs n >= 2")
        side = round(self.n ** (1.0 / self.dims))
        if side ** self.dims != self.n:
            raise ValueError(f"n={self.n} is not a perfect power for dims={self.dims}")
        if len(self.m_per_axis) != self.dims:
            raise ValueError("need one resolution per axis")
        default_axes = {1: ("u_x",), 2: ("u_x", "omega"), 3: ("u_x", "u_y", "omega")}
        if not self.axes:
            object.__setattr__(self, "axes", default_axes[self.dims])
        if len(self.axes) != self.dims or len(set(self.axes)) != self.dims:
            raise ValueError("axes must name each grid axis once")
        if not self.base_offset:
            object.__setattr__(self, "base_offset", (0.0,) * self.dims)

    @property
    def side(self) -> int:
        return round(self.n ** (1.0 / self.dims))

    @property
    def spacings(self) -> tuple:
        s = self.side
        return tuple(1.0 / (m * (s - 1)) for m in self.m_per_axis)


def cluster_users(spec: ClusterSpec) -> list[UserState]:
    """Unit-gain users on the equispaced grid of spec.

    Ordering is grid-major over later axes: the first axis (u_x) varies
    fastest, the last (omega for space-Doppler grids) slowest, so the stacked
    channel of a full grid is the Kronecker product of the per-axis banks.
    """
    side = spec.side
    deltas = spec.spacings
    users = []
    for combo in product(range(side), repeat=spec.dims):
        # combo runs last axis slowest after reversal below
        fields = {"u_x": 0.0, "u_y": 0.0, "omega": 0.0}
        for axis_idx, step in enumerate(reversed(combo)):
            name = spec.axes[axis_idx]
            fields[name] = spec.base_offset[axis_idx] + step * deltas[axis_idx]
        users.append(UserState(**fields))
    return users


def min_eigenvalue(g) -> float:
    """Smallest eigenvalue of a Hermitian Gram, clamped at 0 from below when
    within -1e-10 of zero."""
    mat = g.entries if isinstance(g, GramMatrix) else np.asarray(g)
    scale = max(1.0, float(np.max(np.abs(mat))))
    if np.max(np.abs(mat - mat.conj().T)) > HERMITIAN_ATOL * scale:
        raise ValueError("input is not Hermitian within tolerance")
    lam = float(np.linalg.eigvalsh((mat + mat.conj().T) / 2.0)[0])
    if -1e-10 <= lam < 0.0:
        return 0.0
    return lam


def _log_binom(n: int, k: int) -> float:
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def _log_upper_1d(n: int) -> float:
    # log of C(n) (2 pi / (n-1))^(2n-2), C(n) = 1 / ((2n-1) binom(2n-2, n-1))
    return (-math.log(2 * n - 1) - _log_binom(2 * n - 2, n - 1)
            + (2 * n - 2) * math.log(2.0 * math.pi / (n - 1)))


def cluster_eig_upper(n: int, dims: int = 1) -> float:
    """Closed-form upper bound on lambda_1 of the equispaced cluster Gram.

    dims = 1 evaluates C(n) (2 pi/(n-1))^(2n-2); dims = 2 and 3 are the
    square and cube of the per-axis bound at side n^(1/dims), matching the
    Kronecker factorization of grid clusters.
    """
    if dims not in (1, 2, 3):
        raise ValueError("dims must be 1, 2 or 3")
    side = round(n ** (1.0 / dims))
    if side ** dims != n:
        raise ValueError(f"n={n} is not a perfect power for dims={dims}")
    if side < 2:
        raise ValueError("cluster side must be >= 2")
    return math.exp(dims * _log_upper_1d(side))


def cluster_eig_lower(n: int, m: int) -> float:
    """Matching lower bound on lambda_1 for the 1D equispaced n-cluster at
    resolution m; requires m >= n."""
    if n < 2:
        raise ValueError("need n >= 2")
    if m < n:
        raise ValueError("need m >= n")
    log_b = (math.log(20.0 * math.sqrt(2.0) / 19.0)
             - 0.5 * (n - 1) * math.log(1.0 - math.pi ** 2 / (3.0 * n ** 2))
             + (n - 1) * (math.log(m / n) - math.log(math.floor(m / n))))
    log_c = (math.log(m / (m + 1.0)) + 4.0 * gammaln(n)
             - 2.0 * log_b - (2 * n - 2) * math.log(n / math.pi) - gammaln(2 * n - 1))
    return math.exp(log_c - 2.0 * (n - 1) * math.log(n - 1.0))


def equispaced_rate_factor(n: int) -> float:
    """((n-1)/pi)^(-2(n-1)): the relaxed closed-form eigenvalue surrogate."""
    if n < 2:
        raise ValueError("need n >= 2")
    return math.exp(-2.0 * (n - 1) * math.log((n - 1) / math.pi))


def binomial_test_vector(n: int) -> np.ndarray:
    """Alternating binomial coefficients c_i = (-1)^i binom(n-1, i).

    The squared norm is binom(2n-2, n-1) exactly; applied to an equispaced
    cluster channel the product telescopes to (1 - e^(2j pi k delta))^(n-1)
    per antenna element.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    coeffs = [(-1) ** i * math.comb(n - 1, i) for i in range(n)]
    dtype = np.int64 if n <= 33 else np.float64
    return np.array(coeffs, dtype=dtype)


def rayleigh_quotient(g, c: np.ndarray) -> float:
    """Real Rayleigh quotient c^H G c / ||c||^2; upper-bounds lambda_1."""
    mat = g.entries if isinstance(g, GramMatrix) else np.asarray(g)
    c = np.asarray(c, dtype=complex)
    return float(np.real(c.conj() @ mat @ c) / np.real(c.conj() @ c))


@dataclass(frozen=True)
class BoundReport:
    """Bound sandwich for one cluster: lower <= numeric <= rayleigh <= upper."""

    n: int
    lambda_min_numeric: float
    upper_bound: float
    lower_bound: Optional[float] = None
    rayleigh_value: Optional[float] = None


def cluster_bound_report(n: int, m: int, base_offset: float = 0.0) -> BoundReport:
    """Assemble the full sandwich for a 1D equispaced cluster."""
    from .channel import ArrayConfig, build_channel
    from .precoding import gram

    spec = ClusterSpec(n=n, dims=1, m_per_axis=(m,), base_offset=(base_offset,))
    g = gram(build_channel(cluster_users(spec), ArrayConfig.ula(m)))
    return BoundReport(
        n=n,
        lambda_min_numeric=min_eigenvalue(g),
        upper_bound=cluster_eig_upper(n, dims=1),
        lower_bound=cluster_eig_lower(n, m),
        rayleigh_value=rayleigh_quotient(g, binomial_test_vector(n)),
    )


# ---------------------------------------------------------------------------
#  Rate bound chain: empirical ZF rate vs dominant-submatrix and equispaced
#  surrogate bounds, conditioned on the maximum bin load
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundChainResult:
    n: int
    empirical: np.ndarray  # per-trial ZF sum rate
    dominant: np.ndarray   # per-trial K log2(1 + rho M lambda_1(G_S))
    surrogate: float       # K log2(1 + rho M ((n-1)/pi)^(-2(n-1)))

    @property
    def empirical_mean(self) -> float:
        return float(self.empirical.mean())

    @property
    def dominant_mean(self) -> float:
        return float(self.dominant.mean())


class ConditioningError(RuntimeError):
    """Rejection sampling failed to hit the requested maximum load."""


def _conditioned_frequencies(rng, k: int, m: int, n: int, n_bins: int,
                             max_attempts: int) -> tuple:
    """One draw of k uniform frequencies over n_bins bins of width 1/m,
    conditioned on the maximum bin load being exactly n."""
    width = n_bins / m
    for _ in range(max_attempts):
        u = rng.uniform(-width / 2.0, width / 2.0, k)
        idx = np.floor((u + width / 2.0) * m).astype(int)
        np.clip(idx, 0, n_bins - 1, out=idx)
        counts = np.bincount(idx, minlength=n_bins)
        if counts.max() == n:
            return u, idx, counts
    raise ConditioningError(
        f"no draw with max load {n} in {max_attempts} attempts; "
        f"try a different n for K={k}, B={n_bins}")


def bound_chain(n: int, m: int, k: int, rho: float, trials: int, seed,
                n_bins: int = 16, max_attempts: int = 10 ** 6,
                threads: int = 1) -> BoundChainResult:
    """Monte Carlo validation of the crowding rate bound chain.

    Each trial draws K unit-gain users uniformly over an n_bins-bin support
    (bins of width 1/m), rejection-sampled until the maximum load is exactly
    n, then records the empirical ZF sum rate and the dominant-submatrix
    bound from lambda_1 of the most-crowded bin's principal Gram submatrix.
    Trials use independently derived seeds, so the result does not depend on
    the thread count.
    """
    if not 2 <= n <= k:
        raise ValueError("need 2 <= n <= k")
    if k > m:
        raise ValueError("need k <= m")
    seeds = np.random.SeedSequence(seed).spawn(trials)
    per_trial_cap = max(1, max_attempts // trials)

    def one_trial(i: int) -> tuple:
        rng = np.random.default_rng(seeds[i])
        u, idx, counts = _conditioned_frequencies(rng, k, m, n, n_bins, per_trial_cap)
        bank = np.exp(2j * np.pi * np.outer(np.arange(m), u)) / np.sqrt(m)
        g = bank.conj().T @ bank
        g = (g + g.conj().T) / 2.0
        lam = np.linalg.eigvalsh(g)
        if lam[0] <= SINGULAR_RTOL * lam[-1]:
            empirical = 0.0
        else:
            empirical = k * np.log2(1.0 + rho * m / np.sum(1.0 / lam))
        crowded_bin = int(np.argmax(counts))  # ties resolve to the lowest bin
        members = np.flatnonzero(idx == crowded_bin)
        sub = g[np.ix_(members, members)]
        lam_sub = max(float(np.linalg.eigvalsh(sub)[0]), 0.0)
        dominant = k * np.log2(1.0 + rho * m * lam_sub)
        return empirical, dominant

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one_trial, range(trials)))
    else:
        results = [one_trial(i) for i in range(trials)]

    empirical = np.array([r[0] for r in results])
    dominant = np.array([r[1] for r in results])
    surrogate = k * np.log2(1.0 + rho * m * equispaced_rate_factor(n))
    return BoundChainResult(n=n, empirical=empirical, dominant=dominant,
                            surrogate=float(surrogate))
