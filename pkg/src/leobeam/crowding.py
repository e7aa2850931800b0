"""Balls-and-bins view of user crowding: resolution-bin counts, empirical
maximum load, and the sparse/critical/dense regime classification driving
the rate scaling predictions."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .channel import ULA, UPA


class Regime(str, enum.Enum):
    SPARSE = "sparse"
    CRITICAL = "critical"
    DENSE = "dense"


@dataclass(frozen=True)
class ScalingPoint:
    """Exponent triple of the power-law scaling regime.

    K = M^p users, L = M^q snapshots, support width R/H = M^(-r). Planar
    arrays split the aperture as M_x = M_y = sqrt(M) and need r < 1/2 so the
    bin count grows on both axes.
    """

    p: float
    q: float = 0.0
    r: float = 0.5
    array_kind: str = ULA

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if self.q < 0.0:
            raise ValueError("q must be nonnegative")
        if not 0.0 <= self.r < 1.0:
            raise ValueError("r must lie in [0, 1)")
        if self.array_kind not in (ULA, UPA):
            raise ValueError(f"unknown array kind {self.array_kind!r}")
        if self.array_kind == UPA and self.r >= 0.5:
            raise ValueError("planar scaling needs r < 1/2")

    @property
    def bin_exponent(self) -> float:
        """Exponent of the joint bin count: 1-r (+q) linear, 1-2r (+q) planar."""
        spatial = 1.0 - self.r if self.array_kind == ULA else 1.0 - 2.0 * self.r
        return spatial + self.q


@dataclass(frozen=True)
class LoadSample:
    """Empirical bin-load summary for one user draw."""

    k_users: int
    n_bins: int
    max_load: int
    lambda_m: float  # mean load K / B
    m: Optional[int] = None
    clamped: bool = False  # some frequency fell outside the declared support


def int_power(m: float, exponent: float) -> int:
    """floor(m^exponent) with a tiny nudge so exactly representable powers
    (e.g. 1024^0.9 = 512) do not floor down through float error."""
    return int(math.floor(m ** exponent + 1e-9))


def bin_count(point: ScalingPoint, m: int) -> int:
    """Number of resolution bins at aperture m: floor(M^(1-r)) for a linear
    array, floor(M^(1-2r)) planar, times floor(M^q) when snapshots stack."""
    if point.array_kind == ULA:
        spatial = int_power(m, 1.0 - point.r)
    else:
        spatial = int_power(m, 1.0 - 2.0 * point.r)
    spatial = max(1, spatial)
    if point.q > 0.0:
        spatial *= max(1, int_power(m, point.q))
    return spatial


def max_load(users_or_freqs, bins_per_axis, support=None,
             m: Optional[int] = None) -> LoadSample:
    """Histogram frequencies into equal-width bins and report the maximum load.

    Accepts a (K,) or (K, D) frequency array, or a list of user states whose
    axes are picked by dimension: u_x; (u_x, u_y); (u_x, u_y, omega).
    bins_per_axis is an int or length-D tuple; support a (lo, hi) pair per
    axis, defaulting to (-1/2, 1/2). Bins are half-open and tile each support
    left to right; values at or beyond an edge are counted in the clamped
    edge bin and flagged.
    """
    if (isinstance(users_or_freqs, (list, tuple)) and users_or_freqs
            and hasattr(users_or_freqs[0], "u_x")):
        d = len(bins_per_axis) if not np.isscalar(bins_per_axis) else 1
        axes = ("u_x", "u_y", "omega")[:d]
        f = np.array([[getattr(u, a) for a in axes] for u in users_or_freqs])
    else:
        f = np.asarray(users_or_freqs, dtype=float)
    if f.ndim == 1:
        f = f[:, None]
    k, d = f.shape
    if np.isscalar(bins_per_axis):
        bins_per_axis = (int(bins_per_axis),) * d
    if len(bins_per_axis) != d:
        raise ValueError("need one bin count per axis")
    if support is None:
        support = ((-0.5, 0.5),) * d
    elif np.isscalar(support[0]):
        support = (tuple(support),) * d
    clamped = False
    flat = np.zeros(k, dtype=np.int64)
    total = 1
    for axis in range(d):
        lo, hi = support[axis]
        nb = bins_per_axis[axis]
        idx = np.floor((f[:, axis] - lo) / (hi - lo) * nb).astype(np.int64)
        if np.any((idx < 0) | (idx >= nb)):
            clamped = True
            np.clip(idx, 0, nb - 1, out=idx)
        flat = flat * nb + idx
        total *= nb
    counts = np.bincount(flat, minlength=total)
    return LoadSample(k_users=k, n_bins=total, max_load=int(counts.max()),
                      lambda_m=k / total, m=m, clamped=clamped)


@dataclass(frozen=True)
class RegimeReport:
    regime: Regime
    rate_scaling: str


def classify_regime(point: ScalingPoint) -> RegimeReport:
    """Map a scaling point to its crowding regime and the matching upper
    rate-scaling descriptor.

    The comparison is p against the joint bin exponent (spatial plus q), which
    reproduces the recovery threshold q >= p + r - 1 (linear) and
    q >= p + 2r - 1 (planar) when snapshots stack.
    """
    e_bins = point.bin_exponent
    if abs(point.p - e_bins) <= 1e-12:  # boundary despite float round-off
        regime = Regime.CRITICAL
    elif point.p < e_bins:
        regime = Regime.SPARSE
    else:
        regime = Regime.DENSE

    stacked = point.q > 0.0
    if regime is Regime.DENSE:
        scaling = "-> 0"
    elif stacked:
        scaling = "M^{p-q} log M"
    elif point.array_kind == UPA or regime is Regime.SPARSE:
        scaling = "M^p log M"
    else:  # linear array at the critical point: r-dependent subcases
        if point.r < 0.5:
            scaling = "M^{r+o(1)}"
        elif point.r == 0.5:
            scaling = "M^{1/2+o(1)}"
        else:
            scaling = "M^{1-r+o(1)} log M"
    return RegimeReport(regime, scaling)


def predicted_max_load(point: ScalingPoint, m: int) -> float:
    """Predicted maximum bin load: a constant proxy of 1 in the sparse regime
    (no constant is available), log M / log log M at the critical point, and
    M^(p - bin exponent) when dense."""
    report = classify_regime(point)
    if report.regime is Regime.SPARSE:
        return 1.0
    if report.regime is Regime.CRITICAL:
        return math.log(m) / math.log(math.log(m))
    return float(m ** (point.p - point.bin_exponent))
