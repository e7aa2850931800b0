"""Linear precoding rates: ZF over spatial or space-time channels, the
two-user closed forms, and MRT / TDMA baselines.

ZF uses the common-SINR form rho * m_eff / tr(G^-1) with G the normalized
channel Gram matrix; the trace of the inverse is evaluated from a Hermitian
eigendecomposition rather than an explicit inverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .channel import ArrayConfig, ChannelMatrix, SpaceTimeChannel, _steering_bank

# A Gram matrix whose smallest eigenvalue falls below this times the largest
# is treated as singular; the sum rate collapses to zero instead of amplifying
# eigensolver noise through tr(G^-1).
SINGULAR_RTOL = 1e-14


class SingularGramError(ValueError):
    """Gram matrix is numerically singular; carries the offending eigenvalue."""

    def __init__(self, min_eigenvalue: float):
        super().__init__(f"singular Gram matrix (min eigenvalue {min_eigenvalue:.3e})")
        self.min_eigenvalue = min_eigenvalue


@dataclass(frozen=True)
class GramMatrix:
    """K x K Hermitian Gram of channel columns, with the divisor used."""

    entries: np.ndarray
    normalization: float

    @property
    def k(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class RateReport:
    """Instantaneous rate summary for one channel realization."""

    sum_rate: float
    prelog: float = 1.0
    sinr: Optional[float] = None
    per_user_rates: Optional[np.ndarray] = None
    collapsed: bool = False


def gram(channel) -> GramMatrix:
    """Normalized Gram H^H H / M (spatial) or / (M L) (space-time)."""
    h = channel.entries
    norm = channel.array.m * (channel.l if isinstance(channel, SpaceTimeChannel) else 1)
    g = h.conj().T @ h / norm
    g = (g + g.conj().T) / 2.0  # kill round-off asymmetry
    return GramMatrix(g, float(norm))


def gram_from_users(users, array: ArrayConfig, l: int = 1) -> GramMatrix:
    """Gram computed factor-wise without materializing the stacked channel.

    The entries equal conj(beta_i) beta_j (b_i^H b_j)(a_yi^H a_yj)(a_xi^H a_xj),
    which is the same matrix gram(build_spacetime_channel(...)) yields; tests
    pin the equivalence. Cost is K^2 (M + L) instead of K^2 M L.
    """
    u_x = np.array([u.u_x for u in users])
    u_y = np.array([u.u_y for u in users])
    omega = np.array([u.omega for u in users])
    beta = np.array([u.beta for u in users], dtype=complex)
    g = np.outer(beta.conj(), beta)
    a_x = _steering_bank(u_x, array.m_x)
    g = g * (a_x.conj().T @ a_x)
    if array.m_y > 1:
        a_y = _steering_bank(u_y, array.m_y)
        g = g * (a_y.conj().T @ a_y)
    if l > 1:
        b = _steering_bank(omega, l)
        g = g * (b.conj().T @ b)
    g = (g + g.conj().T) / 2.0
    return GramMatrix(g, float(array.m * l))


def _inverse_trace(g: GramMatrix) -> float:
    """tr(G^-1) via eigvalsh; raises SingularGramError under the collapse policy."""
    lam = np.linalg.eigvalsh(g.entries)
    lam_min, lam_max = lam[0], lam[-1]
    if lam_max <= 0.0 or lam_min <= SINGULAR_RTOL * lam_max:
        raise SingularGramError(float(lam_min))
    return float(np.sum(1.0 / lam))


def zf_sinr(g: GramMatrix, rho: float, m_eff: float) -> float:
    """Common ZF SINR rho * m_eff / tr(G^-1); raises SingularGramError."""
    return rho * m_eff / _inverse_trace(g)


def rate_from_gram(g: GramMatrix, rho: float, prelog: float = 1.0) -> RateReport:
    """ZF rate report from a Gram matrix; singular Grams collapse to rate 0."""
    k = g.k
    try:
        sinr = zf_sinr(g, rho, g.normalization)
    except SingularGramError:
        return RateReport(0.0, prelog=prelog, sinr=0.0,
                          per_user_rates=np.zeros(k), collapsed=True)
    per_user = prelog * np.log2(1.0 + sinr)
    return RateReport(prelog * k * np.log2(1.0 + sinr), prelog=prelog, sinr=sinr,
                      per_user_rates=np.full(k, per_user))


def zf_sum_rate(channel: ChannelMatrix, rho: float) -> RateReport:
    """Instantaneous ZF sum rate K log2(1 + rho M / tr(G^-1))."""
    return rate_from_gram(gram(channel), rho, prelog=1.0)


def space_time_sum_rate(st_channel: SpaceTimeChannel, rho: float) -> RateReport:
    """Space-time ZF sum rate (K/L) log2(1 + rho M L / tr(G^-1)).

    With l = 1 this is bit-compatible with zf_sum_rate on the same users.
    """
    return rate_from_gram(gram(st_channel), rho, prelog=1.0 / st_channel.l)


def _dirichlet_magnitude(delta: float, m: int) -> float:
    d = delta - round(delta)
    if d == 0.0:
        return 1.0
    return abs(np.sin(np.pi * m * d) / (m * np.sin(np.pi * d)))


def two_user_correlation(delta_ux: float, delta_uy: float = 0.0,
                         m_x: int = 1, m_y: int = 1) -> float:
    """|a_1^H a_2| for two planar-array users: product of per-axis Dirichlet
    kernel magnitudes, with the removable singularity at integer offsets -> 1."""
    return _dirichlet_magnitude(delta_ux, m_x) * _dirichlet_magnitude(delta_uy, m_y)


def two_user_rate(g_mag: float, rho: float, m: int) -> float:
    """Two-user ZF closed form 2 log2(1 + rho M (1 - |g|^2) / 2)."""
    if not 0.0 <= g_mag <= 1.0:
        raise ValueError("correlation magnitude must lie in [0, 1]")
    return 2.0 * np.log2(1.0 + 0.5 * rho * m * (1.0 - g_mag ** 2))


def mrt_sum_rate(channel: ChannelMatrix, rho: float) -> RateReport:
    """Matched-filter baseline: F = H / ||H||_F, interference kept in the SINR."""
    h = channel.entries
    k = h.shape[1]
    f = h / np.linalg.norm(h)
    cross = np.abs(h.conj().T @ f) ** 2  # cross[k, i] = |h_k^H f_i|^2
    desired = np.diag(cross)
    interference = cross.sum(axis=1) - desired
    sinr = rho * desired / (1.0 + rho * interference)
    per_user = np.log2(1.0 + sinr)
    return RateReport(float(per_user.sum()), per_user_rates=per_user)


def tdma_sum_rate(channel: ChannelMatrix, rho: float) -> RateReport:
    """Orthogonal-access baseline: each user served alone with full power for
    a 1/K time share."""
    h = channel.entries
    k = h.shape[1]
    norms2 = np.sum(np.abs(h) ** 2, axis=0)
    per_user = np.log2(1.0 + rho * norms2) / k
    return RateReport(float(per_user.sum()), per_user_rates=per_user)
