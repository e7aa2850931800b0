"""LoS downlink channel model: array geometry, steering vectors, user draws,
and the spatial / space-time (Doppler-stacked) channel matrices."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SPEED_OF_LIGHT = 3.0e8
"Propagation speed used in the free-space gain, m/s."

ULA = "ula"
UPA = "upa"


@dataclass(frozen=True)
class ArrayConfig:
    """Antenna panel geometry with implicit half-wavelength spacing.

    Spatial frequencies are dimensionless and aliased on [-1/2, 1/2); the
    panel resolution is 1/m_x (and 1/m_y) in normalized frequency.
    """

    kind: str
    m_x: int
    m_y: int = 1

    def __post_init__(self):
        if self.kind not in (ULA, UPA):
            raise ValueError(f"unknown array kind {self.kind!r}")
        if self.m_x < 1 or self.m_y < 1:
            raise ValueError("element counts must be positive")
        if self.kind == ULA and self.m_y != 1:
            raise ValueError("a linear array has m_y = 1")

    @property
    def m(self) -> int:
        return self.m_x * self.m_y

    @staticmethod
    def ula(m: int) -> "ArrayConfig":
        return ArrayConfig(ULA, m, 1)

    @staticmethod
    def upa(m_x: int, m_y: int) -> "ArrayConfig":
        return ArrayConfig(UPA, m_x, m_y)


@dataclass(frozen=True)
class UserState:
    """One ground user: position, LoS gain, and its normalized signatures.

    The normalized frequencies (u_x, u_y) and the residual Doppler omega are
    the primitives all downstream analysis consumes; positions are kept for
    bookkeeping only. Synthetic users (e.g. cluster constructions) carry
    x_km = y_km = 0 with frequencies set directly.
    """

    u_x: float
    u_y: float
    omega: float
    beta: complex = 1.0 + 0.0j
    x_km: float = 0.0
    y_km: float = 0.0

    def __post_init__(self):
        if not -0.5 <= self.omega < 0.5:
            raise ValueError(f"omega {self.omega} outside [-1/2, 1/2)")
        if abs(self.beta) <= 0.0:
            raise ValueError("LoS gain must be nonzero")


@dataclass(frozen=True)
class ChannelMatrix:
    """M x K spatial channel; column k is sqrt(M) * beta_k * a_k."""

    entries: np.ndarray
    array: ArrayConfig
    users: tuple = field(default=(), repr=False)

    @property
    def k(self) -> int:
        return self.entries.shape[1]

    def take(self, indices) -> "ChannelMatrix":
        idx = list(indices)
        return ChannelMatrix(self.entries[:, idx], self.array,
                             tuple(self.users[i] for i in idx) if self.users else ())


@dataclass(frozen=True)
class SpaceTimeChannel:
    """M*L x K stacked channel; column k is sqrt(ML) * beta_k * (b_k kron a_k).

    Reshaping a column into L blocks of length M gives block ell equal to
    exp(2j*pi*ell*omega_k)/sqrt(L) times the spatial part.
    """

    entries: np.ndarray
    array: ArrayConfig
    l: int
    users: tuple = field(default=(), repr=False)

    @property
    def k(self) -> int:
        return self.entries.shape[1]

    def take(self, indices) -> "SpaceTimeChannel":
        idx = list(indices)
        return SpaceTimeChannel(self.entries[:, idx], self.array, self.l,
                                tuple(self.users[i] for i in idx) if self.users else ())


def steering_vector(x: float, m: int) -> np.ndarray:
    """Unit-norm array response at normalized frequency x for m elements.

    Element i equals exp(2j*pi*i*x)/sqrt(m).
    """
    if m < 1:
        raise ValueError("element count must be >= 1")
    return np.exp(2j * np.pi * x * np.arange(m)) / np.sqrt(m)


def upa_steering(u_x: float, u_y: float, m_x: int, m_y: int) -> np.ndarray:
    """Planar-array response: Kronecker product, y-axis factor on the left."""
    return np.kron(steering_vector(u_y, m_y), steering_vector(u_x, m_x))


def temporal_steering(omega: float, l: int) -> np.ndarray:
    """Unit-norm slow-time phase ramp at normalized Doppler omega, length l."""
    if l < 1:
        raise ValueError("snapshot count must be >= 1")
    return steering_vector(omega, l)


def friis_gain(d_km, f_c_hz: float, alpha: float = 2.0):
    """Free-space amplitude gain (c / (4 pi f d))^(alpha/2), d given in km."""
    d_km = np.asarray(d_km, dtype=float)
    if np.any(d_km <= 0.0):
        raise ValueError("distance must be positive")
    if f_c_hz <= 0.0:
        raise ValueError("carrier frequency must be positive")
    ratio = SPEED_OF_LIGHT / (4.0 * np.pi * f_c_hz * d_km * 1e3)
    out = ratio ** (alpha / 2.0)
    return float(out) if out.ndim == 0 else out


def draw_users(k: int, r_cell_km: float, h_alt_km: float, dims: str = "square",
               seed=None, f_c_hz: float = 1.9925e9, alpha: float = 2.0,
               unit_gain: bool = False) -> list[UserState]:
    """Draw k users i.i.d. uniform over the service area.

    dims "square" places users on [-R, R]^2, "line" on [-R, R] with y = 0.
    Residual Doppler is uniform on the half-open [-1/2, 1/2). Frequencies use
    the small-angle mapping u = coordinate / (2 H); gains follow the
    free-space model at the slant distance unless unit_gain is set.

    Deterministic given seed: draw order is x, then y (square only), then
    omega, each as one vectorized draw of length k.
    """
    if k < 1:
        raise ValueError("need at least one user")
    if r_cell_km <= 0.0 or h_alt_km <= 0.0:
        raise ValueError("cell half-width and altitude must be positive")
    if dims not in ("line", "square"):
        raise ValueError(f"dims must be 'line' or 'square', got {dims!r}")
    rng = np.random.default_rng(seed)
    x = rng.uniform(-r_cell_km, r_cell_km, k)
    y = rng.uniform(-r_cell_km, r_cell_km, k) if dims == "square" else np.zeros(k)
    omega = rng.uniform(-0.5, 0.5, k)
    if unit_gain:
        beta = np.ones(k)
    else:
        slant = np.sqrt(h_alt_km ** 2 + x ** 2 + y ** 2)
        beta = friis_gain(slant, f_c_hz, alpha)
    two_h = 2.0 * h_alt_km
    return [UserState(u_x=x[i] / two_h, u_y=y[i] / two_h, omega=omega[i],
                      beta=complex(beta[i]), x_km=x[i], y_km=y[i])
            for i in range(k)]


def _steering_bank(values: np.ndarray, m: int) -> np.ndarray:
    # (m, K) matrix of unit-norm steering columns
    return np.exp(2j * np.pi * np.outer(np.arange(m), values)) / np.sqrt(m)


def _stacked_entries(users, array: ArrayConfig, l: int) -> np.ndarray:
    u_x = np.array([u.u_x for u in users])
    u_y = np.array([u.u_y for u in users])
    omega = np.array([u.omega for u in users])
    beta = np.array([u.beta for u in users], dtype=complex)
    a_x = _steering_bank(u_x, array.m_x)
    a_y = _steering_bank(u_y, array.m_y)
    b = _steering_bank(omega, l)
    # column k = (b_k kron a_y_k kron a_x_k); index (ell, y, x) -> ell*M + y*m_x + x
    cols = np.einsum("lk,yk,xk->lyxk", b, a_y, a_x).reshape(l * array.m, len(users))
    return (np.sqrt(array.m * l) * beta) * cols


def build_channel(users, array: ArrayConfig) -> ChannelMatrix:
    """Assemble the M x K spatial channel from user states."""
    if len(users) == 0:
        raise ValueError("empty user list")
    return ChannelMatrix(_stacked_entries(users, array, 1), array, tuple(users))


def build_spacetime_channel(users, array: ArrayConfig, l: int) -> SpaceTimeChannel:
    """Assemble the M*L x K Doppler-stacked channel; l = 1 reproduces
    build_channel exactly."""
    if len(users) == 0:
        raise ValueError("empty user list")
    if l < 1:
        raise ValueError("snapshot count must be >= 1")
    return SpaceTimeChannel(_stacked_entries(users, array, l), array, l, tuple(users))
