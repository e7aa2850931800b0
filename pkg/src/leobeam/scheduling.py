"""Greedy semi-orthogonal user selection, spatial and space-Doppler variants.

The selection loop picks the candidate with the largest residual energy after
projecting out previously selected directions, then filters survivors whose
normalized correlation with the newest pick reaches the threshold. Ties break
to the lowest candidate index, so selection is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import SpaceTimeChannel
from .precoding import rate_from_gram, gram

# Candidates whose residual energy falls below this times the strongest
# original column are considered linearly dependent and selection stops.
RESIDUAL_FLOOR = 1e-12


@dataclass(frozen=True)
class SelectionResult:
    selected: tuple          # user indices in pick order
    basis: np.ndarray        # orthonormal columns spanning the picks
    threshold: float
    n_semiorthogonal: int = 0  # picks made before any fill phase

    def __len__(self) -> int:
        return len(self.selected)


def _columns(channels) -> np.ndarray:
    return channels.entries if hasattr(channels, "entries") else np.asarray(channels)


def _greedy_semiorthogonal(h: np.ndarray, k_target: int, alpha: float,
                           fill: bool = False) -> SelectionResult:
    if not 0.0 < alpha <= 1.0:
        raise ValueError("threshold must lie in (0, 1]")
    if k_target < 1:
        raise ValueError("need k_target >= 1")
    dim, u = h.shape
    norms = np.linalg.norm(h, axis=0)
    candidates = np.flatnonzero(norms > 0.0)
    floor = RESIDUAL_FLOOR * float(norms.max() ** 2) if candidates.size else 0.0

    residual = h[:, candidates].astype(complex, copy=True)
    selected = []
    q_cols = []
    filtering = True
    n_semiorthogonal = None
    i = 0
    while i < k_target:
        if candidates.size == 0:
            if not fill or len(selected) == u:
                break
            # equal-load fill phase: re-admit the leftover users unfiltered
            if n_semiorthogonal is None:
                n_semiorthogonal = len(selected)
            filtering = False
            candidates = np.setdiff1d(np.flatnonzero(norms > 0.0),
                                      np.array(selected, dtype=int))
            residual = h[:, candidates].astype(complex, copy=True)
            for q in q_cols:
                residual -= np.outer(q, q.conj() @ residual)
            if candidates.size == 0:
                break
        gains = np.sum(np.abs(residual) ** 2, axis=0)
        best = int(np.argmax(gains))  # first max -> lowest surviving index
        if gains[best] <= (0.0 if not filtering else floor):
            break
        pick = int(candidates[best])
        q = residual[:, best] / np.sqrt(gains[best])
        selected.append(pick)
        q_cols.append(q)
        i += 1
        if i < k_target:
            if filtering:
                corr = np.abs(h[:, candidates].conj().T @ h[:, pick])
                corr /= norms[candidates] * norms[pick]
                keep = (corr < alpha) & (candidates != pick)
            else:
                keep = candidates != pick
            candidates = candidates[keep]
            residual = residual[:, keep]
            residual -= np.outer(q, q.conj() @ residual)
        else:
            candidates = candidates[:0]
    basis = np.column_stack(q_cols) if q_cols else np.zeros((dim, 0), dtype=complex)
    if n_semiorthogonal is None:
        n_semiorthogonal = len(selected)
    return SelectionResult(tuple(selected), basis, alpha, n_semiorthogonal)


def space_doppler_select(channels, k_target: int, alpha_st: float,
                         fill_to_target: bool = False) -> SelectionResult:
    """Greedy selection on stacked space-time channel vectors.

    The semi-orthogonality filter compares each surviving candidate against
    the most recent pick using the original (unprojected) channels. With
    fill_to_target, selection keeps going unfiltered once the filtered pool
    empties, so exactly min(k_target, U) users are served (equal-load
    comparisons across schemes).
    """
    return _greedy_semiorthogonal(_columns(channels), k_target, alpha_st,
                                  fill=fill_to_target)


def semi_orthogonal_select(channels, k_target: int, alpha: float,
                           fill_to_target: bool = False) -> SelectionResult:
    """Spatial-only greedy selection; the same procedure applied to the
    M x U channel instead of its space-time extension."""
    return _greedy_semiorthogonal(_columns(channels), k_target, alpha,
                                  fill=fill_to_target)


def top_norm_select(channels, k_target: int) -> SelectionResult:
    """Pick the k_target strongest columns by norm (orthogonal-access baseline)."""
    h = _columns(channels)
    norms = np.linalg.norm(h, axis=0)
    order = np.argsort(-norms, kind="stable")[:k_target]
    selected = tuple(int(i) for i in order)
    q, _ = np.linalg.qr(h[:, list(selected)]) if selected else (np.zeros((h.shape[0], 0)), None)
    return SelectionResult(selected, q, 1.0)


def random_select(u: int, k_target: int, rng) -> tuple:
    """Uniform random subset baseline."""
    rng = np.random.default_rng(rng)
    return tuple(int(i) for i in rng.choice(u, size=min(k_target, u), replace=False))


def _selected_rate(channels, selected, rho: float) -> float:
    if not selected:
        return 0.0
    sub = channels.take(selected)
    if isinstance(sub, SpaceTimeChannel):
        return rate_from_gram(gram(sub), rho, prelog=1.0 / sub.l).sum_rate
    return rate_from_gram(gram(sub), rho).sum_rate


def threshold_curve(channel_sampler, k_target: int, rho: float, alpha_grid,
                    trials: int, seed) -> np.ndarray:
    """Mean downstream sum rate of the selected set per threshold value.

    channel_sampler(rng) must return a ChannelMatrix or SpaceTimeChannel of
    candidates; each trial's channel is reused across the whole grid (common
    random numbers). The grid is evaluated in ascending order.
    """
    grid = sorted(float(a) for a in alpha_grid)
    if not grid:
        raise ValueError("alpha grid must be nonempty")
    if any(not 0.0 < a <= 1.0 for a in grid):
        raise ValueError("alpha values must lie in (0, 1]")
    seeds = np.random.SeedSequence(seed).spawn(trials)
    totals = np.zeros(len(grid))
    for t in range(trials):
        channels = channel_sampler(np.random.default_rng(seeds[t]))
        for j, alpha in enumerate(grid):
            sel = _greedy_semiorthogonal(_columns(channels), k_target, alpha)
            totals[j] += _selected_rate(channels, list(sel.selected), rho)
    return totals / trials


def tune_threshold(channel_sampler, k_target: int, rho: float, alpha_grid,
                   trials: int, seed) -> float:
    """Grid-search the semi-orthogonality threshold; returns the alpha
    maximizing the mean selected-set sum rate, ties going to the smaller one."""
    grid = sorted(float(a) for a in alpha_grid)
    curve = threshold_curve(channel_sampler, k_target, rho, grid, trials, seed)
    return grid[int(np.argmax(curve))]  # first max -> smallest alpha
