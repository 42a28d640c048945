"""Weak-measurement protection pipeline: pre-channel partial-collapse filter,
local noisy channel, post-channel reversal filter, and grid optimization of
the two filter strengths.

Pipeline order is fixed: the weak measurement acts on the initial state before
it enters the channel, the reversal acts on the channel output. The filters
are diagonal non-unitary contractions, so the pipeline output is renormalized
by its trace, which is reported as the success probability of the
post-selected protocol.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import Channel, KrausSet, apply_channel, identity_channel_kraus, kraus_set
from .linalg import as_matrix, tensor
from .measures import concurrence

MIN_SUCCESS = 1e-12
TIE_TOL = 1e-9


@dataclass(frozen=True)
class FilterStrengths:
    """Equal-per-qubit weak-measurement strength p and reversal strength q."""

    p: float
    q: float

    def __post_init__(self):
        if not (0 <= self.p < 1 and 0 <= self.q < 1):
            raise ValueError("filter strengths must lie in [0, 1)")


@dataclass(frozen=True)
class ProtectedOutcome:
    state: np.ndarray
    success_probability: float


def wm_operator(p: float) -> np.ndarray:
    """Two-qubit weak-measurement filter diag(1, sqrt(1-p)) on each qubit."""
    if not 0 <= p < 1:
        raise ValueError("weak-measurement strength must lie in [0, 1)")
    f = np.diag([1.0, np.sqrt(1.0 - p)]).astype(complex)
    return tensor(f, f)


def qmr_operator(q: float) -> np.ndarray:
    """Two-qubit reversal filter diag(sqrt(1-q), 1) on each qubit."""
    if not 0 <= q < 1:
        raise ValueError("reversal strength must lie in [0, 1)")
    f = np.diag([np.sqrt(1.0 - q), 1.0]).astype(complex)
    return tensor(f, f)


def _pipeline(rho0, ks: KrausSet, strengths: FilterStrengths) -> ProtectedOutcome:
    m_wm = wm_operator(strengths.p)
    m_qmr = qmr_operator(strengths.q)
    x = m_wm @ as_matrix(rho0) @ m_wm.conj().T
    x = apply_channel(x, ks, "two_local")
    x = m_qmr @ x @ m_qmr.conj().T
    p_succ = float(np.trace(x).real)
    if p_succ < MIN_SUCCESS:
        raise ValueError(f"pipeline success probability {p_succ} below {MIN_SUCCESS}")
    return ProtectedOutcome(x / p_succ, p_succ)


def protect_evolve(rho0, channel: Channel | None, t: float,
                   strengths: FilterStrengths) -> ProtectedOutcome:
    """Filtered evolution of a two-qubit state through a local channel.

    ``channel=None`` runs the filters around an identity channel (useful at
    t = 0, where every supported channel reduces to the identity anyway).
    """
    ks = identity_channel_kraus(2) if channel is None else kraus_set(channel, 2, t)
    return _pipeline(rho0, ks, strengths)


def optimize_pq(rho0, step: float = 0.01, objective=None, channel: Channel | None = None,
                t: float = 0.0):
    """Grid search over filter strengths p, q in {0, step, ..., 1 - step}.

    ``objective(state) -> float`` is maximized (concurrence by default). Ties
    within 1e-9 of the optimum are broken by larger success probability, then
    smaller p, then smaller q, so flat optima resolve deterministically.
    Returns (FilterStrengths, objective value).
    """
    if not 0 < step <= 0.1:
        raise ValueError("step must lie in (0, 0.1]")
    if objective is None:
        objective = concurrence
    ks = identity_channel_kraus(2) if channel is None else kraus_set(channel, 2, t)
    n = round(1.0 / step)
    values = [k * step for k in range(n)]
    cells = []
    for p in values:
        for q in values:
            out = _pipeline(rho0, ks, FilterStrengths(p, q))
            cells.append((objective(out.state), out.success_probability, p, q))
    best_val = max(c[0] for c in cells)
    candidates = [c for c in cells if c[0] >= best_val - TIE_TOL]
    candidates.sort(key=lambda c: (-c[1], c[2], c[3]))
    val, _, p, q = candidates[0]
    return FilterStrengths(p, q), val


def success_surface(rho0, channel: Channel | None, t: float, step: float):
    """Success probability over the (p, q) grid; returns (p values, q values, grid).

    grid[i, j] is the success probability at (p_i, q_j).
    """
    if not 0 < step <= 0.5:
        raise ValueError("step must lie in (0, 0.5]")
    ks = identity_channel_kraus(2) if channel is None else kraus_set(channel, 2, t)
    n = round(1.0 / step)
    values = np.array([k * step for k in range(n)])
    grid = np.empty((n, n))
    for i, p in enumerate(values):
        for j, q in enumerate(values):
            grid[i, j] = _pipeline(rho0, ks, FilterStrengths(p, q)).success_probability
    return values, values, grid
