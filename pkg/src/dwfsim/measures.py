"""Correlation and teleportation-quality functionals for two-qubit states:
concurrence, l1 coherence, quantum discord, steering, maximal fidelity,
fidelity deviation, teleportation fidelity, CHSH violation, and the
universal-teleportation check.

Entropies use the natural logarithm throughout, so discord is reported in
nats. The maximal-fidelity and fidelity-deviation formulas hold only for
states whose correlation matrix has negative determinant; outside that domain
they raise OutOfDomainError and aggregate reports record the fields as absent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .linalg import as_matrix, herm_eigen, matrix_sqrt_psd, partial_trace, tensor
from .phasespace import DwfGrid, QuantumNet, _operator_grid, canonical_net, ns1_net
from .states import I2, PAULIS, SIGMA_Y, decompose_two_qubit


class OutOfDomainError(ValueError):
    """Raised when a formula's validity condition det(T) < 0 fails."""

    def __init__(self, det_t: float):
        super().__init__(f"correlation matrix determinant {det_t} is not negative")
        self.det_t = det_t


def _require_two_qubit(rho) -> np.ndarray:
    rho = as_matrix(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 state, got {rho.shape}")
    return rho


def concurrence(rho) -> float:
    """Wootters concurrence max(0, l1 - l2 - l3 - l4) of a two-qubit state.

    The l_i are the descending eigenvalues of sqrt(sqrt(rho) rho~ sqrt(rho))
    with rho~ = (sy x sy) conj(rho) (sy x sy).
    """
    rho = _require_two_qubit(rho)
    syy = tensor(SIGMA_Y, SIGMA_Y)
    rho_t = syy @ rho.conj() @ syy
    s = matrix_sqrt_psd(rho)
    m = s @ rho_t @ s
    vals, _ = herm_eigen(m)
    vals = np.clip(vals, 0.0, None)
    # eigenvalues below the solver's relative resolution are exact zeros;
    # without the floor their square roots inject ~1e-8 of dust
    vals[vals < 1e-13 * vals[0]] = 0.0
    lam = np.sqrt(vals)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def coherence_l1(rho) -> float:
    """Sum of the moduli of all off-diagonal entries."""
    rho = as_matrix(rho)
    off = rho - np.diag(np.diag(rho))
    return float(np.abs(off).sum())


def von_neumann_entropy(rho) -> float:
    vals = np.linalg.eigvalsh(as_matrix(rho))
    vals = vals[vals > 1e-15]
    return float(-(vals * np.log(vals)).sum())


def _measurement_pair(theta: float, phi: float):
    """Orthonormal projective pair on a qubit: |l> = cos(t/2)|0> + e^(i phi) sin(t/2)|1>
    and its orthogonal complement |m> = sin(t/2)|0> - e^(i phi) cos(t/2)|1>."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    e = np.exp(1j * phi)
    return (np.array([c, e * s], dtype=complex),
            np.array([s, -e * c], dtype=complex))


def _conditional_entropy(rho, theta: float, phi: float) -> float:
    """Average entropy of qubit A after the projective measurement (theta, phi) on B."""
    total = 0.0
    for vec in _measurement_pair(theta, phi):
        m = tensor(I2, np.outer(vec, vec.conj()))
        sub = m @ rho @ m
        p = float(np.trace(sub).real)
        if p > 1e-12:
            rho_a = partial_trace(sub / p, [2, 2], keep=[0])
            total += p * von_neumann_entropy(rho_a)
    return total


def discord(rho, grid_n: int = 64, refine_tol: float = 1e-8) -> float:
    """Quantum discord d(A:B) = s(B) - s(A,B) + min s(A|B), measuring qubit B.

    The conditional-entropy minimum over the measurement angles is located on
    a grid_n x grid_n grid and then polished by Nelder-Mead simplex descent to
    within refine_tol; the polished value never exceeds the grid value.
    """
    rho = _require_two_qubit(rho)
    s_ab = von_neumann_entropy(rho)
    s_b = von_neumann_entropy(partial_trace(rho, [2, 2], keep=[1]))

    thetas = np.linspace(0.0, np.pi, grid_n)
    phis = np.linspace(0.0, 2 * np.pi, grid_n)
    best = np.inf
    best_angles = (0.0, 0.0)
    for th in thetas:
        for ph in phis:
            val = _conditional_entropy(rho, th, ph)
            if val < best:
                best = val
                best_angles = (th, ph)

    res = minimize(lambda x: _conditional_entropy(rho, x[0], x[1]),
                   x0=np.array(best_angles), method="Nelder-Mead",
                   options={"xatol": 1e-6, "fatol": refine_tol, "maxiter": 400})
    refined = min(best, float(res.fun))
    return max(0.0, s_b - s_ab + refined)


def correlation_matrix(rho) -> np.ndarray:
    """T with t_ij = Tr[rho (sigma_i x sigma_j)]."""
    return decompose_two_qubit(rho).t


def _t_eigen_abs(rho) -> np.ndarray:
    """Moduli of the correlation-matrix eigenvalues, descending."""
    e = np.linalg.eigvals(correlation_matrix(rho))
    return np.sort(np.abs(e))[::-1]


def steering(rho, n: int) -> float:
    """Steering S_n = max(0, (Omega_n - 1)/(sqrt(n) - 1)) for n = 2 or 3
    per-party measurements, from the correlation-matrix eigenvalues."""
    if n not in (2, 3):
        raise ValueError("steering is defined for n in {2, 3}")
    cs = np.abs(np.linalg.eigvals(correlation_matrix(_require_two_qubit(rho))))
    c = float(np.sqrt((cs**2).sum()))
    if n == 3:
        omega = c
    else:
        omega = float(np.sqrt(max(0.0, c**2 - cs.min()**2)))
    return max(0.0, (omega - 1.0) / (np.sqrt(n) - 1.0))


def maximal_fidelity(rho) -> float:
    """Best average teleportation fidelity (1 + sum|e_i|/3)/2 over local-unitary
    strategies; defined for det(T) < 0."""
    rho = _require_two_qubit(rho)
    det_t = float(np.linalg.det(correlation_matrix(rho)))
    if det_t >= 0:
        raise OutOfDomainError(det_t)
    return float(0.5 * (1.0 + _t_eigen_abs(rho).sum() / 3.0))


def fidelity_deviation(rho) -> float:
    """Standard deviation of teleportation fidelity over input states under the
    optimal protocol; zero iff the |e_i| coincide. Defined for det(T) < 0."""
    rho = _require_two_qubit(rho)
    det_t = float(np.linalg.det(correlation_matrix(rho)))
    if det_t >= 0:
        raise OutOfDomainError(det_t)
    e = _t_eigen_abs(rho)
    gaps = (e[0] - e[1])**2 + (e[0] - e[2])**2 + (e[1] - e[2])**2
    return float(np.sqrt(gaps) / (3.0 * np.sqrt(10.0)))


def teleportation_fidelity(rho) -> float:
    """F = (1 + N_F/3)/2 with N_F = Tr sqrt(T^T T); useful above 2/3."""
    rho = _require_two_qubit(rho)
    t = correlation_matrix(rho)
    n_f = float(np.linalg.svd(t, compute_uv=False).sum())
    return 0.5 * (1.0 + n_f / 3.0)


def chsh_smax(rho) -> float:
    """Largest CHSH value 2 sqrt(u1 + u2), u_i the top eigenvalues of T^T T;
    the inequality is violated above 2."""
    rho = _require_two_qubit(rho)
    t = correlation_matrix(rho)
    u = np.sort(np.linalg.eigvalsh(t.T @ t))
    return float(2.0 * np.sqrt(max(0.0, u[-1] + u[-2])))


_T_SIGN_CACHE: dict = {}


def _t_sign_groups(net: QuantumNet):
    """Grid points whose point operator carries a negative sigma_i x sigma_j
    coefficient, for each (i, j); these index the DWF sums in the T formulas."""
    groups = _T_SIGN_CACHE.get(net.name)
    if groups is None:
        if net.dim != 4:
            raise ValueError("DWF correlation matrix requires a two-qubit net")
        ops = _operator_grid(net)
        groups = {}
        for i, si in enumerate(PAULIS):
            for j, sj in enumerate(PAULIS):
                pauli = tensor(si, sj)
                neg = []
                for (q, p), a in sorted(ops.items()):
                    coeff = np.trace(a @ pauli).real / 4.0
                    if coeff < 0:
                        neg.append((q, p))
                if len(neg) != 8:
                    raise AssertionError("point-operator sign pattern is unbalanced")
                groups[(i, j)] = tuple(neg)
        _T_SIGN_CACHE[net.name] = groups
    return groups


def correlation_matrix_from_dwf(grid: DwfGrid, net: QuantumNet | None = None) -> np.ndarray:
    """Correlation matrix from DWF values alone: t_ij = 1 - 2 sum of the eight
    W values at the points whose operator has a negative sigma_i x sigma_j
    component. Agrees with the direct-trace path exactly for grids of the
    shipped two-qubit nets."""
    if net is None:
        net = canonical_net(4) if grid.net == "canonical-4" else ns1_net()
    if grid.net != net.name:
        raise ValueError(f"grid from net {grid.net!r}, expected {net.name!r}")
    groups = _t_sign_groups(net)
    t = np.empty((3, 3))
    for (i, j), pts in groups.items():
        t[i, j] = 1.0 - 2.0 * sum(grid.values[q, p] for (q, p) in pts)
    return t


@dataclass(frozen=True)
class UqtVerdict:
    """Universal-teleportation check: the moduli of the correlation-matrix
    eigenvalues must coincide (within tol) and exceed 1/3."""

    det_t: float
    eigen_abs: tuple
    useful_qt: bool
    universal: bool


def uqt_check(rho, tol: float = 1e-3) -> UqtVerdict:
    rho = _require_two_qubit(rho)
    det_t = float(np.linalg.det(correlation_matrix(rho)))
    e = _t_eigen_abs(rho)
    useful = bool(det_t < 0 and 0.5 * (1.0 + e.sum() / 3.0) > 2.0 / 3.0)
    universal = bool(e[0] - e[2] <= tol and e[2] > 1.0 / 3.0)
    return UqtVerdict(det_t, tuple(float(x) for x in e), useful, universal)


@dataclass(frozen=True)
class CorrelationReport:
    """All measures for one state; max_fidelity and fidelity_deviation are
    None when det(T) >= 0 puts them out of domain."""

    concurrence: float
    coherence_l1: float
    discord: float
    steering_2: float
    steering_3: float
    max_fidelity: float | None
    fidelity_deviation: float | None
    tele_fidelity: float
    s_max: float
    p_succ: float

    CSV_FIELDS = ("concurrence", "coherence_l1", "discord", "steering_2", "steering_3",
                  "max_fidelity", "fidelity_deviation", "tele_fidelity", "s_max", "p_succ")

    def csv_row(self) -> list:
        row = []
        for name in self.CSV_FIELDS:
            value = getattr(self, name)
            row.append("" if value is None else f"{value:.12g}")
        return row


def report(rho, p_succ: float = 1.0, discord_grid_n: int = 64,
           discord_refine_tol: float = 1e-8) -> CorrelationReport:
    """Evaluate every measure on one state; out-of-domain fields become None."""
    rho = _require_two_qubit(rho)
    try:
        mf = maximal_fidelity(rho)
        fd = fidelity_deviation(rho)
    except OutOfDomainError:
        mf = None
        fd = None
    return CorrelationReport(
        concurrence=concurrence(rho),
        coherence_l1=coherence_l1(rho),
        discord=discord(rho, discord_grid_n, discord_refine_tol),
        steering_2=steering(rho, 2),
        steering_3=steering(rho, 3),
        max_fidelity=mf,
        fidelity_deviation=fd,
        tele_fidelity=teleportation_fidelity(rho),
        s_max=chsh_smax(rho),
        p_succ=p_succ,
    )
