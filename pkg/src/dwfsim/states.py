"""State constructors: Bell states, negative states of qubit/qutrit/two-qubit
systems, and the product-Pauli decomposition of two-qubit density matrices.

Negative states are the normalized eigenvectors attached to negative
eigenvalues of phase-space point operators. The published amplitude vectors
are rounded to three decimals; ``ns_from_operator`` is the exact path and the
stored vectors are validated against it in the test suite (tolerance 2e-2).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, dm, herm_eigen, tensor
from .phasespace import PhasePointOperator, assemble_point_operator, canonical_net, mub_tables, ns1_net, phase_point_operator

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

GELL_MANN = (
    np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=complex),
    np.array([[0, -1j, 0], [1j, 0, 0], [0, 0, 0]], dtype=complex),
    np.array([[1, 0, 0], [0, -1, 0], [0, 0, 0]], dtype=complex),
    np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]], dtype=complex),
    np.array([[0, 0, -1j], [0, 0, 0], [1j, 0, 0]], dtype=complex),
    np.array([[0, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=complex),
    np.array([[0, 0, 0], [0, 0, -1j], [0, 1j, 0]], dtype=complex),
    np.diag([1, 1, -2]).astype(complex) / np.sqrt(3),
)

BELL_LABELS = ("phi+", "phi-", "psi+", "psi-")

_BELL_VECTORS = {
    "phi+": np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2),
    "phi-": np.array([1, 0, 0, -1], dtype=complex) / np.sqrt(2),
    "psi+": np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2),
    "psi-": np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2),
}

# rounded amplitude vectors of the two-qubit negative states
_K = 1 / np.sqrt(2)
_NS_VECTORS = {
    "ns1": [-0.743, -0.357 * (1 - 1j), 0.102 * (1 + 1j), -0.414],
    "ns2": [0.788, -0.288 * (1 - 1j), -0.288 * (1 + 1j), -0.211],
    "ns3": [-0.0508, 0.631 - 0.228j, -0.279 - 0.682j, 0.0508],
    "ns3p": [-0.575, -0.346 + 0.310j, -0.265 - 0.229j, 0.575],
    "ns3pp": [0.0, 1j * _K, _K, 0.0],
}
NS_LABELS = tuple(_NS_VECTORS)

# qubit negative state, Bloch components
QUBIT_NS1_BLOCH = (0.50, 0.56, -0.66)

# qutrit negative state, Gell-Mann components
QUTRIT_NS1_COMPONENTS = (0.0, 0.0, -0.5, 0.0, 0.0, 0.4, 0.7, -0.3)


def bell(which: str) -> np.ndarray:
    """One of the four Bell state vectors, keyed 'phi+', 'phi-', 'psi+', 'psi-'."""
    try:
        return _BELL_VECTORS[which].copy()
    except KeyError:
        raise ValueError(f"unknown Bell label {which!r}; options: {BELL_LABELS}") from None


def bloch_qubit(a1: float, a2: float, a3: float) -> np.ndarray:
    return 0.5 * (I2 + a1 * SIGMA_X + a2 * SIGMA_Y + a3 * SIGMA_Z)


def negative_qubit() -> np.ndarray:
    """Single-qubit negative state in Bloch form (rounded components)."""
    return bloch_qubit(*QUBIT_NS1_BLOCH)


def bloch_qutrit(n) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    rho = np.eye(3, dtype=complex) / 3
    for nk, lk in zip(n, GELL_MANN):
        rho = rho + np.sqrt(3) * nk * lk / 3
    return rho


def negative_qutrit() -> np.ndarray:
    """Single-qutrit negative state in generalized Bloch form.

    The stored components are one-decimal approximations, so the result is
    Hermitian with unit trace but its smallest eigenvalue dips to about
    -0.055; use ``ns_from_operator`` on a qutrit point operator for the exact
    projector.
    """
    return bloch_qutrit(QUTRIT_NS1_COMPONENTS)


def two_qubit_negative(which: str) -> np.ndarray:
    """Rounded two-qubit negative state vector, renormalized to unit norm."""
    try:
        v = np.array(_NS_VECTORS[which], dtype=complex)
    except KeyError:
        raise ValueError(f"unknown negative-state label {which!r}; options: {NS_LABELS}") from None
    return v / np.linalg.norm(v)


def ns_source_operator(which: str) -> PhasePointOperator:
    """The point operator whose negative eigenspace generates a given state.

    'ns1' uses the pinned-net operator at (0, 0) (spectrum -0.8968, -0.1420,
    0.2787, 1.7601); 'ns2' the unique basis combination with spectrum
    (-sqrt(3)/2, -1/2, sqrt(3)/2, 3/2) whose ground vector matches the stored
    ns2 amplitudes; the ns3 family shares the canonical-net operator at (0, 0),
    whose -1/2 eigenspace is doubly degenerate.
    """
    if which == "ns1":
        return phase_point_operator(ns1_net(), (0, 0))
    if which == "ns2":
        a = assemble_point_operator(mub_tables(4), (3, 0, 0, 0, 0))
        vals, _ = herm_eigen(a)
        return PhasePointOperator((0, 0), a, vals)
    if which in ("ns3", "ns3p", "ns3pp"):
        return phase_point_operator(canonical_net(4), (0, 0))
    raise ValueError(f"unknown negative-state label {which!r}")


def ns_from_operator(op: PhasePointOperator, rank: int) -> np.ndarray:
    """Eigenvector of the rank-th most negative eigenvalue (rank 1 = most negative).

    Raises if the operator has fewer than ``rank`` negative eigenvalues. The
    returned vector carries the solver's phase canonicalization; for
    degenerate eigenvalues it is one member of an orthonormal basis of the
    eigenspace.
    """
    if rank < 1:
        raise ValueError("rank must be >= 1")
    vals, vecs = herm_eigen(op.matrix)
    neg = [i for i, v in enumerate(vals) if v < -1e-12]
    neg.sort(key=lambda i: vals[i])  # most negative first
    if len(neg) < rank:
        raise ValueError(f"operator has {len(neg)} negative eigenvalues, rank {rank} requested")
    return vecs[:, neg[rank - 1]].copy()


def negative_eigenspace_projector(op: PhasePointOperator) -> np.ndarray:
    """Projector onto the span of all negative-eigenvalue eigenvectors."""
    vals, vecs = herm_eigen(op.matrix)
    cols = vecs[:, vals < -1e-12]
    return cols @ cols.conj().T


@dataclass(frozen=True)
class TwoQubitDecomposition:
    """Local Bloch vectors and correlation matrix of a two-qubit state."""

    a: np.ndarray  # qubit A locals, shape (3,)
    s: np.ndarray  # qubit B locals, shape (3,)
    t: np.ndarray  # correlation matrix, shape (3, 3)


def decompose_two_qubit(rho) -> TwoQubitDecomposition:
    """Extract a_i = <sigma_i x I>, s_i = <I x sigma_i>, t_ij = <sigma_i x sigma_j>."""
    rho = as_matrix(rho)
    if rho.shape != (4, 4):
        raise ValueError("decompose_two_qubit expects a 4x4 matrix")
    a = np.array([np.trace(rho @ tensor(sig, I2)).real for sig in PAULIS])
    s = np.array([np.trace(rho @ tensor(I2, sig)).real for sig in PAULIS])
    t = np.array([[np.trace(rho @ tensor(si, sj)).real for sj in PAULIS] for si in PAULIS])
    return TwoQubitDecomposition(a, s, t)


def reassemble_two_qubit(dec: TwoQubitDecomposition) -> np.ndarray:
    rho = tensor(I2, I2)
    for i, sig in enumerate(PAULIS):
        rho = rho + dec.a[i] * tensor(sig, I2) + dec.s[i] * tensor(I2, sig)
    for i, si in enumerate(PAULIS):
        for j, sj in enumerate(PAULIS):
            rho = rho + dec.t[i, j] * tensor(si, sj)
    return rho / 4


def state_to_csv(psi, path) -> None:
    """Write a state vector as CSV rows (re, im), one row per amplitude."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    with open(path, "w", newline="\n") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["re", "im"])
        for amp in psi:
            out.writerow([f"{amp.real:.12g}", f"{amp.imag:.12g}"])


__all__ = [
    "BELL_LABELS", "NS_LABELS", "PAULIS", "GELL_MANN",
    "bell", "bloch_qubit", "bloch_qutrit", "negative_qubit", "negative_qutrit",
    "two_qubit_negative", "ns_source_operator", "ns_from_operator",
    "negative_eigenspace_projector", "TwoQubitDecomposition",
    "decompose_two_qubit", "reassemble_two_qubit", "state_to_csv", "dm",
]
