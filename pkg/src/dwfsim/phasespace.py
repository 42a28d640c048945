"""Discrete Wigner machinery for dimensions 2, 3, and 4: mutually unbiased
bases, quantum nets, phase-space point operators, DWF grids, negativity,
depolarizing robustness, and mana.

A quantum net fixes one discrete-Wigner convention: it associates a basis with
every striation and a basis vector (projector) with every line. Point operators
are then assembled as A(alpha) = sum of the line projectors through alpha minus
the identity, and W(alpha) = Tr[A(alpha) rho] / N.

Two nets are shipped for the two-qubit grid. ``canonical_net(4)`` is the one
whose DWF values follow the product-Pauli sign pattern used throughout the grid
exports; all sixteen of its point operators share the doubly degenerate
spectrum (-1/2, -1/2, (2-sqrt(3))/2, (2+sqrt(3))/2). ``ns1_net()`` pins the
point (0, 0) to the operator whose spectrum is (-0.8968, -0.1420, 0.2787,
1.7601); its most negative eigenvector is the first negative state of the
two-qubit system.
"""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass

import numpy as np

from .galois import GaloisField, PhaseSpaceLine, build_field, build_striations, line_through
from .linalg import as_matrix, herm_eigen

ORTHOGONALITY_TOL = 1e-10


def _nrm(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return v / np.linalg.norm(v)


def mub_tables(n: int) -> list:
    """The N+1 mutually unbiased bases of dimension N, one list of N vectors each.

    The bases follow the standard tabulation for these dimensions; the third
    vector of the fifth two-qubit basis is the orthonormal completion
    (1, -i, -1, -i)/2 of its partners.
    """
    if n == 2:
        return [
            [_nrm([0, 1]), _nrm([1, 0])],
            [_nrm([1, 1]), _nrm([1, -1])],
            [_nrm([1, 1j]), _nrm([1, -1j])],
        ]
    if n == 3:
        w = np.exp(2j * np.pi / 3)
        return [
            [_nrm([1, 0, 0]), _nrm([0, 1, 0]), _nrm([0, 0, 1])],
            [_nrm([1, 1, 1]), _nrm([1, w, w**2]), _nrm([1, w**2, w])],
            [_nrm([1, w**2, w**2]), _nrm([1, 1, w]), _nrm([1, w, 1])],
            [_nrm([1, w, w]), _nrm([1, w**2, 1]), _nrm([1, 1, w**2])],
        ]
    if n == 4:
        return [
            [_nrm(e) for e in np.eye(4)],
            [_nrm([1, 1, 1, 1]), _nrm([1, -1, 1, -1]), _nrm([1, 1, -1, -1]), _nrm([1, -1, -1, 1])],
            [_nrm([1, -1j, 1j, 1]), _nrm([1, 1j, 1j, -1]), _nrm([1, -1j, -1j, -1]), _nrm([1, 1j, -1j, 1])],
            [_nrm([1, 1, 1j, -1j]), _nrm([1, -1, 1j, 1j]), _nrm([1, 1, -1j, 1j]), _nrm([1, -1, -1j, -1j])],
            [_nrm([1, -1j, 1, 1j]), _nrm([1, 1j, 1, -1j]), _nrm([1, -1j, -1, -1j]), _nrm([1, 1j, -1, 1j])],
        ]
    raise ValueError(f"no MUB table for dimension {n}")


def check_unbiased(bases, tol: float = ORTHOGONALITY_TOL) -> None:
    n = len(bases[0])
    for (i, bi), (j, bj) in itertools.combinations(enumerate(bases), 2):
        for u in bi:
            for v in bj:
                if abs(abs(np.vdot(u, v)) ** 2 - 1.0 / n) > tol:
                    raise AssertionError(f"bases {i},{j} are not unbiased")
    for bi in bases:
        g = np.array([[np.vdot(u, v) for v in bi] for u in bi])
        if not np.allclose(g, np.eye(n), atol=tol):
            raise AssertionError("basis is not orthonormal")


@dataclass(frozen=True, eq=False)
class QuantumNet:
    """Assignment of MUBs to striations and basis vectors to lines."""

    name: str
    dim: int
    field: GaloisField
    striations: tuple          # striation -> tuple of PhaseSpaceLine
    bases: tuple               # basis index -> tuple of vectors
    striation_basis: tuple     # striation index -> basis index
    assignment: tuple          # striation index -> tuple: line index -> vector index

    def line_projector(self, s: int, line_index: int) -> np.ndarray:
        v = self.bases[self.striation_basis[s]][self.assignment[s][line_index]]
        return np.outer(v, v.conj())

    def line_vector(self, s: int, line_index: int) -> np.ndarray:
        return self.bases[self.striation_basis[s]][self.assignment[s][line_index]]

    def lines_through(self, point):
        return [line_through(self.striations, s, point) for s in range(len(self.striations))]


@dataclass(frozen=True, eq=False)
class PhasePointOperator:
    coordinate: tuple
    matrix: np.ndarray
    eigenvalues: np.ndarray  # descending


@dataclass(frozen=True, eq=False)
class DwfGrid:
    dim: int
    values: np.ndarray  # values[q, p], real
    net: str


# line -> vector-index tables, derived once by matching each net's line sums
# of point operators against the MUB projectors (see tests for the cross-check
# against the closed-form grid expressions).
_CANONICAL_STRIATION_BASIS = {2: (0, 2, 1), 3: (0, 2, 3, 1), 4: (0, 2, 4, 3, 1)}
_CANONICAL_ASSIGNMENT = {
    2: ((1, 0), (1, 0), (1, 0)),
    3: ((0, 1, 2), (2, 0, 1), (2, 1, 0), (2, 1, 0)),
    4: ((0, 1, 2, 3), (3, 2, 1, 0), (3, 0, 2, 1), (3, 1, 0, 2), (3, 2, 1, 0)),
}
_NS1_ASSIGNMENT = ((2, 0, 3, 1), (1, 0, 3, 2), (1, 2, 0, 3), (1, 3, 2, 0), (1, 0, 3, 2))


_NET_CACHE: dict = {}


def _make_net(name, n, striation_basis, assignment) -> QuantumNet:
    net = _NET_CACHE.get(name)
    if net is None:
        f = build_field(n)
        striations = tuple(tuple(s) for s in build_striations(f))
        bases = tuple(tuple(b) for b in mub_tables(n))
        check_unbiased(bases)
        net = QuantumNet(name, n, f, striations, bases, tuple(striation_basis),
                         tuple(tuple(a) for a in assignment))
        _NET_CACHE[name] = net
    return net


def canonical_net(n: int) -> QuantumNet:
    """The default quantum net of dimension n (2, 3, or 4)."""
    if n not in _CANONICAL_ASSIGNMENT:
        raise ValueError(f"no canonical net for dimension {n}")
    return _make_net(f"canonical-{n}", n, _CANONICAL_STRIATION_BASIS[n], _CANONICAL_ASSIGNMENT[n])


def ns1_net() -> QuantumNet:
    """Two-qubit net whose point operator at (0, 0) generates the NS1 state."""
    return _make_net("ns1-4", 4, _CANONICAL_STRIATION_BASIS[4], _NS1_ASSIGNMENT)


def assemble_point_operator(bases, combo) -> np.ndarray:
    """Sum of one projector per basis minus identity: a point operator candidate."""
    n = len(bases[0][0])
    a = -np.eye(n, dtype=complex)
    for basis, vi in zip(bases, combo):
        v = basis[vi]
        a = a + np.outer(v, v.conj())
    return a


def point_operator_census(n: int):
    """Yield (combo, matrix) for all N^(N+1) one-vector-per-basis operators."""
    bases = mub_tables(n)
    for combo in itertools.product(range(n), repeat=n + 1):
        yield combo, assemble_point_operator(bases, combo)


def phase_point_operator(net: QuantumNet, alpha) -> PhasePointOperator:
    """A(alpha) = sum over lines through alpha of their projectors, minus I."""
    q, p = (int(alpha[0]), int(alpha[1]))
    if not (0 <= q < net.dim and 0 <= p < net.dim):
        raise ValueError(f"point {alpha} outside the {net.dim}x{net.dim} grid")
    a = -np.eye(net.dim, dtype=complex)
    for s in range(len(net.striations)):
        line = line_through(net.striations, s, (q, p))
        a = a + net.line_projector(s, line.index)
    vals, _ = herm_eigen(a)
    return PhasePointOperator((q, p), a, vals)


_GRID_CACHE: dict = {}


def _operator_grid(net: QuantumNet):
    ops = _GRID_CACHE.get(net.name)
    if ops is None:
        ops = {
            (q, p): phase_point_operator(net, (q, p)).matrix
            for q in range(net.dim) for p in range(net.dim)
        }
        _GRID_CACHE[net.name] = ops
    return ops


def dwf(rho, net: QuantumNet) -> DwfGrid:
    """Discrete Wigner function W(q, p) = Tr[A(q, p) rho] / N."""
    rho = as_matrix(rho)
    if rho.shape != (net.dim, net.dim):
        raise ValueError(f"state dimension {rho.shape[0]} does not match net dimension {net.dim}")
    ops = _operator_grid(net)
    vals = np.empty((net.dim, net.dim))
    for (q, p), a in ops.items():
        vals[q, p] = np.trace(a @ rho).real / net.dim
    return DwfGrid(net.dim, vals, net.name)


def reconstruct(grid: DwfGrid, net: QuantumNet) -> np.ndarray:
    """Invert the DWF map: rho = sum over alpha of W(alpha) A(alpha)."""
    if grid.net != net.name:
        raise ValueError(f"grid was built with net {grid.net!r}, not {net.name!r}")
    ops = _operator_grid(net)
    rho = np.zeros((net.dim, net.dim), dtype=complex)
    for (q, p), a in ops.items():
        rho = rho + grid.values[q, p] * a
    return rho


def wigner_negativity(rho, net: QuantumNet) -> float:
    """|min over alpha of Tr[A(alpha) rho]| when that minimum is negative, else 0.

    Note the point-operator expectation is used directly, without the 1/N
    DWF normalization.
    """
    rho = as_matrix(rho)
    ops = _operator_grid(net)
    lowest = min(np.trace(a @ rho).real for a in ops.values())
    # minima inside the eigensolver noise floor count as nonnegative
    return abs(lowest) if lowest < -1e-12 else 0.0


def depolarizing_robustness(rho, net: QuantumNet) -> float:
    """Critical depolarizing-noise fraction a* = 1 - 1/(D^2 |N_G| + 1).

    Defined for prime dimensions only (D in {2, 3}).
    """
    if net.dim not in (2, 3):
        raise ValueError("depolarizing robustness is defined for prime dimensions 2 and 3")
    ng = wigner_negativity(rho, net)
    return 1.0 - 1.0 / (net.dim**2 * ng + 1.0)


def sum_negativity(rho, net: QuantumNet) -> float:
    """Total weight of the negative DWF entries (noise floor 1e-12)."""
    w = dwf(rho, net).values
    return float(-w[w < -1e-12].sum())


def mana(rho, net: QuantumNet) -> float:
    """log of the l1 norm of the DWF, evaluated as log(2 Sn + 1) with Sn the
    summed weight of the negative entries; exactly zero for nonnegative DWFs."""
    return float(np.log(2.0 * sum_negativity(rho, net) + 1.0))


def grid_to_csv(grid: DwfGrid, path) -> None:
    """Write a DWF grid as CSV rows (q, p, w), grid indices starting at 1."""
    with open(path, "w", newline="\n") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["q", "p", "w"])
        for q in range(grid.dim):
            for p in range(grid.dim):
                out.writerow([q + 1, p + 1, f"{grid.values[q, p]:.12g}"])
