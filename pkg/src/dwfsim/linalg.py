"""Dense complex-matrix kernel: tensor products, partial traces, Hermitian
eigendecomposition, and PSD matrix square roots.

All operations work on plain ``numpy.ndarray`` values (complex128, row-major).
States are small (dimension <= 16), so everything is dense and exact eigensolvers
are used throughout.
"""

from __future__ import annotations

import numpy as np

HERM_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10


def as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {m.shape}")
    if not np.all(np.isfinite(m.view(float))):
        raise ValueError("matrix contains non-finite entries")
    return m


def tensor(a, b) -> np.ndarray:
    """Kronecker product of two matrices (dimensions multiply)."""
    return np.kron(as_matrix(a), as_matrix(b))


def tensor_all(*ms) -> np.ndarray:
    out = as_matrix(ms[0])
    for m in ms[1:]:
        out = np.kron(out, as_matrix(m))
    return out


def dag(m) -> np.ndarray:
    return np.asarray(m).conj().T


def is_hermitian(m, tol: float = HERM_TOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def check_density_matrix(rho, herm_tol: float = 1e-12, trace_tol: float = TRACE_TOL,
                         psd_tol: float = PSD_TOL) -> np.ndarray:
    """Validate Hermiticity, unit trace, and positive semidefiniteness.

    Returns the matrix unchanged; raises ValueError on violation.
    """
    rho = as_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if np.max(np.abs(rho - rho.conj().T)) > herm_tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > trace_tol or abs(np.trace(rho).imag) > trace_tol:
        raise ValueError(f"density matrix trace {np.trace(rho)} != 1")
    evmin = float(np.linalg.eigvalsh(rho)[0])
    if evmin < -psd_tol:
        raise ValueError(f"density matrix has negative eigenvalue {evmin}")
    return rho


def check_pure_state(psi, tol: float = 1e-12) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if abs(np.vdot(psi, psi).real - 1.0) > tol:
        raise ValueError("state vector is not normalized")
    return psi


def dm(psi) -> np.ndarray:
    """Projector |psi><psi| of a (normalized) state vector."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(psi, psi.conj())


def partial_trace(rho, dims, keep) -> np.ndarray:
    """Trace out all tensor factors not listed in ``keep``.

    ``dims`` lists the factor dimensions in tensor order; ``keep`` is an
    iterable of factor indices to retain (original order preserved).
    """
    rho = as_matrix(rho)
    dims = list(dims)
    n = len(dims)
    d = int(np.prod(dims))
    if rho.shape != (d, d):
        raise ValueError(f"dims {dims} inconsistent with matrix shape {rho.shape}")
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} factors")
    t = rho.reshape(dims + dims)
    # contract traced-out factor pairs, highest index first so axes stay valid
    for k in reversed(range(n)):
        if k not in keep:
            t = np.trace(t, axis1=k, axis2=k + t.ndim // 2)
    dkeep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(dkeep, dkeep)


def herm_eigen(h, tol: float = HERM_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues sorted in
    descending order and eigenvectors as the corresponding columns. Each
    eigenvector's global phase is fixed by making its largest-magnitude
    component real and positive, so repeated runs give identical vectors.
    """
    h = as_matrix(h)
    if np.max(np.abs(h - h.conj().T)) > tol:
        raise ValueError("matrix is not Hermitian")
    vals, vecs = np.linalg.eigh(h)
    order = np.argsort(vals)[::-1]
    vals = vals[order]
    vecs = vecs[:, order]
    for i in range(vecs.shape[1]):
        j = int(np.argmax(np.abs(vecs[:, i])))
        ph = vecs[j, i]
        if abs(ph) > 0:
            vecs[:, i] *= ph.conj() / abs(ph)
    return vals, vecs


def matrix_sqrt_psd(m, neg_tol: float = 1e-8) -> np.ndarray:
    """Principal square root of a positive-semidefinite Hermitian matrix.

    Eigenvalues in [-neg_tol, 0) are treated as numerical noise and clamped
    to zero; anything below -neg_tol raises.
    """
    vals, vecs = herm_eigen(m)
    if vals[-1] < -neg_tol:
        raise ValueError(f"matrix is not PSD: smallest eigenvalue {vals[-1]}")
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T
