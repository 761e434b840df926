"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``. A
density matrix over several subsystems is passed together with ``dims``,
the list of subsystem dimensions in tensor order (e.g. ``[d, m]`` for
target (x) control).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

HERMITIAN_TOL = 1e-8
TRACE_TOL = 1e-10
NEGATIVE_EIG_TOL = 1e-9
EIG_FLOOR = 1e-14


@dataclass(frozen=True)
class HermitianSpectrum:
    """Eigenvalues sorted descending with matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a square, finite complex matrix."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def ket_to_dm(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.complex128).ravel()
    return np.outer(psi, psi.conj())


def check_density_matrix(rho, atol: float = TRACE_TOL) -> np.ndarray:
    """Return ``rho`` as an array, raising ``ValueError`` if it is not a state."""
    rho = as_matrix(rho)
    herm_err = np.max(np.abs(rho - dagger(rho)))
    if herm_err > atol:
        raise ValueError(f"not Hermitian (max deviation {herm_err:.3g})")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > atol:
        raise ValueError(f"trace {tr!r} differs from 1")
    lo = np.linalg.eigvalsh(rho)[0]
    if lo < -NEGATIVE_EIG_TOL:
        raise ValueError(f"not positive semidefinite (smallest eigenvalue {lo:.3g})")
    return rho


def is_density_matrix(rho, atol: float = TRACE_TOL) -> bool:
    try:
        check_density_matrix(rho, atol)
    except ValueError:
        return False
    return True


def partial_trace(rho, dims: Sequence[int], keep) -> np.ndarray:
    """Reduced state on the subsystems listed in ``keep``.

    ``keep`` is a single subsystem index or a sequence of them; the kept
    subsystems stay in their original tensor order.
    """
    rho = as_matrix(rho)
    dims = [int(x) for x in dims]
    if len(dims) < 2:
        raise ValueError("partial trace needs at least two subsystems")
    if int(np.prod(dims)) != rho.shape[0]:
        raise ValueError(f"dims {dims} do not match matrix size {rho.shape[0]}")
    keep = [keep] if np.isscalar(keep) else list(keep)
    n = len(dims)
    for k in keep:
        if not 0 <= k < n:
            raise ValueError(f"invalid subsystem index {k} for {n} subsystems")
    keep = sorted(set(keep))
    traced = [i for i in range(n) if i not in keep]

    t = rho.reshape(dims + dims)
    # Contract each traced subsystem's row index against its column index.
    for count, i in enumerate(traced):
        ax = i - count
        t = np.trace(t, axis1=ax, axis2=ax + t.ndim // 2)
    dk = int(np.prod([dims[i] for i in keep]))
    return t.reshape(dk, dk)


def eig_hermitian(a, tol: float = HERMITIAN_TOL) -> HermitianSpectrum:
    a = as_matrix(a)
    err = np.max(np.abs(a - dagger(a)))
    if err > tol:
        raise ValueError(f"matrix is not Hermitian (max deviation {err:.3g})")
    w, v = np.linalg.eigh((a + dagger(a)) / 2)
    return HermitianSpectrum(w[::-1].copy(), v[:, ::-1].copy())


def entropy_from_eigenvalues(w) -> float:
    w = np.asarray(w, dtype=float)
    if w.size and w.min() < -NEGATIVE_EIG_TOL:
        raise ValueError(f"negative eigenvalue {w.min():.3g} in density matrix")
    w = w[w > EIG_FLOOR]
    return float(-np.sum(w * np.log2(w))) + 0.0  # no negative zero


def von_neumann_entropy(rho) -> float:
    """Entropy in bits, with 0 log 0 = 0 below an eigenvalue floor of 1e-14."""
    rho = as_matrix(rho)
    return entropy_from_eigenvalues(np.linalg.eigvalsh((rho + dagger(rho)) / 2))
