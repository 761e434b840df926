"""Qudit depolarizing channels in the Weyl-Heisenberg Kraus representation."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .qmath import check_density_matrix, dagger

COMPLETENESS_TOL = 1e-10


def shift_operator(d: int) -> np.ndarray:
    """X|j> = |j+1 mod d>."""
    return np.roll(np.eye(d, dtype=np.complex128), 1, axis=0)


def clock_operator(d: int) -> np.ndarray:
    """Z|j> = w^j |j> with w = exp(2 pi i / d)."""
    return np.diag(np.exp(2j * np.pi * np.arange(d) / d))


def weyl_operator(d: int, a: int, b: int) -> np.ndarray:
    """Generalized Pauli ``X^a Z^b``."""
    if d < 1:
        raise ValueError(f"dimension must be positive, got {d}")
    if not (0 <= a < d and 0 <= b < d):
        raise ValueError(f"Weyl indices ({a}, {b}) out of range for d={d}")
    x = np.linalg.matrix_power(shift_operator(d), a)
    z = np.linalg.matrix_power(clock_operator(d), b)
    return x @ z


@dataclass(frozen=True)
class KrausSet:
    """Kraus elements of one channel acting on a ``d``-level target.

    ``q`` is informational (the depolarizing strength the set was built
    from); it is ``None`` for hand-built sets.
    """

    d: int
    ops: tuple
    q: float | None = None
    _stack: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        stack = np.asarray([np.asarray(k, dtype=np.complex128) for k in self.ops])
        if stack.ndim != 3 or stack.shape[1:] != (self.d, self.d):
            raise ValueError(f"every Kraus operator must be {self.d}x{self.d}")
        stack.setflags(write=False)
        object.__setattr__(self, "_stack", stack)

    @property
    def stack(self) -> np.ndarray:
        """Kraus operators as a read-only ``(n, d, d)`` array."""
        return self._stack

    def __len__(self) -> int:
        return len(self.ops)

    def completeness_error(self) -> float:
        s = np.einsum("kji,kjl->il", self._stack.conj(), self._stack)
        return float(np.max(np.abs(s - np.eye(self.d))))

    def is_complete(self, tol: float = COMPLETENESS_TOL) -> bool:
        return self.completeness_error() <= tol


def depolarizing_kraus(d: int, q: float) -> KrausSet:
    """Kraus set of ``rho -> q rho + (1 - q) tr(rho) I/d``.

    Uses ``c_ab X^a Z^b`` with the identity term carrying the extra weight
    ``q`` so one formula covers every ``q`` in [0, 1].
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"depolarizing strength must lie in [0, 1], got {q}")
    c_rest = np.sqrt((1.0 - q) / d**2)
    c_id = np.sqrt(q + (1.0 - q) / d**2)
    ops = []
    for a in range(d):
        for b in range(d):
            c = c_id if a == 0 and b == 0 else c_rest
            ops.append(c * weyl_operator(d, a, b))
    return KrausSet(d=d, ops=tuple(ops), q=float(q))


def depolarize(rho, q: float) -> np.ndarray:
    """Closed-form depolarizing map, used as a reference for the Kraus sum."""
    rho = np.asarray(rho, dtype=np.complex128)
    d = rho.shape[0]
    return q * rho + (1.0 - q) * np.trace(rho) * np.eye(d) / d


def apply_channel(k: KrausSet, rho) -> np.ndarray:
    rho = check_density_matrix(rho)
    if rho.shape[0] != k.d:
        raise ValueError(f"state has dimension {rho.shape[0]}, channel expects {k.d}")
    s = k.stack
    return np.einsum("kij,jl,kml->im", s, rho, s.conj())


def identity_kraus(d: int) -> KrausSet:
    return KrausSet(d=d, ops=(np.eye(d, dtype=np.complex128),), q=1.0)


def kraus_adjoint_sum(k: KrausSet) -> np.ndarray:
    """``sum_i K_i K_i^dagger``; equals the identity for unital channels."""
    return sum(op @ dagger(op) for op in k.stack)
