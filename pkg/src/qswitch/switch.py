"""The quantum N-switch built from per-channel Kraus sets.

Every Kraus tuple ``(i_1, ..., i_N)`` (one index per channel) gives a switch
Kraus operator

    W = sum_k B_k(i_1, ..., i_N) (x) |k><k|

where ``B_k`` multiplies the chosen elements in the order prescribed by
causal order ``k``, first-applied channel rightmost. Each channel keeps its
own Kraus index in every branch; only the multiplication order changes.

States are laid out target (x) control, i.e. with ``dims == [d, control_dim]``.
"""
from __future__ import annotations

import enum
import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .channels import KrausSet, depolarizing_kraus
from .orders import CausalOrder, OrderCombination, order_from_label
from .qmath import check_density_matrix, ket_to_dm

log = logging.getLogger(__name__)

CPTP_TOL = 1e-9


class ControlMode(enum.Enum):
    COMPRESSED = "compressed"  # control basis = the m participating orders
    FULL = "full"  # control basis = all N! orders


@dataclass(frozen=True, eq=False)
class SwitchSpec:
    kraus_sets: tuple
    combination: OrderCombination
    control_mode: ControlMode = ControlMode.COMPRESSED
    d: int = field(init=False)

    def __post_init__(self):
        ks = tuple(self.kraus_sets)
        if not ks:
            raise ValueError("need at least one channel")
        d = ks[0].d
        if any(k.d != d for k in ks):
            raise ValueError("all channels must act on the same target dimension")
        if self.combination.n != len(ks):
            raise ValueError(f"combination is for N={self.combination.n} but {len(ks)} channels given")
        object.__setattr__(self, "kraus_sets", ks)
        object.__setattr__(self, "d", d)

    @classmethod
    def depolarizing(cls, d: int, q: Sequence[float], labels, weights=None,
                     control_mode: ControlMode = ControlMode.COMPRESSED) -> "SwitchSpec":
        """Switch of ``len(q)`` depolarizing channels over the orders in ``labels``."""
        n = len(q)
        combo = OrderCombination.from_labels(labels, n, weights)
        return cls(tuple(depolarizing_kraus(d, qi) for qi in q), combo, control_mode)

    @property
    def n(self) -> int:
        return len(self.kraus_sets)

    @property
    def control_labels(self) -> tuple:
        if self.control_mode is ControlMode.FULL:
            return tuple(range(1, math.factorial(self.n) + 1))
        return tuple(sorted(self.combination.labels))

    @property
    def control_dim(self) -> int:
        return len(self.control_labels)

    @property
    def dims(self) -> list:
        return [self.d, self.control_dim]

    @cached_property
    def kraus_tuples(self) -> np.ndarray:
        """All Kraus index tuples, shape ``(T, N)``, in lexicographic order."""
        ranges = [range(len(k)) for k in self.kraus_sets]
        return np.array(list(itertools.product(*ranges)), dtype=int).reshape(-1, self.n)

    @cached_property
    def branch_stack(self) -> np.ndarray:
        """Branch products ``B[t, a]`` for tuple ``t`` and control basis state ``a``.

        Shape ``(T, control_dim, d, d)``; read-only.
        """
        idx = self.kraus_tuples
        out = np.empty((len(idx), self.control_dim, self.d, self.d), dtype=np.complex128)
        for a, label in enumerate(self.control_labels):
            order = order_from_label(label, self.n)
            prod = np.broadcast_to(np.eye(self.d, dtype=np.complex128), (len(idx), self.d, self.d))
            for ch in order.sequence:
                prod = self.kraus_sets[ch - 1].stack[idx[:, ch - 1]] @ prod
            out[:, a] = prod
        out.setflags(write=False)
        return out

    @cached_property
    def transfer(self) -> np.ndarray:
        """Linear map from ``vec(rho)`` to ``vec(output)`` for the fixed control state.

        Shape ``((d * C)**2, d**2)`` with row-major vectorization.
        """
        b = self.branch_stack
        rc = control_state(self.combination, self.control_mode)
        m = np.einsum("taik,tbjl->iajbkl", b, b.conj(), optimize=True)
        m = m * rc[None, :, None, :, None, None]
        dc = self.d * self.control_dim
        m = m.reshape(dc * dc, self.d * self.d)
        m.setflags(write=False)
        return m


def control_state(c: OrderCombination, mode: ControlMode = ControlMode.COMPRESSED) -> np.ndarray:
    """``|psi_c><psi_c|`` with ``psi_c = sum_k sqrt(P_k) |k>``."""
    if mode is ControlMode.FULL:
        basis = list(range(1, math.factorial(c.n) + 1))
    else:
        basis = sorted(c.labels)
    psi = np.zeros(len(basis))
    for order, w in zip(c.orders, c.weights):
        psi[basis.index(order.label)] = math.sqrt(w)
    return ket_to_dm(psi)


def branch_operator(spec: SwitchSpec, kraus_index: Sequence[int], order: CausalOrder) -> np.ndarray:
    """Product of the chosen Kraus elements in the order given by ``order``."""
    if len(kraus_index) != spec.n or order.n != spec.n:
        raise ValueError(f"need one Kraus index per channel ({spec.n})")
    out = np.eye(spec.d, dtype=np.complex128)
    for ch in order.sequence:
        ks = spec.kraus_sets[ch - 1]
        i = kraus_index[ch - 1]
        if not 0 <= i < len(ks):
            raise ValueError(f"Kraus index {i} out of range for channel {ch}")
        out = ks.stack[i] @ out
    return out


def switch_kraus(spec: SwitchSpec, kraus_index: Sequence[int]) -> np.ndarray:
    """Full switch Kraus operator on target (x) control."""
    c = spec.control_dim
    w = np.zeros((spec.d * c, spec.d * c), dtype=np.complex128)
    for a, label in enumerate(spec.control_labels):
        proj = np.zeros((c, c))
        proj[a, a] = 1.0
        w += np.kron(branch_operator(spec, kraus_index, order_from_label(label, spec.n)), proj)
    return w


def apply_switch(spec: SwitchSpec, joint) -> np.ndarray:
    """Kraus sum ``sum_t W_t joint W_t^dagger`` for an arbitrary joint operator."""
    d, c = spec.d, spec.control_dim
    joint = np.asarray(joint, dtype=np.complex128)
    if joint.shape != (d * c, d * c):
        raise ValueError(f"joint operator must be {d * c}x{d * c}, got {joint.shape}")
    b = spec.branch_stack
    r = joint.reshape(d, c, d, c)
    s = np.einsum("taik,kalb,tbjl->iajb", b, r, b.conj(), optimize=True)
    return s.reshape(d * c, d * c)


@dataclass(frozen=True)
class SwitchOutput:
    state: np.ndarray
    d: int
    control_dim: int

    @property
    def dims(self) -> list:
        return [self.d, self.control_dim]

    def blocks(self) -> np.ndarray:
        """Output as a ``(C, C, d, d)`` grid of target blocks indexed by control."""
        return control_blocks(self.state, self.d, self.control_dim)


def control_blocks(state, d: int, c: int) -> np.ndarray:
    return np.asarray(state).reshape(d, c, d, c).transpose(1, 3, 0, 2)


def switch_output(spec: SwitchSpec, rho) -> SwitchOutput:
    rho = check_density_matrix(rho)
    if rho.shape[0] != spec.d:
        raise ValueError(f"target state has dimension {rho.shape[0]}, switch expects {spec.d}")
    joint = np.kron(rho, control_state(spec.combination, spec.control_mode))
    return SwitchOutput(apply_switch(spec, joint), spec.d, spec.control_dim)


def switch_output_fast(spec: SwitchSpec, rho) -> np.ndarray:
    """Same result as :func:`switch_output` through the cached transfer matrix."""
    dc = spec.d * spec.control_dim
    return (spec.transfer @ np.asarray(rho, dtype=np.complex128).ravel()).reshape(dc, dc)


def embed_control(state, d: int, labels: Sequence[int], full_dim: int) -> np.ndarray:
    """Embed a compressed-control state into the full N!-dimensional control space."""
    c = len(labels)
    blocks = np.asarray(state).reshape(d, c, d, c)
    out = np.zeros((d, full_dim, d, full_dim), dtype=np.complex128)
    pos = [k - 1 for k in labels]
    for a, pa in enumerate(pos):
        for b, pb in enumerate(pos):
            out[:, pa, :, pb] = blocks[:, a, :, b]
    return out.reshape(d * full_dim, d * full_dim)


def completeness_error(spec: SwitchSpec) -> float:
    """Max deviation of ``sum_t W_t^dagger W_t`` from the identity."""
    b = spec.branch_stack
    # W is block diagonal in the control basis, so each block checks separately.
    s = np.einsum("taji,tajl->ail", b.conj(), b)
    return float(np.max(np.abs(s - np.eye(spec.d))))


def switch_cptp_check(spec: SwitchSpec, tol: float = CPTP_TOL) -> bool:
    err = completeness_error(spec)
    if err > tol:
        log.warning("switch is not trace preserving: max deviation %.3g", err)
        return False
    return True
