"""Holevo information of a switch configuration.

    chi = log2 d + H(rho_c_out) - H_min

``rho_c_out`` is the control state after the switch (target traced out) and
``H_min`` the smallest joint output entropy over pure target inputs, found by
multi-start Nelder-Mead over a hyperspherical chart of pure states.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from .qmath import entropy_from_eigenvalues, ket_to_dm, partial_trace, von_neumann_entropy
from .switch import SwitchSpec, switch_output, switch_output_fast

CONVERGENCE_TOL = 1e-7
CONTROL_DRIFT_TOL = 1e-6


class ControlDriftWarning(UserWarning):
    """The output control state depends on the target input."""


@dataclass(frozen=True)
class PureStateChart:
    """Point of the pure-state chart: d-1 polar angles then d-1 relative phases."""

    params: np.ndarray

    @property
    def d(self) -> int:
        return len(self.params) // 2 + 1

    def ket(self) -> np.ndarray:
        return chart_to_ket(self.params)

    def density_matrix(self) -> np.ndarray:
        return ket_to_dm(self.ket())


def chart_to_ket(params) -> np.ndarray:
    params = np.asarray(params, dtype=float)
    if params.size % 2:
        raise ValueError("chart needs an even number of parameters")
    k = params.size // 2
    theta, phi = params[:k], params[k:]
    amp = np.ones(k + 1)
    for i, t in enumerate(theta):
        amp[i] *= math.cos(t)
        amp[i + 1:] *= math.sin(t)
    phases = np.concatenate([[1.0], np.exp(1j * phi)])
    return amp * phases


def ket_to_chart(psi) -> np.ndarray:
    """Inverse of :func:`chart_to_ket` up to global phase."""
    psi = np.asarray(psi, dtype=np.complex128).ravel()
    psi = psi / np.linalg.norm(psi)
    k = psi.size - 1
    r = np.abs(psi)
    theta = np.empty(k)
    for i in range(k):
        theta[i] = math.atan2(np.linalg.norm(r[i + 1:]), r[i])
    phi = np.angle(psi[1:]) - np.angle(psi[0]) if r[0] > 0 else np.angle(psi[1:])
    return np.concatenate([theta, phi])


@dataclass
class OptimizerOptions:
    starts: int = 32
    seed: int = 7
    tol: float = 1e-9  # entropy tolerance per start (bits)
    xatol: float = 1e-7
    maxiter: int = 4000
    probes: int = 8  # random inputs used to check input independence of rho_c_out


@dataclass(frozen=True)
class HolevoResult:
    chi: float
    h_control: float
    h_min: float
    minimizer: PureStateChart
    starts_used: int
    converged: bool
    control_drift: float = 0.0

    @property
    def minimizing_state(self) -> np.ndarray:
        return self.minimizer.ket()


def output_entropy(spec: SwitchSpec, params) -> float:
    """Joint output entropy (bits) for the pure input at chart point ``params``."""
    s = switch_output_fast(spec, ket_to_dm(chart_to_ket(params)))
    return entropy_from_eigenvalues(np.linalg.eigvalsh((s + s.conj().T) / 2))


def start_points(d: int, starts: int, seed: int) -> np.ndarray:
    k = d - 1
    if k == 0:
        return np.zeros((starts, 0))
    u = qmc.Halton(d=2 * k, scramble=True, seed=seed).random(starts)
    return np.hstack([u[:, :k] * (np.pi / 2), u[:, k:] * (2 * np.pi)])


def min_output_entropy(spec: SwitchSpec, opts: OptimizerOptions | None = None):
    """Return ``(h_min, PureStateChart, converged)``.

    Converged means the two best starts agree within 1e-7 bits.
    """
    opts = opts or OptimizerOptions()
    if spec.d == 1:
        return output_entropy(spec, []), PureStateChart(np.zeros(0)), True

    def f(x):
        return output_entropy(spec, x)

    runs = []
    for x0 in start_points(spec.d, opts.starts, opts.seed):
        res = minimize(f, x0, method="Nelder-Mead",
                       options=dict(xatol=opts.xatol, fatol=opts.tol, maxiter=opts.maxiter))
        runs.append((float(res.fun), res.x, bool(res.success)))
    # min() keeps the earliest start on ties
    order = sorted(range(len(runs)), key=lambda i: (runs[i][0], i))
    best_val, best_x, best_ok = runs[order[0]]
    if len(runs) > 1:
        converged = runs[order[1]][0] - best_val <= CONVERGENCE_TOL
    else:
        converged = best_ok
    return best_val, PureStateChart(np.asarray(best_x)), converged


def control_output(spec: SwitchSpec, rho) -> np.ndarray:
    """Control state after the switch, target traced out."""
    out = switch_output(spec, rho)
    return partial_trace(out.state, out.dims, keep=1)


def random_pure_state(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def control_drift(spec: SwitchSpec, reference, probes: int, seed: int) -> float:
    """Largest deviation of the output control state from ``reference`` over random inputs."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(probes):
        rc = control_output(spec, ket_to_dm(random_pure_state(spec.d, rng)))
        worst = max(worst, float(np.max(np.abs(rc - reference))))
    return worst


def holevo_chi(spec: SwitchSpec, opts: OptimizerOptions | None = None) -> HolevoResult:
    opts = opts or OptimizerOptions()
    h_min, chart, converged = min_output_entropy(spec, opts)
    rc = control_output(spec, chart.density_matrix())
    h_control = von_neumann_entropy(rc)
    drift = control_drift(spec, rc, opts.probes, opts.seed) if opts.probes else 0.0
    if drift > CONTROL_DRIFT_TOL:
        warnings.warn(f"output control state varies with the input (max deviation {drift:.3g}); "
                      "H(rho_c) taken at the entropy minimizer", ControlDriftWarning, stacklevel=2)
    chi = math.log2(spec.d) + h_control - h_min
    if -1e-9 <= chi < 0:
        chi = 0.0
    return HolevoResult(chi=chi, h_control=h_control, h_min=h_min, minimizer=chart,
                        starts_used=opts.starts, converged=converged, control_drift=drift)
