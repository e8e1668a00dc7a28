"""Right-hand sides and a deterministic fixed-step RK4 integrator for
the static and adaptive phase-oscillator systems, with trajectory
diagnostics and convergence detection.

The hot loop lives in a compiled extension (`_rk4_c`) with a pure-numpy
fallback (`_rk4_py`); selection happens at import and can be forced with
KURAMOTO_SIGNED_BACKEND=python|compiled.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from .model import ModelParams, circular_diameter

from . import _rk4_py

_FORCED = os.environ.get("KURAMOTO_SIGNED_BACKEND", "").lower()
if _FORCED == "python":
    _kernel = _rk4_py
    BACKEND = "python"
else:
    try:
        from . import _rk4_c as _kernel  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        if _FORCED == "compiled":
            raise
        _kernel = _rk4_py
        BACKEND = "python"


class IntegrationError(RuntimeError):
    """Non-finite state encountered while stepping."""

    def __init__(self, step: int):
        super().__init__(f"non-finite state at step {step}")
        self.step = step


@dataclass(frozen=True)
class SystemState:
    theta: np.ndarray
    kappa: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        theta = np.ascontiguousarray(self.theta, dtype=float)
        kappa = np.ascontiguousarray(self.kappa, dtype=float)
        if kappa.shape != (theta.size, theta.size):
            raise ValueError("kappa shape must match theta length")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "kappa", kappa)

    @property
    def n(self) -> int:
        return self.theta.size


@dataclass(frozen=True)
class IntegratorConfig:
    step: float = 1e-2
    t_end: float = 50.0
    sample_every: int = 10

    def __post_init__(self):
        if not (0 < self.step <= 0.1):
            raise ValueError("step must lie in (0, 0.1]")
        if self.t_end <= 0:
            raise ValueError("t_end must be > 0")
        if self.sample_every < 1:
            raise ValueError("sample_every must be >= 1")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.step))


@dataclass(frozen=True)
class Trajectory:
    """Sampled states plus per-sample diagnostics.  Phases are lifted
    reals; the diameter column is max - min without wrapping."""

    times: np.ndarray
    thetas: np.ndarray  # (samples, n)
    kappas: np.ndarray  # (samples, n, n)
    diameters: np.ndarray = field(default=None)  # type: ignore[assignment]
    r1: np.ndarray = field(default=None)  # type: ignore[assignment]
    r2: np.ndarray = field(default=None)  # type: ignore[assignment]
    kappa_min: np.ndarray = field(default=None)  # type: ignore[assignment]
    kappa_max: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.diameters is None:
            diam = self.thetas.max(axis=1) - self.thetas.min(axis=1)
            z1 = np.abs(np.mean(np.exp(1j * self.thetas), axis=1))
            z2 = np.abs(np.mean(np.exp(2j * self.thetas), axis=1))
            object.__setattr__(self, "diameters", diam)
            object.__setattr__(self, "r1", z1)
            object.__setattr__(self, "r2", z2)
            object.__setattr__(self, "kappa_min", self.kappas.min(axis=(1, 2)))
            object.__setattr__(self, "kappa_max", self.kappas.max(axis=(1, 2)))

    @property
    def n_samples(self) -> int:
        return self.times.size

    def state_at(self, i: int) -> SystemState:
        return SystemState(theta=self.thetas[i], kappa=self.kappas[i],
                           time=float(self.times[i]))

    def final_state(self) -> SystemState:
        return self.state_at(-1)


@dataclass(frozen=True)
class SyncVerdict:
    """kind: 'complete_sync', 'antipodal_sync', 'not_converged'."""

    kind: str
    asymptotic_kappa: float | None = None
    final_diameter: float = math.nan
    partition: tuple[tuple[int, ...], tuple[int, ...]] | None = None


def rhs_adaptive(state: SystemState, params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """Time derivative of (theta, kappa) for the adaptive system."""
    diff = state.theta[:, None] - state.theta[None, :]
    dtheta = params.omega - np.mean(state.kappa * np.sin(diff + params.alpha), axis=1)
    if params.epsilon > 0:
        dkappa = -params.epsilon * (np.sin(diff + params.beta) + state.kappa)
    else:
        dkappa = np.zeros_like(state.kappa)
    return dtheta, dkappa


def rhs_static(theta: np.ndarray, kappa: np.ndarray, params: ModelParams) -> np.ndarray:
    """Phase derivative on a frozen network (adaptation rate 0)."""
    theta = np.asarray(theta, dtype=float)
    kappa = np.asarray(kappa, dtype=float)
    if kappa.shape != (theta.size, theta.size):
        raise ValueError("dimension mismatch")
    diff = theta[:, None] - theta[None, :]
    return params.omega - np.mean(kappa * np.sin(diff + params.alpha), axis=1)


def integrate(state0: SystemState, params: ModelParams,
              cfg: IntegratorConfig = IntegratorConfig()) -> Trajectory:
    """Classical fixed-step RK4 for the coupled (theta, kappa) system.

    Deterministic: identical inputs produce bit-identical trajectories
    on the same backend."""
    n_steps = cfg.n_steps
    thetas, kappas, bad_step = _kernel.integrate_kernel(
        np.ascontiguousarray(state0.theta, dtype=float),
        np.ascontiguousarray(state0.kappa, dtype=float),
        float(params.omega), float(params.alpha), float(params.beta),
        float(params.epsilon), float(cfg.step), n_steps, int(cfg.sample_every),
    )
    if bad_step >= 0:
        raise IntegrationError(int(bad_step))
    times = state0.time + cfg.step * cfg.sample_every * np.arange(thetas.shape[0])
    return Trajectory(times=times, thetas=thetas, kappas=kappas)


def split_at_largest_gaps(theta: np.ndarray) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """2-cluster a circular phase sample by cutting at the two largest
    angular gaps.  Returns the two index sets (either may be empty)."""
    n = theta.size
    can = np.mod(theta, 2 * np.pi)
    order = np.argsort(can)
    sorted_th = can[order]
    gaps = np.diff(sorted_th, append=sorted_th[0] + 2 * np.pi)
    g = np.argsort(gaps)[::-1]
    if n < 2 or gaps[g[1]] < 1e-12:
        return tuple(int(i) for i in range(n)), ()
    c1, c2 = sorted(int(x) for x in g[:2])
    group_b = [int(order[i]) for i in range(c1 + 1, c2 + 1)]
    group_a = [int(order[i]) for i in range(c2 + 1, n)] + \
              [int(order[i]) for i in range(0, c1 + 1)]
    return tuple(sorted(group_a)), tuple(sorted(group_b))


def _window_ok(values: np.ndarray, tol: float) -> bool:
    return bool(np.all(values < tol))


def detect_sync(traj: Trajectory, beta: float,
                tol_phase: float = 1e-6, tol_kappa: float = 1e-3) -> SyncVerdict:
    """Classify the tail of a trajectory.

    Complete sync: phase diameter below tol_phase and every coupling
    within tol_kappa of -sin(beta), sustained over the trailing 10% of
    samples.  Antipodal sync: the same after shifting one recovered
    cluster by pi and flipping the sign of cross-cluster couplings.
    """
    if traj.n_samples == 0:
        raise ValueError("empty trajectory")
    n_tail = max(1, traj.n_samples // 10)
    tail = slice(traj.n_samples - n_tail, traj.n_samples)
    target = -math.sin(beta)
    final_diam = float(circular_diameter(traj.thetas[-1]))

    diam_tail = np.array([circular_diameter(t) for t in traj.thetas[tail]])
    kap_dev = np.max(np.abs(traj.kappas[tail] - target), axis=(1, 2))
    if _window_ok(diam_tail, tol_phase) and _window_ok(kap_dev, tol_kappa):
        return SyncVerdict(kind="complete_sync",
                           asymptotic_kappa=float(np.mean(traj.kappas[-1])),
                           final_diameter=final_diam)

    part = split_at_largest_gaps(traj.thetas[-1])
    if part[0] and part[1]:
        n = traj.thetas.shape[1]
        shift = np.zeros(n)
        shift[list(part[1])] = np.pi
        sign = np.ones((n, n))
        ix = np.zeros(n, dtype=bool)
        ix[list(part[1])] = True
        sign[np.ix_(~ix, ix)] = -1.0
        sign[np.ix_(ix, ~ix)] = -1.0
        diam_tail = np.array([circular_diameter(t - shift) for t in traj.thetas[tail]])
        kap_dev = np.max(np.abs(traj.kappas[tail] * sign - target), axis=(1, 2))
        if _window_ok(diam_tail, tol_phase) and _window_ok(kap_dev, tol_kappa):
            intra = traj.kappas[-1] * sign
            return SyncVerdict(kind="antipodal_sync",
                               asymptotic_kappa=float(np.mean(intra)),
                               final_diameter=final_diam,
                               partition=part)
    return SyncVerdict(kind="not_converged", final_diameter=final_diam)
