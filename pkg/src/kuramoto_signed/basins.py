"""Invariant-set machinery for the adaptive system: membership and
invariance of the two-arc set, the coupling-separation threshold, the
diameter contraction gauge, sufficient-condition checkers for complete
and antipodal synchronization, and the critical-diameter sweeps.

Everything here assumes the adaptive system with zero coupling phase
lag and zero natural frequency (the regime the sufficient conditions
are stated for); checkers raise if handed anything else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import IntegratorConfig, SystemState, integrate
from .model import ModelParams

TWO_PI = 2.0 * math.pi


def coupling_separation_threshold(beta: float, c: float) -> float:
    """Largest coupling separation delta for which the two-arc set with
    arc width c is forward invariant: -max(sin(beta-c), sin(beta+c)).
    May be <= 0, in which case no admissible delta exists."""
    if not (-math.pi < beta < 0):
        raise ValueError("beta must lie in (-pi, 0)")
    if not (0 <= c < math.pi / 2):
        raise ValueError("c must lie in [0, pi/2)")
    return -max(math.sin(beta - c), math.sin(beta + c))


def contraction_gauge(x: float) -> float:
    """csc(x) - cot(x) on (0, pi); equals tan(x/2) and is strictly
    increasing, vanishing as x -> 0+."""
    if not (0 < x < math.pi):
        raise ValueError("argument must lie in (0, pi)")
    return 1.0 / math.sin(x) - 1.0 / math.tan(x)


def contraction_gauge_inv(y: float) -> float:
    return 2.0 * math.atan(y)


@dataclass(frozen=True)
class InvariantSetSpec:
    c: float
    delta: float
    partition: tuple[tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class KappaEnvelope:
    zeta: float
    lower: float
    upper: float


@dataclass(frozen=True)
class CriticalDiameterResult:
    d_bar: float
    objective_at_max: float
    grid_resolution: float
    argmax_index: int


@dataclass
class CheckReport:
    """Line-oriented pass/fail report for the simulation checkers."""

    passed: bool = True
    lines: list[str] = field(default_factory=list)

    def record(self, ok: bool, label: str, t: float | None = None):
        stamp = f" t={t:.6g}" if t is not None else ""
        self.lines.append(f"{'PASS' if ok else 'FAIL'} {label}{stamp}")
        if not ok:
            self.passed = False

    def first_failure(self) -> str | None:
        for line in self.lines:
            if line.startswith("FAIL"):
                return line
        return None


def membership(state: SystemState, c: float, delta: float,
               slack: float = 0.0) -> tuple[bool, tuple[tuple[int, ...], tuple[int, ...]] | None]:
    """Test whether (theta, kappa) lies in the two-arc invariant set
    with arc width c and coupling separation delta.

    The literal arc representative [0, c] u [pi, pi+c] is tested (no
    rotation search; callers rotate first).  The witness partition
    assigns each node to the arc containing it."""
    th = np.mod(state.theta, TWO_PI)
    in_a = (th >= -slack) & (th <= c + slack) | (th >= TWO_PI - slack)
    in_b = (th >= math.pi - slack) & (th <= math.pi + c + slack)
    if not np.all(in_a | in_b):
        return False, None
    group_b = in_b & ~in_a
    n1 = tuple(int(i) for i in np.flatnonzero(~group_b))
    n2 = tuple(int(i) for i in np.flatnonzero(group_b))
    same = ~(group_b[:, None] ^ group_b[None, :])
    k = state.kappa
    intra_ok = np.all((k[same] >= delta - slack) & (k[same] <= 1 + slack))
    inter_ok = np.all((k[~same] >= -1 - slack) & (k[~same] <= -delta + slack))
    if intra_ok and inter_ok:
        return True, (n1, n2)
    return False, None


def sample_invariant_set(rng: np.random.Generator, n: int, c: float, delta: float,
                         split: int | None = None) -> SystemState:
    """Draw a state uniformly from the two-arc set: phases uniform in
    the arcs, couplings uniform in the sign boxes."""
    if split is None:
        split = int(rng.integers(0, n + 1))
    theta = np.empty(n)
    theta[:split] = rng.uniform(0.0, c, split) if c > 0 else 0.0
    theta[split:] = math.pi + (rng.uniform(0.0, c, n - split) if c > 0 else 0.0)
    group_b = np.arange(n) >= split
    same = ~(group_b[:, None] ^ group_b[None, :])
    kappa = np.where(same, rng.uniform(delta, 1.0, (n, n)),
                     rng.uniform(-1.0, -delta, (n, n)))
    return SystemState(theta=theta, kappa=kappa)


def check_invariance(beta: float, c: float, delta: float, epsilon: float,
                     n: int, trials: int, t_end: float = 50.0, h: float = 1e-2,
                     seed: int = 0, slack: float = 1e-6,
                     attraction_slack: float = 1e-3) -> CheckReport:
    """Simulation check of forward invariance and attraction.

    Samples initial states inside the set, integrates, and asserts
    membership at every sample; at the final time the smallest
    intra-group coupling must have climbed above the separation
    threshold minus attraction_slack."""
    d_star = coupling_separation_threshold(beta, c)
    if not (0 <= delta < d_star):
        raise ValueError("need delta < coupling separation threshold (and > 0 threshold)")
    params = ModelParams(omega=0.0, alpha=0.0, beta=beta, epsilon=epsilon)
    cfg = IntegratorConfig(step=h, t_end=t_end, sample_every=10)
    rng = np.random.default_rng(seed)
    report = CheckReport()
    for trial in range(trials):
        state0 = sample_invariant_set(rng, n, c, delta)
        traj = integrate(state0, params, cfg)
        ok = True
        for i in range(traj.n_samples):
            inside, _ = membership(traj.state_at(i), c, delta, slack=slack)
            if not inside:
                report.record(False, f"trial {trial} membership", float(traj.times[i]))
                ok = False
                break
        if ok:
            report.record(True, f"trial {trial} membership")
        if epsilon > 0:
            final = traj.final_state()
            group_b = np.mod(final.theta, TWO_PI) >= math.pi / 2 + c
            same = ~(group_b[:, None] ^ group_b[None, :])
            min_intra = float(np.min(final.kappa[same]))
            report.record(min_intra > d_star - attraction_slack,
                          f"trial {trial} attraction (min intra kappa "
                          f"{min_intra:.6f} vs {d_star:.6f})", float(final.time))
    return report


def check_sync_conditions(state0: SystemState, beta: float,
                          allow_boundary: bool = False) -> bool:
    """Sufficient condition for full synchronization from positive
    couplings: initial diameter below min(pi+beta, |beta|), that bound
    strictly below pi/2, and all couplings positive.

    allow_boundary relaxes the strict pi/2 inequality (used for
    reproducing the boundary case beta = -pi/2)."""
    if not (-math.pi < beta < 0):
        raise ValueError("beta must lie in (-pi, 0)")
    bound = min(math.pi + beta, abs(beta))
    if bound >= math.pi / 2 and not allow_boundary:
        return False
    if bound > math.pi / 2:
        return False
    d0 = float(np.max(state0.theta) - np.min(state0.theta))
    return d0 < bound and float(np.min(state0.kappa)) > 0


def diameter_decay_bound(t: float, d0: float, beta: float) -> float:
    """Analytic upper envelope for the phase diameter under the
    positive-coupling sufficient condition, obtained by inverting the
    contraction gauge."""
    if d0 <= 0:
        return 0.0
    d_star = coupling_separation_threshold(beta, d0)
    decay = contraction_gauge(d0 / 2) * math.exp(-d_star * math.cos(d0) * t)
    return 2.0 * contraction_gauge_inv(decay)


def asymptotic_coupling_envelope(beta: float, zeta: float) -> KappaEnvelope:
    """Asymptotic bracket for every coupling once phases agree to within
    zeta; both ends collapse to -sin(beta) as zeta -> 0."""
    if not (0 < zeta <= 0.5 * min(math.pi + beta, -beta)):
        raise ValueError("zeta out of range")
    vals = (math.sin(-zeta - beta), math.sin(zeta - beta), math.sin(-beta))
    return KappaEnvelope(zeta=zeta, lower=min(vals), upper=max(vals))


def nonneg_coupling_time(epsilon: float, delta_star_val: float,
                         kappa_min0: float) -> float:
    """Time after which every coupling is guaranteed non-negative when
    starting from minimum kappa_min0 < 0."""
    if epsilon <= 0 or delta_star_val <= 0 or kappa_min0 >= 0:
        raise ValueError("need epsilon > 0, threshold > 0, kappa_min0 < 0")
    return math.log((delta_star_val - kappa_min0) / delta_star_val) / epsilon


def _dbar_objective(d: np.ndarray, beta: float, epsilon: float,
                    kappa_min0: float) -> np.ndarray:
    """Objective whose argmax over the admissible diameter range defines
    the critical diameter.  NaN where the separation threshold is <= 0
    (objective undefined there)."""
    d_star = -np.maximum(np.sin(beta - d), np.sin(beta + d))
    out = np.full_like(d, np.nan)
    ok = d_star > 0
    ds = d_star[ok]
    expo = (ds * np.log((ds - kappa_min0) / ds) + kappa_min0) / epsilon
    out[ok] = np.tan(d[ok] / 4) * np.exp(expo)
    return out


def critical_diameter(beta: float, epsilon: float, kappa_min0: float,
                      grid_points: int = 10_000) -> CriticalDiameterResult:
    """Largest initial phase diameter covered by the mixed-sign
    sufficient condition, by grid argmax (ties resolve to the smaller
    diameter, the conservative side)."""
    if not (-math.pi < beta < 0):
        raise ValueError("beta must lie in (-pi, 0)")
    if kappa_min0 >= 0:
        raise ValueError("kappa_min0 must be < 0")
    if epsilon <= 0:
        raise ValueError("epsilon must be > 0")
    if grid_points < 1000:
        raise ValueError("grid_points must be >= 1000")
    # the objective is invariant under beta -> -pi - beta; fold onto the
    # representative nearer 0 so mirrored inputs share one grid exactly
    if beta < -math.pi / 2:
        beta = -math.pi - beta
    d_max = min(math.pi + beta, abs(beta))
    grid = np.linspace(0.0, d_max, grid_points)
    obj = _dbar_objective(grid, beta, epsilon, kappa_min0)
    if np.all(np.isnan(obj)):
        return CriticalDiameterResult(0.0, 0.0, float(grid[1] - grid[0]), 0)
    idx = int(np.nanargmax(obj))
    return CriticalDiameterResult(
        d_bar=float(grid[idx]),
        objective_at_max=float(obj[idx]),
        grid_resolution=float(grid[1] - grid[0]),
        argmax_index=idx,
    )


@dataclass(frozen=True)
class SweepTable:
    """Rectangular grid of critical diameters with axis metadata."""

    betas: tuple[float, ...]
    epsilons: tuple[float, ...]
    kappa_min0s: tuple[float, ...]
    d_bar: np.ndarray  # shape (len(betas), len(epsilons), len(kappa_min0s))


def sweep_critical_diameter(betas, epsilons, kappa_min0s,
                            grid_points: int = 10_000) -> SweepTable:
    """Critical diameter on the Cartesian product of the three grids."""
    betas = tuple(float(b) for b in betas)
    epsilons = tuple(float(e) for e in epsilons)
    kappa_min0s = tuple(float(k) for k in kappa_min0s)
    if not betas or not epsilons or not kappa_min0s:
        raise ValueError("grids must be nonempty")
    out = np.empty((len(betas), len(epsilons), len(kappa_min0s)))
    for i, b in enumerate(betas):
        for j, e in enumerate(epsilons):
            for k, km in enumerate(kappa_min0s):
                out[i, j, k] = critical_diameter(b, e, km, grid_points).d_bar
    return SweepTable(betas=betas, epsilons=epsilons, kappa_min0s=kappa_min0s,
                      d_bar=out)


def verify_sync_theorem(state0: SystemState, params: ModelParams,
                        t_end: float = 100.0, h: float = 1e-2,
                        bound_slack: float = 1e-6,
                        kappa_tol: float = 1e-3) -> CheckReport:
    """Simulate a positive-coupling initial state and assert the
    analytic diameter envelope at every sample plus coupling convergence
    to -sin(beta) by the final time."""
    if params.alpha != 0 or params.omega != 0:
        raise ValueError("sufficient conditions assume zero lag and zero frequency")
    if not check_sync_conditions(state0, params.beta):
        raise ValueError("initial data violates the sufficient condition")
    report = CheckReport()
    d0 = float(np.max(state0.theta) - np.min(state0.theta))
    traj = integrate(state0, params, IntegratorConfig(step=h, t_end=t_end))
    bounds = np.array([diameter_decay_bound(t, d0, params.beta) for t in traj.times])
    ok = np.all(traj.diameters <= bounds + bound_slack)
    worst = int(np.argmax(traj.diameters - bounds))
    report.record(bool(ok), "diameter within analytic envelope",
                  float(traj.times[worst]) if not ok else None)
    dev = float(np.max(np.abs(traj.kappas[-1] + math.sin(params.beta))))
    report.record(dev < kappa_tol, f"final coupling deviation {dev:.2e}",
                  float(traj.times[-1]))
    return report


def verify_adaptive_theorem(state0: SystemState, params: ModelParams,
                            t_end: float = 100.0, h: float = 1e-2,
                            grid_points: int = 10_000) -> CheckReport:
    """Simulate a mixed-sign initial state and assert: the diameter
    never exceeds the critical diameter, couplings are non-negative
    after the analytic sign time, and the run ends in complete sync."""
    from .dynamics import detect_sync

    if params.alpha != 0 or params.omega != 0:
        raise ValueError("sufficient conditions assume zero lag and zero frequency")
    kappa_min0 = float(np.min(state0.kappa))
    if kappa_min0 >= 0:
        raise ValueError("needs a negative initial coupling")
    res = critical_diameter(params.beta, params.epsilon, kappa_min0, grid_points)
    d0 = float(np.max(state0.theta) - np.min(state0.theta))
    if d0 > res.d_bar:
        raise ValueError("initial diameter exceeds the critical diameter")
    report = CheckReport()
    traj = integrate(state0, params, IntegratorConfig(step=h, t_end=t_end))
    ok = np.all(traj.diameters <= res.d_bar + 1e-6)
    worst = int(np.argmax(traj.diameters))
    report.record(bool(ok), "diameter below critical diameter",
                  float(traj.times[worst]) if not ok else None)

    d_star = coupling_separation_threshold(params.beta, res.d_bar)
    if d_star > 0:
        t_sign = nonneg_coupling_time(params.epsilon, d_star, kappa_min0)
        after = traj.times >= t_sign + h
        kmin_after = traj.kappa_min[after]
        ok = np.all(kmin_after >= -1e-6)
        report.record(bool(ok), f"couplings non-negative after t={t_sign:.4g}")
    else:
        report.record(False, "separation threshold non-positive at critical diameter")

    verdict = detect_sync(traj, params.beta)
    report.record(verdict.kind == "complete_sync",
                  f"final verdict {verdict.kind}", float(traj.times[-1]))
    return report


def sample_adaptive_initial(rng: np.random.Generator, n: int, beta: float,
                            epsilon: float, kappa_min0: float,
                            diameter_fraction: float = 0.9,
                            grid_points: int = 10_000) -> SystemState:
    """Random initial data for the mixed-sign sufficient condition:
    phases spanning the given fraction of the critical diameter,
    couplings uniform in [kappa_min0, 1] with the minimum attained."""
    d_bar = critical_diameter(beta, epsilon, kappa_min0, grid_points).d_bar
    d0 = diameter_fraction * d_bar
    theta = rng.uniform(0.0, d0, n)
    theta[0], theta[1] = 0.0, d0
    kappa = rng.uniform(kappa_min0, 1.0, (n, n))
    kappa[n - 1, 0] = kappa_min0
    return SystemState(theta=theta, kappa=kappa)
