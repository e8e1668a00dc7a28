"""Domain types, signed-network generators, order parameters and
phase-configuration classification.

Phases are stored as lifted reals; :func:`canonicalize` maps them to
[0, 2pi) explicitly.  Diameter-based arguments need the lifted
coordinates, so nothing here wraps implicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi


class DegenerateAngleError(ValueError):
    """Raised when the mixed-cluster angle equation has no unique root."""


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the (adaptive) phase-oscillator model.

    omega:   common angular frequency (rad / time)
    alpha:   phase lag inside the coupling term (rad)
    beta:    phase lag inside the adaptation term (rad), kept in (-pi, pi]
    epsilon: adaptation rate (1 / time), >= 0; zero freezes the network
    """

    omega: float = 0.0
    alpha: float = 0.0
    beta: float = -math.pi / 2
    epsilon: float = 0.0

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        if not (-math.pi < self.beta <= math.pi):
            raise ValueError("beta must lie in (-pi, pi]")


@dataclass(frozen=True)
class BlockNetworkSpec:
    """Block-constant signed network: weight `a` inside each group,
    `b` between groups.  `class_assignment[m]` optionally marks group m
    as belonging to the 0-phase class (0) or the pi-phase class (1)."""

    group_sizes: tuple[int, ...]
    a: float
    b: float
    class_assignment: tuple[int, ...] | None = None

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.group_sizes)
        object.__setattr__(self, "group_sizes", sizes)
        if len(sizes) < 1 or any(s < 1 for s in sizes):
            raise ValueError("group_sizes must be positive integers")
        if self.class_assignment is not None:
            ca = tuple(int(c) for c in self.class_assignment)
            object.__setattr__(self, "class_assignment", ca)
            if len(ca) != len(sizes):
                raise ValueError("class_assignment length must match group count")
            if any(c not in (0, 1) for c in ca):
                raise ValueError("class_assignment entries must be 0 or 1")

    @property
    def n(self) -> int:
        return sum(self.group_sizes)

    @property
    def n_groups(self) -> int:
        return len(self.group_sizes)


@dataclass(frozen=True)
class BandNetworkSpec:
    """Circular band network on `n` nodes: weight 1 for ring distance
    <= `w`, weight -p beyond."""

    n: int
    w: int
    p: float

    def __post_init__(self):
        w_max = (self.n - self.n % 2) // 2 - 1
        if not (1 <= self.w <= w_max):
            raise ValueError(f"w must satisfy 1 <= w <= {w_max} for n={self.n}")
        if self.p <= 0:
            raise ValueError("p must be > 0")


@dataclass(frozen=True)
class OrderParameters:
    n: int
    r: float
    psi: float


@dataclass(frozen=True)
class ConfigurationClass:
    """Tagged classification of a phase configuration.

    kind is one of 'synchronized', 'antipodal', 'splay',
    'double_antipodal', 'other'.  For 'double_antipodal', `psi` is the
    fitted angle between the two antipodal pairs and `m` the number of
    oscillators on the reference pair.
    """

    kind: str
    psi: float | None = None
    m: int | None = None


@dataclass(frozen=True)
class PhaseLockedSolution:
    capital_omega: float
    offsets: np.ndarray
    induced_kappa: np.ndarray = field(repr=False)


def canonicalize(theta: np.ndarray) -> np.ndarray:
    """Map lifted phases into [0, 2pi)."""
    out = np.mod(np.asarray(theta, dtype=float), TWO_PI)
    # mod can return 2pi for tiny negative inputs after rounding
    out[out >= TWO_PI] = 0.0
    return out


def phase_diameter(theta: np.ndarray) -> float:
    """max - min of lifted phases (no wrapping applied)."""
    theta = np.asarray(theta, dtype=float)
    return float(np.max(theta) - np.min(theta))


def circular_diameter(theta: np.ndarray) -> float:
    """Smallest arc containing all phases: 2pi minus the largest gap."""
    th = np.sort(canonicalize(theta))
    if th.size == 1:
        return 0.0
    gaps = np.diff(th, append=th[0] + TWO_PI)
    return float(TWO_PI - np.max(gaps))


def order_parameter(theta: np.ndarray, n: int = 1) -> OrderParameters:
    """n-th circular order parameter of a phase configuration."""
    theta = np.asarray(theta, dtype=float)
    if theta.size == 0:
        raise ValueError("empty configuration")
    if n < 1:
        raise ValueError("order index n must be >= 1")
    z = np.mean(np.exp(1j * n * theta))
    r = float(abs(z))
    psi = float(np.angle(z)) % TWO_PI if r > 1e-15 else 0.0
    return OrderParameters(n=n, r=r, psi=psi)


def _fit_double_antipodal(theta: np.ndarray, tol: float) -> tuple[float, int] | None:
    """Try to express all phases as {0, pi, psi, psi+pi} up to a global
    rotation.  Returns (psi, m) on success, where m counts the
    oscillators on the reference antipodal pair."""
    # collapse antipodes: work mod pi
    x = np.sort(np.mod(np.asarray(theta, dtype=float), math.pi))
    n = x.size
    if n < 2:
        return None
    # circular clustering (period pi) into two clusters split at the two
    # largest gaps
    gaps = np.diff(x, append=x[0] + math.pi)
    order = np.argsort(gaps)[::-1]
    g1, g2 = order[0], order[1]
    lo, hi = (g1, g2) if g1 < g2 else (g2, g1)
    cluster_a = np.concatenate([x[hi + 1:], x[: lo + 1]])  # wraps around
    cluster_b = x[lo + 1: hi + 1]
    if cluster_a.size == 0 or cluster_b.size == 0:
        return None

    def spread(c):
        if c.size < 2:
            return 0.0
        d = np.mod(c - c[0] + math.pi / 2, math.pi) - math.pi / 2
        return float(d.max() - d.min())

    def center(c):
        d = np.mod(c - c[0] + math.pi / 2, math.pi) - math.pi / 2
        return float(np.mod(c[0] + d.mean(), math.pi))

    if spread(cluster_a) > 2 * tol or spread(cluster_b) > 2 * tol:
        return None
    ca, cb = center(cluster_a), center(cluster_b)
    sep = (cb - ca) % math.pi
    if sep <= tol or sep >= math.pi - tol:
        return None
    # reference pair = the larger cluster; ties go to the one giving the
    # smaller psi (keeps the answer permutation invariant)
    if cluster_a.size > cluster_b.size:
        psi, m = sep, cluster_a.size
    elif cluster_b.size > cluster_a.size:
        psi, m = math.pi - sep, cluster_b.size
    else:
        psi, m = min(sep, math.pi - sep), cluster_a.size
    return psi, m


def classify_configuration(theta: np.ndarray, tol: float = 1e-6) -> ConfigurationClass:
    """Classify a phase configuration.

    Priority order: synchronized, antipodal, splay, double_antipodal,
    other.  The classes overlap at edge cases; the first match wins.
    """
    theta = np.asarray(theta, dtype=float)
    if theta.size == 0:
        raise ValueError("empty configuration")
    if not (0 < tol < 0.1):
        raise ValueError("tol must lie in (0, 0.1)")
    if circular_diameter(theta) < tol:
        return ConfigurationClass(kind="synchronized")
    r2 = order_parameter(theta, 2).r
    if r2 > 1 - tol:
        return ConfigurationClass(kind="antipodal")
    if r2 < tol:
        return ConfigurationClass(kind="splay")
    fit = _fit_double_antipodal(theta, tol)
    if fit is not None:
        psi, m = fit
        return ConfigurationClass(kind="double_antipodal", psi=psi, m=m)
    return ConfigurationClass(kind="other")


def mixed_cluster_angle(n_total: int, m: int, alpha: float, beta: float) -> float:
    """Angle psi in (0, pi) separating the two antipodal pairs of a
    double-antipodal phase-locked state with m oscillators on the
    reference pair.

    Solves (n-m)/m * sin(psi - g) = sin(psi + g) with g = alpha + beta
    by bracketing bisection, which reduces to
    tan(psi) = n/(n-2m) * tan(g).
    """
    if not (1 <= m <= n_total - 1):
        raise ValueError("m must satisfy 1 <= m <= n_total - 1")
    g = alpha + beta
    sg = math.sin(g)
    if n_total == 2 * m:
        if abs(sg) < 1e-15:
            raise DegenerateAngleError("degenerate: every psi solves the equation")
        return math.pi / 2
    if abs(sg) < 1e-15:
        raise DegenerateAngleError("no solution in (0, pi)")

    ratio = (n_total - m) / m

    def resid(psi):
        return ratio * math.sin(psi - g) - math.sin(psi + g)

    eps = 1e-9
    lo, hi = eps, math.pi - eps
    flo = resid(lo)
    if flo * resid(hi) > 0:
        raise DegenerateAngleError("no solution in (0, pi)")
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if flo * resid(mid) <= 0:
            hi = mid
        else:
            lo = mid
            flo = resid(lo)
    return 0.5 * (lo + hi)


def build_block_network(spec: BlockNetworkSpec) -> np.ndarray:
    """Coupling matrix with constant blocks: `a` within groups (diagonal
    included), `b` across groups."""
    n = spec.n
    kappa = np.full((n, n), spec.b, dtype=float)
    start = 0
    for size in spec.group_sizes:
        kappa[start:start + size, start:start + size] = spec.a
        start += size
    return kappa


def group_slices(spec: BlockNetworkSpec) -> list[slice]:
    out, start = [], 0
    for size in spec.group_sizes:
        out.append(slice(start, start + size))
        start += size
    return out


def build_band_network(spec: BandNetworkSpec) -> np.ndarray:
    """Circulant band matrix: 1 for ring distance <= w (diagonal
    included), -p beyond."""
    idx = np.arange(spec.n)
    dist = np.abs(idx[:, None] - idx[None, :])
    dist = np.minimum(dist, spec.n - dist)
    return np.where(dist <= spec.w, 1.0, -spec.p)


def induced_coupling(offsets: np.ndarray, beta: float) -> np.ndarray:
    """Coupling matrix realized along a phase-locked solution:
    kappa_ij = -sin(offset_i - offset_j + beta)."""
    offsets = np.asarray(offsets, dtype=float)
    return -np.sin(offsets[:, None] - offsets[None, :] + beta)


def phase_locked_solution(offsets: np.ndarray, params: ModelParams) -> PhaseLockedSolution:
    """Assemble the phase-locked solution carried by the given offsets."""
    offsets = np.asarray(offsets, dtype=float)
    kappa = induced_coupling(offsets, params.beta)
    n = offsets.size
    # collective frequency: omega - (1/N) sum_j kappa_ij sin(phi_i - phi_j + alpha)
    diffs = offsets[:, None] - offsets[None, :] + params.alpha
    drift = params.omega - np.mean(kappa * np.sin(diffs), axis=1)
    return PhaseLockedSolution(
        capital_omega=float(drift.mean()),
        offsets=offsets,
        induced_kappa=kappa,
    )
