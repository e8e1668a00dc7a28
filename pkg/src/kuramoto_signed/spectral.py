"""Closed-form spectra for block-structured equilibria and circulant
rotating waves, admissible inhibition ranges, and numeric
Jacobian/eigenvalue oracles.

Closed forms assume a zero coupling phase lag; the numeric Jacobian
supports a general lag for exploration.  The eigenvalue lists published
for the circulant case carry no 1/N prefactor, so they equal N times
the Jacobian eigenvalues; comparisons rescale at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import BandNetworkSpec, BlockNetworkSpec, build_band_network

MERGE_TOL = 1e-9


@dataclass(frozen=True)
class Spectrum:
    """Multiset of (eigenvalue, multiplicity), values ascending."""

    entries: tuple[tuple[float, int], ...]

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.entries)

    def expand(self) -> np.ndarray:
        """Flatten to a sorted array with repeated values."""
        return np.sort(np.repeat([v for v, _ in self.entries],
                                 [m for _, m in self.entries]))


def _merge(values_mults: list[tuple[float, int]], tol: float = MERGE_TOL) -> Spectrum:
    items = sorted((v, m) for v, m in values_mults if m > 0)
    merged: list[list[float | int]] = []
    for v, m in items:
        if merged and abs(v - merged[-1][0]) <= tol:
            merged[-1][1] += m
        else:
            merged.append([v, m])
    return Spectrum(entries=tuple((float(v), int(m)) for v, m in merged))


@dataclass(frozen=True)
class AdmissiblePRange:
    """Set of inhibition strengths p > 0 keeping every non-rotation mode
    non-positive.  kind: 'empty', 'bounded', 'lower', 'upper'."""

    kind: str
    lower: float | None = None
    upper: float | None = None

    def contains(self, p: float) -> bool:
        if self.kind == "empty":
            return False
        if self.lower is not None and p < self.lower:
            return False
        if self.upper is not None and p > self.upper:
            return False
        return p > 0


@dataclass(frozen=True)
class StabilityVerdict:
    """kind: 'stable', 'unstable', 'marginal'.  count is the number of
    offending modes (positive ones for 'unstable', extra near-zero ones
    for 'marginal')."""

    kind: str
    count: int = 0


def complete_sync_spectrum(spec: BlockNetworkSpec) -> Spectrum:
    """Laplacian spectrum (D_K - K) of a block network: group modes
    a*g + b*(N-g) with multiplicity g-1, a simple 0, and b*N with
    multiplicity M-1."""
    n, m_groups = spec.n, spec.n_groups
    vals: list[tuple[float, int]] = [(0.0, 1)]
    if m_groups > 1:
        vals.append((spec.b * n, m_groups - 1))
    for g in spec.group_sizes:
        if g > 1:
            vals.append((spec.a * g + spec.b * (n - g), g - 1))
    return _merge(vals)


def antipodal_matrix(spec: BlockNetworkSpec) -> np.ndarray:
    """Cosine-weighted interaction matrix at the antipodal equilibrium:
    entries keep their sign within a phase class and flip across the
    two classes; the diagonal keeps the raw self-weight."""
    if spec.class_assignment is None:
        raise ValueError("class assignment required")
    n = spec.n
    node_class = np.repeat(spec.class_assignment, spec.group_sizes)
    sign = np.where(node_class[:, None] == node_class[None, :], 1.0, -1.0)
    from .model import build_block_network

    a = build_block_network(spec) * sign
    np.fill_diagonal(a, spec.a)
    return a


def antipodal_spectrum(spec: BlockNetworkSpec) -> Spectrum:
    """Laplacian spectrum at the antipodal equilibrium of a block
    network.

    Modes: a simple 0; a simple -b*N; per-class splay modes
    b*(2*N_x - N) with multiplicity (#groups in class x) - 1; and local
    modes (a-b)*g + b*(N_0 - N_pi) (sign flipped on the pi class) with
    multiplicity g-1 per group.  The per-class multiplicity is the one
    that makes the total come out to N; the numeric oracle arbitrates.
    """
    if spec.class_assignment is None:
        raise ValueError("class assignment required")
    groups0 = [g for g, c in zip(spec.group_sizes, spec.class_assignment) if c == 0]
    groups1 = [g for g, c in zip(spec.group_sizes, spec.class_assignment) if c == 1]
    if not groups0 or not groups1:
        if not groups0 and not groups1:
            raise ValueError("empty class assignment")
        return complete_sync_spectrum(spec)
    n = spec.n
    n0, n1 = sum(groups0), sum(groups1)
    vals: list[tuple[float, int]] = [(0.0, 1), (-spec.b * n, 1)]
    if len(groups0) > 1:
        vals.append((spec.b * (2 * n0 - n), len(groups0) - 1))
    if len(groups1) > 1:
        vals.append((spec.b * (2 * n1 - n), len(groups1) - 1))
    for g, c in zip(spec.group_sizes, spec.class_assignment):
        if g > 1:
            sgn = 1.0 if c == 0 else -1.0
            vals.append(((spec.a - spec.b) * g + spec.b * (n0 - n1) * sgn, g - 1))
    return _merge(vals)


def jacobian_at(kappa: np.ndarray, theta_star: np.ndarray, alpha: float = 0.0) -> np.ndarray:
    """Jacobian of the phase dynamics at a fixed point theta_star on a
    frozen network."""
    kappa = np.asarray(kappa, dtype=float)
    theta_star = np.asarray(theta_star, dtype=float)
    n = theta_star.size
    if kappa.shape != (n, n):
        raise ValueError("dimension mismatch between kappa and theta_star")
    c = kappa * np.cos(theta_star[:, None] - theta_star[None, :] + alpha) / n
    j = c.copy()
    np.fill_diagonal(j, 0.0)
    np.fill_diagonal(j, -np.sum(j, axis=1))
    return j


def numeric_spectrum(matrix: np.ndarray) -> np.ndarray:
    """Eigenvalues of a symmetric real matrix, ascending (dense LAPACK
    symmetric eigensolver)."""
    matrix = np.asarray(matrix, dtype=float)
    scale = max(1.0, float(np.max(np.abs(matrix))))
    if np.max(np.abs(matrix - matrix.T)) > 1e-12 * scale:
        raise ValueError("matrix is not symmetric")
    return np.linalg.eigvalsh(matrix)


def mode_coupling_sum(j_max: int, m: int, k: int, n: int) -> float:
    """Partial sum over j=1..j_max of cos(2pi*m*j/n) * (1 - cos(2pi*k*j/n))."""
    if not (1 <= j_max <= n):
        raise ValueError("j_max must lie in 1..n")
    j = np.arange(1, j_max + 1)
    return float(np.sum(np.cos(2 * np.pi * m * j / n)
                        * (1 - np.cos(2 * np.pi * k * j / n))))


def full_mode_sum(m: int, k: int, n: int) -> float:
    """Closed form of the full-period sum: n if m = 0 (mod n), minus n/2
    for each of m+k = 0 and m-k = 0 (mod n)."""
    total = n if m % n == 0 else 0.0
    if (m + k) % n == 0:
        total -= n / 2
    if (m - k) % n == 0:
        total -= n / 2
    return float(total)


def rotating_wave_eigenvalues(spec: BandNetworkSpec, m: int) -> np.ndarray:
    """Circulant-mode eigenvalues lambda_k, k = 0..n-1, of the m-twist
    rotating wave on a band network (N times the Jacobian eigenvalues)."""
    if not (0 <= m < spec.n):
        raise ValueError("m must lie in 0..n-1")
    n, w, p = spec.n, spec.w, spec.p
    out = np.empty(n)
    for k in range(n):
        sw = mode_coupling_sum(w, m, k, n)
        out[k] = -2.0 * (1.0 + p) * sw + p * full_mode_sum(m, k, n)
    out[0] = 0.0
    return out


def rotating_wave_state(spec: BandNetworkSpec, m: int) -> np.ndarray:
    """Phases of the m-twist rotating wave, theta_j = 2pi*m*j/n."""
    return 2 * np.pi * m * np.arange(spec.n) / spec.n


def admissible_p(n: int, w: int, m: int) -> AdmissiblePRange:
    """Range of inhibition strengths p > 0 for which the m-twist
    rotating wave on an (n, w) band network has no positive mode.

    m = 0 yields an upper bound (min over modes of the per-mode cap);
    m != 0 yields a lower bound or an empty set.  Per-mode bounds are
    solved in closed form (the constraint is linear in 1/p).
    """
    sign_tol = 1e-9 * n
    if m % n == 0:
        # upper bounds: n <= 2*(1 + 1/p) * S_w(0, k) for every k != 0
        caps = []
        for k in range(1, n):
            sw = mode_coupling_sum(w, 0, k, n)
            ratio = n / (2.0 * sw) - 1.0  # sw > 0 for k != 0
            if ratio > sign_tol:
                caps.append(1.0 / ratio)
        if not caps:
            return AdmissiblePRange(kind="lower", lower=0.0)
        return AdmissiblePRange(kind="upper", upper=min(caps))

    floors = []
    for k in range(n):
        sw = mode_coupling_sum(w, m, k, n)
        if sw >= -sign_tol:
            floors.append(0.0)
        elif (m + k) % n == 0 or (m - k) % n == 0:
            slack = -n / (4.0 * sw) - 1.0
            if slack > sign_tol:
                floors.append(1.0 / slack)
            else:
                return AdmissiblePRange(kind="empty")
        else:
            return AdmissiblePRange(kind="empty")
    return AdmissiblePRange(kind="lower", lower=max(floors))


def stability_verdict(lambdas: np.ndarray, tol_marginal: float = 1e-9) -> StabilityVerdict:
    """Classify a Jacobian eigenvalue list (negative = stable) after
    discounting exactly one near-zero global-rotation mode."""
    lam = np.sort(np.asarray(lambdas, dtype=float))
    idx = int(np.argmin(np.abs(lam)))
    if abs(lam[idx]) >= tol_marginal:
        raise ValueError("missing rotation mode")
    rest = np.delete(lam, idx)
    n_pos = int(np.sum(rest > tol_marginal))
    if n_pos:
        return StabilityVerdict(kind="unstable", count=n_pos)
    n_zero = int(np.sum(np.abs(rest) <= tol_marginal))
    if n_zero:
        return StabilityVerdict(kind="marginal", count=n_zero)
    return StabilityVerdict(kind="stable")


def sync_is_stable(spec: BlockNetworkSpec, tol: float = 1e-9) -> StabilityVerdict:
    """Stability of complete synchronization on a block network, from
    the closed-form Laplacian spectrum (Jacobian = -L/N, so negate)."""
    return stability_verdict(-complete_sync_spectrum(spec).expand(), tol)


def antipodal_is_stable(spec: BlockNetworkSpec, tol: float = 1e-9) -> StabilityVerdict:
    """Stability of the antipodal state on a block network."""
    return stability_verdict(-antipodal_spectrum(spec).expand(), tol)


def rotating_wave_is_stable(spec: BandNetworkSpec, m: int,
                            tol: float = 1e-9) -> StabilityVerdict:
    """Stability of the m-twist rotating wave, from the circulant-mode
    eigenvalues scaled back to Jacobian size."""
    return stability_verdict(rotating_wave_eigenvalues(spec, m) / spec.n, tol)


def rotating_wave_jacobian(spec: BandNetworkSpec, m: int) -> np.ndarray:
    """Numeric Jacobian at the m-twist rotating wave (oracle side)."""
    return jacobian_at(build_band_network(spec), rotating_wave_state(spec, m))
