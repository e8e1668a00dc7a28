"""Pure-numpy RK4 kernel, the fallback twin of the compiled extension.

Same call signature and sampling layout as the Cython kernel; results
agree to integrator tolerance (summation order differs, so bit-level
equality across backends is not guaranteed)."""

from __future__ import annotations

import numpy as np


def _rhs(theta, kappa, omega, alpha, beta, eps):
    diff = theta[:, None] - theta[None, :]
    dtheta = omega - np.mean(kappa * np.sin(diff + alpha), axis=1)
    if eps > 0.0:
        dkappa = -eps * (np.sin(diff + beta) + kappa)
    else:
        dkappa = 0.0
    return dtheta, dkappa


def integrate_kernel(theta0, kappa0, omega, alpha, beta, eps,
                     h, n_steps, sample_every):
    """See the compiled kernel for the contract."""
    n = theta0.shape[0]
    n_samples = n_steps // sample_every + 1
    thetas = np.empty((n_samples, n))
    kappas = np.empty((n_samples, n, n))
    th = theta0.copy()
    ka = kappa0.copy()
    thetas[0] = th
    kappas[0] = ka
    si = 1
    bad_step = -1
    for step in range(1, n_steps + 1):
        t1, k1 = _rhs(th, ka, omega, alpha, beta, eps)
        t2, k2 = _rhs(th + 0.5 * h * t1, ka + 0.5 * h * k1, omega, alpha, beta, eps)
        t3, k3 = _rhs(th + 0.5 * h * t2, ka + 0.5 * h * k2, omega, alpha, beta, eps)
        t4, k4 = _rhs(th + h * t3, ka + h * k3, omega, alpha, beta, eps)
        th = th + (h / 6.0) * (t1 + 2.0 * t2 + 2.0 * t3 + t4)
        if eps > 0.0:
            ka = ka + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not (np.all(np.isfinite(th)) and np.all(np.isfinite(ka))):
            bad_step = step
            break
        if step % sample_every == 0:
            thetas[si] = th
            kappas[si] = ka
            si += 1
    if bad_step >= 0:
        thetas = thetas[:si]
        kappas = kappas[:si]
    return thetas, kappas, bad_step
