# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 kernel for the adaptive phase-oscillator system.

State is (theta[N], kappa[N,N]); classical fixed-step RK4.  The Python
fallback in _rk4_py mirrors this routine; keep the two in sync.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sin, isfinite

cnp.import_array()


cdef void _rhs(double[::1] theta, double[:, ::1] kappa,
               double omega, double alpha, double beta, double eps,
               double[::1] dtheta, double[:, ::1] dkappa, int n) noexcept nogil:
    cdef int i, j
    cdef double acc, diff
    for i in range(n):
        acc = 0.0
        for j in range(n):
            acc += kappa[i, j] * sin(theta[i] - theta[j] + alpha)
        dtheta[i] = omega - acc / n
    if eps > 0.0:
        for i in range(n):
            for j in range(n):
                dkappa[i, j] = -eps * (sin(theta[i] - theta[j] + beta) + kappa[i, j])


def integrate_kernel(cnp.ndarray[double, ndim=1] theta0,
                     cnp.ndarray[double, ndim=2] kappa0,
                     double omega, double alpha, double beta, double eps,
                     double h, long n_steps, long sample_every):
    """Integrate n_steps of size h, sampling every sample_every steps
    (the initial state is sample 0).  Returns (thetas, kappas, bad_step)
    where bad_step is the 1-based index of the first step that produced
    a non-finite state, or -1 if none."""
    cdef int n = theta0.shape[0]
    cdef long n_samples = n_steps // sample_every + 1
    cdef cnp.ndarray[double, ndim=2] thetas = np.empty((n_samples, n))
    cdef cnp.ndarray[double, ndim=3] kappas = np.empty((n_samples, n, n))

    cdef cnp.ndarray[double, ndim=1] th = theta0.copy()
    cdef cnp.ndarray[double, ndim=2] ka = kappa0.copy()
    cdef double[::1] thv = th
    cdef double[:, ::1] kav = ka

    cdef double[::1] t1 = np.empty(n)
    cdef double[:, ::1] k1k = np.empty((n, n))
    cdef double[::1] t2 = np.empty(n)
    cdef double[:, ::1] k2k = np.empty((n, n))
    cdef double[::1] t3 = np.empty(n)
    cdef double[:, ::1] k3k = np.empty((n, n))
    cdef double[::1] t4 = np.empty(n)
    cdef double[:, ::1] k4k = np.empty((n, n))
    cdef double[::1] tmp_t = np.empty(n)
    cdef double[:, ::1] tmp_k = np.empty((n, n))

    cdef long step, si = 0
    cdef int i, j
    cdef double val
    cdef long bad_step = -1
    cdef bint eps_on = eps > 0.0

    thetas[0] = th
    kappas[0] = ka
    si = 1

    if not eps_on:
        k1k[:, :] = 0.0
        k2k[:, :] = 0.0
        k3k[:, :] = 0.0
        k4k[:, :] = 0.0
        tmp_k[:, :] = kav

    with nogil:
        for step in range(1, n_steps + 1):
            _rhs(thv, kav, omega, alpha, beta, eps, t1, k1k, n)
            for i in range(n):
                tmp_t[i] = thv[i] + 0.5 * h * t1[i]
            if eps_on:
                for i in range(n):
                    for j in range(n):
                        tmp_k[i, j] = kav[i, j] + 0.5 * h * k1k[i, j]
            _rhs(tmp_t, tmp_k, omega, alpha, beta, eps, t2, k2k, n)
            for i in range(n):
                tmp_t[i] = thv[i] + 0.5 * h * t2[i]
            if eps_on:
                for i in range(n):
                    for j in range(n):
                        tmp_k[i, j] = kav[i, j] + 0.5 * h * k2k[i, j]
            _rhs(tmp_t, tmp_k, omega, alpha, beta, eps, t3, k3k, n)
            for i in range(n):
                tmp_t[i] = thv[i] + h * t3[i]
            if eps_on:
                for i in range(n):
                    for j in range(n):
                        tmp_k[i, j] = kav[i, j] + h * k3k[i, j]
            _rhs(tmp_t, tmp_k, omega, alpha, beta, eps, t4, k4k, n)

            for i in range(n):
                val = thv[i] + (h / 6.0) * (t1[i] + 2.0 * t2[i] + 2.0 * t3[i] + t4[i])
                thv[i] = val
                if not isfinite(val):
                    bad_step = step
            if eps_on:
                for i in range(n):
                    for j in range(n):
                        val = kav[i, j] + (h / 6.0) * (k1k[i, j] + 2.0 * k2k[i, j]
                                                       + 2.0 * k3k[i, j] + k4k[i, j])
                        kav[i, j] = val
                        if not isfinite(val):
                            bad_step = step
            if bad_step >= 0:
                break
            if step % sample_every == 0:
                with gil:
                    thetas[si] = th
                    kappas[si] = ka
                    si += 1

    if bad_step >= 0:
        thetas = thetas[:si]
        kappas = kappas[:si]
    return np.asarray(thetas), np.asarray(kappas), bad_step
