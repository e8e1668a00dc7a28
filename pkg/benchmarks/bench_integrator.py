"""Benchmark the compiled RK4 kernel against the pure-Python fallback.

Run: python benchmarks/bench_integrator.py [--sizes 10,50,100] [--t-end 10]
Reports wall time per backend and the max absolute deviation between the
two trajectories (they differ only by floating-point summation order).
"""

import argparse
import importlib
import os
import time

import numpy as np


def load_backend(name: str):
    os.environ["KURAMOTO_SIGNED_BACKEND"] = name
    import kuramoto_signed.dynamics as dyn
    dyn = importlib.reload(dyn)
    assert dyn.BACKEND == name, f"backend {name} unavailable (got {dyn.BACKEND})"
    return dyn


def run(dyn, theta0, kappa0, t_end):
    from kuramoto_signed.model import ModelParams
    params = ModelParams(omega=0.1, alpha=0.1, beta=-1.2, epsilon=1.0)
    cfg = dyn.IntegratorConfig(step=1e-2, t_end=t_end, sample_every=10)
    state = dyn.SystemState(theta=theta0, kappa=kappa0)
    t0 = time.perf_counter()
    traj = dyn.integrate(state, params, cfg)
    return time.perf_counter() - t0, traj


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="10,50,100")
    ap.add_argument("--t-end", type=float, default=10.0)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    rng = np.random.default_rng(0)
    print(f"{'N':>5} {'compiled (s)':>13} {'python (s)':>12} {'speedup':>8} {'max dev':>10}")
    for n in sizes:
        theta0 = rng.uniform(0, 2 * np.pi, n)
        kappa0 = rng.uniform(-1, 1, (n, n))
        t_c, traj_c = run(load_backend("compiled"), theta0, kappa0, args.t_end)
        t_p, traj_p = run(load_backend("python"), theta0, kappa0, args.t_end)
        dev = max(np.max(np.abs(traj_c.thetas - traj_p.thetas)),
                  np.max(np.abs(traj_c.kappas - traj_p.kappas)))
        print(f"{n:>5} {t_c:>13.4f} {t_p:>12.4f} {t_p / t_c:>8.1f} {dev:>10.2e}")


if __name__ == "__main__":
    main()
