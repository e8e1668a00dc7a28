import math
import os
import subprocess
import sys

import numpy as np
import pytest

from kuramoto_signed.dynamics import (
    BACKEND,
    IntegrationError,
    IntegratorConfig,
    SystemState,
    detect_sync,
    integrate,
    rhs_adaptive,
    rhs_static,
    split_at_largest_gaps,
)
from kuramoto_signed.model import BandNetworkSpec, ModelParams, build_band_network


def test_backend_selected():
    assert BACKEND in ("compiled", "python")


def test_state_validation():
    with pytest.raises(ValueError):
        SystemState(theta=np.zeros(3), kappa=np.zeros((2, 2)))
    with pytest.raises(ValueError):
        IntegratorConfig(step=0.5)
    with pytest.raises(ValueError):
        IntegratorConfig(step=1e-2, t_end=-1.0)


def test_rhs_adaptive_matches_static_when_frozen():
    rng = np.random.default_rng(1)
    state = SystemState(theta=rng.uniform(0, 2 * math.pi, 5),
                        kappa=rng.uniform(-1, 1, (5, 5)))
    params = ModelParams(omega=0.2, alpha=0.1, beta=-1.0, epsilon=0.0)
    dtheta, dkappa = rhs_adaptive(state, params)
    assert np.array_equal(dkappa, np.zeros((5, 5)))
    assert np.allclose(dtheta, rhs_static(state.theta, state.kappa, params))


def test_synchronized_state_is_fixed():
    state = SystemState(theta=np.full(4, 0.3), kappa=np.full((4, 4), 0.5))
    params = ModelParams(omega=0.0, alpha=0.0, beta=-math.pi / 2, epsilon=1.0)
    traj = integrate(state, params, IntegratorConfig(step=1e-2, t_end=5.0))
    assert np.max(traj.diameters) < 1e-12
    # couplings relax toward -sin(beta) = 1
    assert abs(traj.kappas[-1].min() - 1.0) < 1e-2


def test_splay_on_band_network_keeps_diameter():
    spec = BandNetworkSpec(12, 3, 0.4)
    theta0 = 2 * math.pi * np.arange(12) / 12
    state = SystemState(theta=theta0, kappa=build_band_network(spec))
    params = ModelParams(omega=0.0, alpha=0.0, beta=-1.0, epsilon=0.0)
    traj = integrate(state, params, IntegratorConfig(step=1e-2, t_end=10.0))
    assert np.max(np.abs(traj.diameters - traj.diameters[0])) < 1e-9


def test_frozen_network_is_bit_stable():
    rng = np.random.default_rng(2)
    kappa0 = rng.uniform(-1, 1, (4, 4))
    state = SystemState(theta=rng.uniform(0, 1, 4), kappa=kappa0)
    params = ModelParams(epsilon=0.0, beta=-1.0)
    traj = integrate(state, params, IntegratorConfig(step=1e-2, t_end=1.0))
    assert traj.kappas[-1].tobytes() == kappa0.tobytes()


def test_non_finite_input_raises_with_step():
    state = SystemState(theta=np.array([0.0, math.inf]), kappa=np.zeros((2, 2)))
    with pytest.raises(IntegrationError) as err:
        integrate(state, ModelParams(), IntegratorConfig(step=1e-2, t_end=1.0))
    assert err.value.step == 1  # detected after the first step
    assert "step 1" in str(err.value)


def test_trajectory_diagnostics_consistent():
    rng = np.random.default_rng(3)
    state = SystemState(theta=rng.uniform(0, 2, 6), kappa=rng.uniform(-1, 1, (6, 6)))
    params = ModelParams(beta=-1.2, epsilon=0.5)
    traj = integrate(state, params, IntegratorConfig(step=1e-2, t_end=2.0, sample_every=20))
    i = traj.n_samples // 2
    th = traj.thetas[i]
    assert traj.r1[i] == pytest.approx(abs(np.mean(np.exp(1j * th))))
    assert traj.kappa_min[i] == traj.kappas[i].min()
    assert traj.times[0] == 0.0 and traj.times[-1] == pytest.approx(2.0)


def test_split_at_largest_gaps():
    theta = np.array([0.1, 0.0, math.pi, math.pi + 0.05, 0.2])
    g1, g2 = split_at_largest_gaps(theta)
    assert sorted(g1 + g2) == [0, 1, 2, 3, 4]
    assert {frozenset(g1), frozenset(g2)} == {frozenset({0, 1, 4}), frozenset({2, 3})}


def test_detect_sync_complete():
    rng = np.random.default_rng(4)
    beta = -math.pi / 3
    state = SystemState(theta=rng.uniform(0, 0.4, 8), kappa=rng.uniform(0.7, 1.0, (8, 8)))
    traj = integrate(state, ModelParams(beta=beta, epsilon=1.0),
                     IntegratorConfig(step=1e-2, t_end=60.0))
    verdict = detect_sync(traj, beta)
    assert verdict.kind == "complete_sync"
    assert verdict.asymptotic_kappa == pytest.approx(-math.sin(beta), abs=1e-3)


def test_detect_sync_antipodal():
    rng = np.random.default_rng(5)
    beta = -math.pi / 2
    theta0 = np.concatenate([rng.uniform(0, 0.2, 4), math.pi + rng.uniform(0, 0.2, 4)])
    group = np.arange(8) >= 4
    same = ~(group[:, None] ^ group[None, :])
    kappa0 = np.where(same, 0.9, -0.9)
    traj = integrate(SystemState(theta=theta0, kappa=kappa0),
                     ModelParams(beta=beta, epsilon=1.0),
                     IntegratorConfig(step=1e-2, t_end=60.0))
    verdict = detect_sync(traj, beta)
    assert verdict.kind == "antipodal_sync"
    assert {frozenset(verdict.partition[0]), frozenset(verdict.partition[1])} == \
        {frozenset({0, 1, 2, 3}), frozenset({4, 5, 6, 7})}


def test_detect_sync_not_converged():
    spec = BandNetworkSpec(12, 3, 0.4)
    theta0 = 2 * math.pi * np.arange(12) / 12
    traj = integrate(SystemState(theta=theta0, kappa=build_band_network(spec)),
                     ModelParams(epsilon=0.0, beta=-1.0),
                     IntegratorConfig(step=1e-2, t_end=10.0))
    assert detect_sync(traj, -1.0).kind == "not_converged"


def test_python_backend_agrees_with_default():
    code = """
import json, numpy as np
from kuramoto_signed.dynamics import BACKEND, IntegratorConfig, SystemState, integrate
from kuramoto_signed.model import ModelParams
rng = np.random.default_rng(6)
state = SystemState(theta=rng.uniform(0, 2, 5), kappa=rng.uniform(-1, 1, (5, 5)))
traj = integrate(state, ModelParams(beta=-1.1, epsilon=0.8),
                 IntegratorConfig(step=1e-2, t_end=5.0))
print(json.dumps({"backend": BACKEND, "theta": traj.thetas[-1].tolist()}))
"""
    import json
    results = {}
    for backend in ("python", ""):
        env = dict(os.environ, KURAMOTO_SIGNED_BACKEND=backend)
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True, check=True)
        doc = json.loads(out.stdout)
        results[backend] = doc
    assert results["python"]["backend"] == "python"
    dev = np.max(np.abs(np.array(results[""]["theta"])
                        - np.array(results["python"]["theta"])))
    assert dev < 1e-12
