import json

import numpy as np

from kuramoto_signed import io
from kuramoto_signed.dynamics import IntegratorConfig, SystemState, integrate
from kuramoto_signed.model import BandNetworkSpec, BlockNetworkSpec, ModelParams


def test_spec_json_round_trip():
    for spec in (BlockNetworkSpec((3, 2), 1.0, -0.5, (0, 1)),
                 BlockNetworkSpec((4,), 0.3, 0.3),
                 BandNetworkSpec(20, 3, 0.1)):
        doc = io.spec_to_json(spec)
        assert io.spec_from_json(doc) == spec
        # normalization is idempotent
        assert io.spec_to_json(io.spec_from_json(doc)) == doc
        assert io.spec_from_json(json.loads(json.dumps(doc))) == spec


def test_matrix_csv_round_trip_exact():
    rng = np.random.default_rng(0)
    m = rng.uniform(-1, 1, (5, 5))
    assert np.array_equal(io.matrix_from_csv(io.matrix_to_csv(m)), m)


def test_trajectory_csv_header_and_rows():
    state = SystemState(theta=np.array([0.0, 0.4]), kappa=np.full((2, 2), 0.5))
    traj = integrate(state, ModelParams(beta=-1.0, epsilon=1.0),
                     IntegratorConfig(step=1e-2, t_end=0.5, sample_every=10))
    text = io.trajectory_to_csv(traj)
    lines = text.strip().split("\n")
    assert lines[0] == ("t,theta_0,theta_1,kappa_00,kappa_01,kappa_10,kappa_11,"
                       "diameter,r1,r2,kmin,kmax")
    assert len(lines) == 1 + traj.n_samples
    first = [float(x) for x in lines[1].split(",")]
    assert first[0] == 0.0 and first[2] == 0.4


def test_atomic_write_and_json(tmp_path):
    target = tmp_path / "sub" / "x.json"
    target.parent.mkdir()
    io.write_json(target, {"a": 1.5, "b": [1, 2]})
    assert json.loads(target.read_text()) == {"a": 1.5, "b": [1, 2]}
    io.atomic_write_text(target, "replaced")
    assert target.read_text() == "replaced"
    # no stray temp files left behind
    assert list(target.parent.iterdir()) == [target]


def test_spectrum_csv_format():
    text = io.spectrum_to_csv(((0.0, 1), (-6.0, 5)))
    assert text.splitlines()[0] == "value,multiplicity"
    assert "-6," in text and text.splitlines()[2].endswith(",5")
