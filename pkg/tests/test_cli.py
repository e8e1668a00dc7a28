import json
import math

import numpy as np
import pytest
from click.testing import CliRunner

from kuramoto_signed.basins import critical_diameter
from kuramoto_signed.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def write_run_config(path, **overrides):
    doc = {
        "model": {"beta": -math.pi / 3, "epsilon": 1.0},
        "network": {"type": "block", "group_sizes": [10], "a": 1.0, "b": 1.0},
        "initial_phases": {"sampler": "uniform-arc", "width": 0.5, "seed": 7},
        "integrator": {"step": 0.01, "t_end": 100.0, "sample_every": 10},
        "outputs": "out",
    }
    doc.update(overrides)
    path.write_text(json.dumps(doc))
    return path


def test_simulate_complete_sync(runner, tmp_path):
    cfg = write_run_config(tmp_path / "run.json")
    result = runner.invoke(main, ["simulate", str(cfg), "--out", str(tmp_path / "out")])
    assert result.exit_code == 0, result.output
    verdict = json.loads((tmp_path / "out" / "verdict.json").read_text())
    assert verdict["kind"] == "complete_sync"
    assert (tmp_path / "out" / "trajectory.csv").exists()


def test_simulate_frozen_splay_not_converged(runner, tmp_path):
    n = 12
    cfg = write_run_config(
        tmp_path / "run.json",
        model={"beta": -1.0, "epsilon": 0.0},
        network={"type": "band", "n": n, "w": 3, "p": 0.4},
        initial_phases=list(2 * math.pi * np.arange(n) / n),
        integrator={"step": 0.01, "t_end": 10.0, "sample_every": 10},
    )
    result = runner.invoke(main, ["simulate", str(cfg), "--out", str(tmp_path / "out")])
    assert result.exit_code == 0, result.output
    verdict = json.loads((tmp_path / "out" / "verdict.json").read_text())
    assert verdict["kind"] == "not_converged"
    rows = (tmp_path / "out" / "trajectory.csv").read_text().strip().split("\n")
    header = rows[0].split(",")
    col = header.index("diameter")
    diameters = [float(r.split(",")[col]) for r in rows[1:]]
    assert max(diameters) - min(diameters) < 1e-9


def test_simulate_malformed_json_exit_2(runner, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert runner.invoke(main, ["simulate", str(bad)]).exit_code == 2


def test_simulate_bad_config_exit_2(runner, tmp_path):
    cfg = write_run_config(tmp_path / "run.json", initial_phases=[0.0, 1.0])  # wrong length
    assert runner.invoke(main, ["simulate", str(cfg)]).exit_code == 2
    cfg = write_run_config(tmp_path / "run2.json",
                           initial_phases={"sampler": "uniform-arc", "width": 0.5})
    assert runner.invoke(main, ["simulate", str(cfg)]).exit_code == 2  # seed missing


def test_simulate_blow_up_exit_3(runner, tmp_path):
    matrix = tmp_path / "kappa.csv"
    matrix.write_text("nan,0\n0,0\n")
    cfg = write_run_config(tmp_path / "run.json",
                           network={"type": "matrix", "path": "kappa.csv"},
                           initial_phases=[0.0, 0.1])
    result = runner.invoke(main, ["simulate", str(cfg), "--out", str(tmp_path / "out")])
    assert result.exit_code == 3
    assert "step" in result.output


def test_spectrum_block_sync(runner, tmp_path):
    net = tmp_path / "net.json"
    net.write_text(json.dumps({"type": "block", "group_sizes": [3, 3], "a": 1.0, "b": -1.0}))
    result = runner.invoke(main, ["spectrum", "--network", str(net),
                                  "--kind", "sync", "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    assert "unstable" in result.output
    text = (tmp_path / "spectrum.csv").read_text()
    dev = float([l for l in text.splitlines() if "max_deviation" in l][0].split(",")[1])
    assert dev < 1e-8


def test_spectrum_rotating_band(runner, tmp_path):
    net = tmp_path / "net.json"
    net.write_text(json.dumps({"type": "band", "n": 20, "w": 3, "p": 0.1}))
    result = runner.invoke(main, ["spectrum", "--network", str(net),
                                  "--kind", "rotating:1", "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    # incompatible kinds exit 2
    assert runner.invoke(main, ["spectrum", "--network", str(net),
                                "--kind", "sync", "--out", str(tmp_path)]).exit_code == 2
    assert runner.invoke(main, ["spectrum", "--network", str(net),
                                "--kind", "bogus", "--out", str(tmp_path)]).exit_code == 2


def test_admissible_p_table(runner, tmp_path):
    result = runner.invoke(main, ["admissible-p", "--n", "100", "--m", "0",
                                  "--w-min", "1", "--w-max", "5", "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    rows = (tmp_path / "admissible_p.csv").read_text().strip().split("\n")
    assert rows[0] == "W,m,kind,lower,upper"
    assert len(rows) == 6
    caps = [float(r.split(",")[4]) for r in rows[1:]]
    assert caps == sorted(caps)


def test_sweep_dbar_one_cell_matches_library(runner, tmp_path):
    beta, eps, kmin = -1.4, 0.9, -0.35
    result = runner.invoke(main, [
        "sweep-dbar", "--beta", str(beta),
        "--eps-min", str(eps), "--eps-max", str(eps), "--eps-count", "1",
        "--kmin-min", str(kmin), "--kmin-max", str(kmin), "--kmin-count", "1",
        "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    row = (tmp_path / "dbar_panel_0.csv").read_text().strip().split("\n")[1]
    assert float(row.split(",")[3]) == critical_diameter(beta, eps, kmin).d_bar
    meta = json.loads((tmp_path / "dbar_panel_0.json").read_text())
    assert meta["beta"] == beta


def test_sweep_dbar_deterministic_bytes(runner, tmp_path):
    args = ["sweep-dbar", "--beta", "-1.2", "--eps-count", "4", "--kmin-count", "3"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert runner.invoke(main, args + ["--out", str(a)]).exit_code == 0
    assert runner.invoke(main, args + ["--out", str(b)]).exit_code == 0
    assert (a / "dbar_panel_0.csv").read_bytes() == (b / "dbar_panel_0.csv").read_bytes()


def test_verify_unknown_suite_exit_2(runner):
    assert runner.invoke(main, ["verify", "bogus"]).exit_code == 2


def test_verify_properties_passes(runner):
    result = runner.invoke(main, ["verify", "properties"])
    assert result.exit_code == 0, result.output
    assert "PASS" in result.output and "FAIL" not in result.output


def test_recipe_unknown_exit_2(runner, tmp_path):
    assert runner.invoke(main, ["recipe", "nope", "--out", str(tmp_path)]).exit_code == 2


def test_recipe_fig4(runner, tmp_path):
    result = runner.invoke(main, ["recipe", "fig4", "--out", str(tmp_path), "--gnuplot"])
    assert result.exit_code == 0, result.output
    rows = (tmp_path / "admissible_p.csv").read_text().strip().split("\n")
    assert len(rows) == 1 + 49 * 4  # W = 1..49, m in {0, 1, 2, 4}
    assert (tmp_path / "admissible_p.gp").exists()
