"""Command-line interface.

Exit codes: 0 success, 1 assertion failure, 2 usage/config error,
3 numerical failure.  All outputs are written atomically; given the same
config and seed, two runs produce byte-identical files.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click
import numpy as np

from . import io, spectral, suites
from .basins import critical_diameter
from .dynamics import (BACKEND, IntegrationError, IntegratorConfig, SystemState,
                       detect_sync, integrate)
from .model import (BandNetworkSpec, BlockNetworkSpec, ModelParams,
                    build_band_network, build_block_network)

EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _max_workers() -> int:
    raw = os.environ.get("KURAMOTO_SIGNED_THREADS", "")
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    return cap if cap > 0 else (os.cpu_count() or 1)


def _fail_config(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_CONFIG)


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        _fail_config(f"cannot read config {path}: {exc}")


def _network_from_config(doc, base: Path):
    """Return (spec-or-None, coupling matrix) from the `network` entry:
    an inline block/band spec or {"type": "matrix", "path": ...}."""
    if doc.get("type") == "matrix":
        matrix = io.matrix_from_csv((base / doc["path"]).read_text())
        if matrix.shape[0] != matrix.shape[1]:
            raise ValueError("coupling matrix must be square")
        return None, matrix
    spec = io.spec_from_json(doc)
    if isinstance(spec, BandNetworkSpec):
        return spec, build_band_network(spec)
    return spec, build_block_network(spec)


def _phases_from_config(doc, n: int) -> np.ndarray:
    """Explicit list, or {"sampler": "uniform-arc", "width": c, "seed": s}."""
    if isinstance(doc, list):
        theta = np.asarray(doc, dtype=float)
        if theta.size != n:
            raise ValueError(f"initial_phases has {theta.size} entries, network has {n}")
        return theta
    if doc.get("sampler") != "uniform-arc":
        raise ValueError(f"unknown sampler {doc.get('sampler')!r}")
    if "seed" not in doc:
        raise ValueError("sampler requires an explicit seed")
    rng = np.random.default_rng(int(doc["seed"]))
    return rng.uniform(0.0, float(doc["width"]), n)


def _write_gnuplot(csv_path: Path, title: str, plot: str):
    io.atomic_write_text(csv_path.with_suffix(".gp"),
                         f'set datafile separator ","\nset title "{title}"\n{plot}\n')


@click.group()
def main():
    """Phase-oscillator toolkit for signed and adaptive networks."""


@main.command()
@click.argument("config", type=click.Path())
@click.option("--out", type=click.Path(), default=None,
              help="Output directory (overrides the config's `outputs`).")
@click.option("--gnuplot", is_flag=True, help="Emit a plotting script next to the CSV.")
def simulate(config, out, gnuplot):
    """Integrate a run config; write trajectory.csv and verdict.json."""
    doc = _load_json(config)
    base = Path(config).resolve().parent
    try:
        params = ModelParams(**doc.get("model", {}))
        _, kappa0 = _network_from_config(doc["network"], base)
        theta0 = _phases_from_config(doc["initial_phases"], kappa0.shape[0])
        cfg = IntegratorConfig(**doc.get("integrator", {}))
        out_dir = Path(out if out is not None else base / doc.get("outputs", "."))
    except (KeyError, TypeError, ValueError) as exc:
        _fail_config(str(exc))
    out_dir.mkdir(parents=True, exist_ok=True)

    try:
        traj = integrate(SystemState(theta=theta0, kappa=kappa0), params, cfg)
    except IntegrationError as exc:
        click.echo(f"error: numerical blow-up at step {exc.step}", err=True)
        sys.exit(EXIT_NUMERIC)

    csv_path = out_dir / "trajectory.csv"
    io.atomic_write_text(csv_path, io.trajectory_to_csv(traj))
    verdict = detect_sync(traj, params.beta)
    io.write_json(out_dir / "verdict.json", dataclasses.asdict(verdict))
    if gnuplot:
        _write_gnuplot(csv_path, "phase diameter",
                       f'plot "{csv_path.name}" using 1:"diameter" with lines')
    click.echo(f"{verdict.kind}  final diameter {verdict.final_diameter:.6g}  "
               f"backend={BACKEND}")


@main.command()
@click.option("--network", "network_path", required=True, type=click.Path(),
              help="Network spec JSON (block or band).")
@click.option("--kind", required=True,
              help="Equilibrium: sync, antipodal, or rotating:m.")
@click.option("--out", type=click.Path(), default=".", help="Output directory.")
def spectrum(network_path, kind, out):
    """Closed-form vs numeric spectrum at an equilibrium of a network."""
    try:
        spec = io.spec_from_json(_load_json(network_path))
    except (KeyError, ValueError) as exc:
        _fail_config(str(exc))

    if kind in ("sync", "antipodal"):
        if not isinstance(spec, BlockNetworkSpec):
            _fail_config(f"kind {kind!r} requires a block network")
        if kind == "sync":
            closed = spectral.complete_sync_spectrum(spec)
            matrix = build_block_network(spec)
        else:
            closed = spectral.antipodal_spectrum(spec)
            matrix = spectral.antipodal_matrix(spec)
        lap = -matrix.copy()
        np.fill_diagonal(lap, 0.0)
        np.fill_diagonal(lap, -lap.sum(axis=1))
        numeric = spectral.numeric_spectrum(lap)
        verdict = spectral.stability_verdict(-closed.expand())
    elif kind.startswith("rotating:"):
        if not isinstance(spec, BandNetworkSpec):
            _fail_config("rotating waves require a band network")
        try:
            m = int(kind.split(":", 1)[1])
            lam = spectral.rotating_wave_eigenvalues(spec, m)
        except ValueError as exc:
            _fail_config(str(exc))
        closed = spectral.Spectrum(tuple((float(v), 1) for v in np.sort(lam)))
        jac = spectral.jacobian_at(build_band_network(spec),
                                   spectral.rotating_wave_state(spec, m))
        numeric = spec.n * spectral.numeric_spectrum(jac)
        verdict = spectral.stability_verdict(lam / spec.n)
    else:
        _fail_config(f"unknown kind {kind!r}")

    deviation = float(np.max(np.abs(closed.expand() - np.sort(numeric))))
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    lines = ["index,closed_form,numeric"]
    for i, (c, x) in enumerate(zip(closed.expand(), np.sort(numeric))):
        lines.append(f"{i},{c:.17g},{x:.17g}")
    lines.append(f"# max_deviation,{deviation:.17g}")
    lines.append(f"# verdict,{verdict.kind}")
    io.atomic_write_text(out_dir / "spectrum.csv", "\n".join(lines) + "\n")
    click.echo(f"{verdict.kind}  max deviation {deviation:.3e}")


@main.command("admissible-p")
@click.option("--n", "n", required=True, type=int, help="Network size.")
@click.option("--m", "ms", required=True, multiple=True, type=int,
              help="Winding number (repeatable).")
@click.option("--w-min", type=int, default=1, show_default=True)
@click.option("--w-max", type=int, default=None,
              help="Default: largest valid band half-width.")
@click.option("--out", type=click.Path(), default=".", help="Output directory.")
def admissible_p_cmd(n, ms, w_min, w_max, out):
    """Admissible inhibition-strength range per (W, m); CSV table."""
    if w_max is None:
        w_max = (n - n % 2) // 2 - 1
    if not (1 <= w_min <= w_max):
        _fail_config("need 1 <= w-min <= w-max")
    lines = ["W,m,kind,lower,upper"]
    for w in range(w_min, w_max + 1):
        for m in ms:
            try:
                r = spectral.admissible_p(n, w, m)
            except ValueError as exc:
                _fail_config(str(exc))
            lo = "" if r.lower is None else f"{r.lower:.17g}"
            hi = "" if r.upper is None else f"{r.upper:.17g}"
            lines.append(f"{w},{m},{r.kind},{lo},{hi}")
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    io.atomic_write_text(out_dir / "admissible_p.csv", "\n".join(lines) + "\n")
    click.echo(f"wrote {len(lines) - 1} rows")


@main.command("sweep-dbar")
@click.option("--beta", "betas", required=True, multiple=True, type=float,
              help="Adaptation phase lag; one panel per value (repeatable).")
@click.option("--eps-min", type=float, default=1e-3, show_default=True)
@click.option("--eps-max", type=float, default=10.0, show_default=True)
@click.option("--eps-count", type=int, default=20, show_default=True)
@click.option("--kmin-min", type=float, default=-0.7, show_default=True)
@click.option("--kmin-max", type=float, default=-0.1, show_default=True)
@click.option("--kmin-count", type=int, default=20, show_default=True)
@click.option("--out", type=click.Path(), default=".", help="Output directory.")
@click.option("--gnuplot", is_flag=True, help="Emit a plotting script per panel.")
def sweep_dbar(betas, eps_min, eps_max, eps_count, kmin_min, kmin_max,
               kmin_count, out, gnuplot):
    """Critical-diameter surface per beta panel; CSV + metadata JSON."""
    if eps_count * kmin_count > 10_000:
        _fail_config("grid exceeds 10000 cells per panel")
    if not (0 < eps_min <= eps_max) or not (kmin_min <= kmin_max < 0):
        _fail_config("need 0 < eps range and negative kappa_min0 range")
    epsilons = np.geomspace(eps_min, eps_max, eps_count)
    kmins = np.linspace(kmin_min, kmin_max, kmin_count)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)

    for idx, beta in enumerate(betas):
        if not (-math.pi < beta < 0):
            _fail_config(f"beta {beta} outside (-pi, 0)")
        cells = [(e, k) for e in epsilons for k in kmins]
        with ThreadPoolExecutor(max_workers=_max_workers()) as pool:
            results = list(pool.map(
                lambda ck: critical_diameter(beta, ck[0], ck[1]).d_bar, cells))
        lines = ["beta,epsilon,kappa_min0,d_bar"]
        for (e, k), d in zip(cells, results):
            lines.append(f"{beta:.17g},{e:.17g},{k:.17g},{d:.17g}")
        csv_path = out_dir / f"dbar_panel_{idx}.csv"
        io.atomic_write_text(csv_path, "\n".join(lines) + "\n")
        io.write_json(csv_path.with_suffix(".json"), {
            "beta": beta,
            "epsilon": {"min": eps_min, "max": eps_max, "count": eps_count,
                        "spacing": "geometric"},
            "kappa_min0": {"min": kmin_min, "max": kmin_max, "count": kmin_count,
                           "spacing": "linear"},
        })
        if gnuplot:
            _write_gnuplot(csv_path, f"critical diameter, beta={beta:.4g}",
                           f'splot "{csv_path.name}" using 2:3:4 with points')
    click.echo(f"wrote {len(betas)} panel(s), {eps_count}x{kmin_count} cells each")


@main.command()
@click.argument("suite")
def verify(suite):
    """Run a verification suite; prints one PASS/FAIL line per check."""
    fn = suites.SUITES.get(suite)
    if fn is None:
        _fail_config(f"unknown suite {suite!r}; choose from "
                     + ", ".join(sorted(suites.SUITES)))
    report = fn()
    for line in report.lines:
        click.echo(line)
    if not report.passed:
        sys.exit(EXIT_FAIL)


def _recipe_fig3(out_dir: Path, gnuplot: bool):
    """Stability of complete sync on a 3-group network over (a, b)."""
    sizes = (50, 30, 20)
    lines = ["a,b,verdict"]
    for a in np.linspace(-2, 2, 81):
        for b in np.linspace(-2, 2, 81):
            if a == 0 or b == 0:
                continue
            v = spectral.sync_is_stable(BlockNetworkSpec(sizes, float(a), float(b)))
            lines.append(f"{a:.17g},{b:.17g},{v.kind}")
    path = out_dir / "sync_stability_map.csv"
    io.atomic_write_text(path, "\n".join(lines) + "\n")
    if gnuplot:
        _write_gnuplot(path, "sync stability over (a, b)",
                       f'plot "{path.name}" using 1:2 with points')


def _recipe_fig4(out_dir: Path, gnuplot: bool):
    ctx = click.Context(admissible_p_cmd)
    ctx.invoke(admissible_p_cmd, n=100, ms=(0, 1, 2, 4), w_min=1, w_max=None,
               out=str(out_dir))
    if gnuplot:
        _write_gnuplot(out_dir / "admissible_p.csv", "admissible inhibition bounds",
                       'plot "admissible_p.csv" using 1:4 with points, '
                       '"" using 1:5 with points')


def _recipe_fig5(out_dir: Path, gnuplot: bool):
    """Two pinned adaptive runs at N=10: one from the positive-coupling
    basin, one from mixed-sign initial couplings."""
    rng = np.random.default_rng(7)
    n, beta = 10, -math.pi / 3
    cfg = IntegratorConfig(step=1e-2, t_end=100.0, sample_every=10)
    for name, kappa_low in (("positive_couplings", 0.8), ("mixed_couplings", -0.4)):
        theta0 = rng.uniform(0.0, 0.5, n)
        kappa0 = rng.uniform(kappa_low, 1.0, (n, n))
        traj = integrate(SystemState(theta=theta0, kappa=kappa0),
                         ModelParams(beta=beta, epsilon=1.0), cfg)
        path = out_dir / f"trajectory_{name}.csv"
        io.atomic_write_text(path, io.trajectory_to_csv(traj))
        verdict = detect_sync(traj, beta)
        io.write_json(out_dir / f"verdict_{name}.json", dataclasses.asdict(verdict))
        if gnuplot:
            _write_gnuplot(path, f"diameter, {name}",
                           f'plot "{path.name}" using 1:"diameter" with lines')


def _recipe_fig6(out_dir: Path, gnuplot: bool):
    ctx = click.Context(sweep_dbar)
    ctx.invoke(sweep_dbar, betas=(-0.4 * math.pi, -0.5 * math.pi, -0.6 * math.pi),
               eps_min=1e-3, eps_max=10.0, eps_count=20,
               kmin_min=-0.7, kmin_max=-0.1, kmin_count=20,
               out=str(out_dir), gnuplot=gnuplot)


def _recipe_fig7(out_dir: Path, gnuplot: bool):
    """Critical diameter over (beta, epsilon) at pinned minimum initial
    couplings."""
    betas = np.linspace(-0.9 * math.pi, -0.1 * math.pi, 33)
    epsilons = np.geomspace(1e-2, 10.0, 25)
    for idx, kmin in enumerate((-0.1, -0.4, -0.7)):
        lines = ["beta,epsilon,kappa_min0,d_bar"]
        for b in betas:
            for e in epsilons:
                d = critical_diameter(float(b), float(e), kmin).d_bar
                lines.append(f"{b:.17g},{e:.17g},{kmin:.17g},{d:.17g}")
        path = out_dir / f"dbar_vs_beta_{idx}.csv"
        io.atomic_write_text(path, "\n".join(lines) + "\n")
        io.write_json(path.with_suffix(".json"), {"kappa_min0": kmin})
        if gnuplot:
            _write_gnuplot(path, f"critical diameter, kappa_min0={kmin}",
                           f'splot "{path.name}" using 1:2:4 with points')


@main.command()
@click.argument("name")
@click.option("--out", type=click.Path(), default=".", help="Output directory.")
@click.option("--gnuplot", is_flag=True, help="Emit plotting scripts next to CSVs.")
def recipe(name, out, gnuplot):
    """Regenerate a pinned experiment: fig3..fig7 or verify-all."""
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    if name == "verify-all":
        failed = False
        for suite_name, fn in suites.SUITES.items():
            report = fn()
            for line in report.lines:
                click.echo(f"[{suite_name}] {line}")
            failed = failed or not report.passed
        if failed:
            sys.exit(EXIT_FAIL)
        return
    recipes = {"fig3": _recipe_fig3, "fig4": _recipe_fig4, "fig5": _recipe_fig5,
               "fig6": _recipe_fig6, "fig7": _recipe_fig7}
    fn = recipes.get(name)
    if fn is None:
        _fail_config(f"unknown recipe {name!r}; choose from "
                     + ", ".join(sorted(recipes)) + ", verify-all")
    fn(out_dir, gnuplot)
    click.echo(f"recipe {name} written to {out_dir}")
