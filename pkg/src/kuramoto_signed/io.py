"""Serialization: network specs to/from JSON, matrices and trajectories
to CSV (15+ significant digits), atomic file writes."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .dynamics import Trajectory
from .model import BandNetworkSpec, BlockNetworkSpec


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write-temp-then-rename so concurrent readers never see a partial
    file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def spec_to_json(spec: BlockNetworkSpec | BandNetworkSpec) -> dict:
    if isinstance(spec, BlockNetworkSpec):
        doc = {"type": "block", "group_sizes": list(spec.group_sizes),
               "a": spec.a, "b": spec.b}
        if spec.class_assignment is not None:
            doc["classes"] = list(spec.class_assignment)
        return doc
    if isinstance(spec, BandNetworkSpec):
        return {"type": "band", "n": spec.n, "w": spec.w, "p": spec.p}
    raise TypeError(f"not a network spec: {type(spec)!r}")


def spec_from_json(doc: dict) -> BlockNetworkSpec | BandNetworkSpec:
    kind = doc.get("type")
    if kind == "block":
        return BlockNetworkSpec(
            group_sizes=tuple(doc["group_sizes"]),
            a=float(doc["a"]), b=float(doc["b"]),
            class_assignment=tuple(doc["classes"]) if "classes" in doc else None,
        )
    if kind == "band":
        return BandNetworkSpec(n=int(doc["n"]), w=int(doc["w"]), p=float(doc["p"]))
    raise ValueError(f"unknown network type: {kind!r}")


def matrix_to_csv(matrix: np.ndarray) -> str:
    return "\n".join(",".join(_fmt(v) for v in row) for row in np.atleast_2d(matrix)) + "\n"


def matrix_from_csv(text: str) -> np.ndarray:
    rows = [[float(v) for v in line.split(",")]
            for line in text.strip().splitlines() if line.strip()]
    return np.asarray(rows, dtype=float)


def trajectory_to_csv(traj: Trajectory) -> str:
    n = traj.thetas.shape[1]
    header = (["t"] + [f"theta_{i}" for i in range(n)]
              + [f"kappa_{i}{j}" for i in range(n) for j in range(n)]
              + ["diameter", "r1", "r2", "kmin", "kmax"])
    lines = [",".join(header)]
    for s in range(traj.n_samples):
        row = ([traj.times[s]] + list(traj.thetas[s])
               + list(traj.kappas[s].ravel())
               + [traj.diameters[s], traj.r1[s], traj.r2[s],
                  traj.kappa_min[s], traj.kappa_max[s]])
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def spectrum_to_csv(entries) -> str:
    lines = ["value,multiplicity"]
    for v, m in entries:
        lines.append(f"{_fmt(v)},{m}")
    return "\n".join(lines) + "\n"


def write_json(path: str | Path, doc) -> None:
    atomic_write_text(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")
