"""File formats: CSV grids with JSON sidecars.

All floating-point values are written with 17 significant digits so doubles
round-trip exactly. Kernel grids are row-major over the grid (outer loop over
the first coordinate).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ConfigurationError
from .kernels import NonseparableKernel, SeparableSmsKernel, SpectralGrid
from .signals import Dirac, Gaussian, SampleSet, SamplingConfig
from .spectral import SwceMeasurements

__all__ = [
    "write_kernel_grid_csv",
    "write_samples",
    "read_samples",
    "write_swce",
    "read_swce",
    "write_estimation_result",
    "write_report",
    "kernel_to_dict",
    "kernel_from_dict",
    "shape_to_dict",
    "shape_from_dict",
]


def _fmt(v):
    return f"{float(v):.17g}"


def write_kernel_grid_csv(path, xs, ys, values, domain):
    """Header `x,y,re,im` (spatial) or `omega_x,omega_y,re,im` (frequency)."""
    if domain == "spatial":
        header = "x,y,re,im"
    elif domain == "frequency":
        header = "omega_x,omega_y,re,im"
    else:
        raise ConfigurationError(f"unknown domain {domain!r}")
    values = np.asarray(values, dtype=complex)
    path = Path(path)
    with path.open("w") as fh:
        fh.write(header + "\n")
        for i, x in enumerate(xs):
            for j, y in enumerate(ys):
                v = values[i, j]
                fh.write(f"{_fmt(x)},{_fmt(y)},{_fmt(v.real)},{_fmt(v.imag)}\n")
    return path


def kernel_to_dict(kernel):
    g = kernel.grid
    base = {
        "k1_min": g.k1_min,
        "k1_max": g.k1_max,
        "k2_min": g.k2_min,
        "k2_max": g.k2_max,
        "omega0x": g.omega0x,
        "omega0y": g.omega0y,
    }
    if isinstance(kernel, SeparableSmsKernel):
        base.update(family="separable", r1=kernel.r1, r2=kernel.r2)
    elif isinstance(kernel, NonseparableKernel):
        base.update(
            family="nonseparable",
            q_re=kernel.q.real.tolist(),
            q_im=kernel.q.imag.tolist(),
        )
    else:
        raise ConfigurationError(f"unknown kernel type {type(kernel).__name__}")
    return base


def kernel_from_dict(d):
    grid = SpectralGrid(
        k1_min=int(d["k1_min"]),
        k1_max=int(d["k1_max"]),
        k2_min=int(d["k2_min"]),
        k2_max=int(d["k2_max"]),
        omega0x=float(d["omega0x"]),
        omega0y=float(d["omega0y"]),
    )
    family = d.get("family", "nonseparable")
    if family == "separable":
        return SeparableSmsKernel(grid, r1=int(d.get("r1", 1)), r2=int(d.get("r2", 1)))
    if family == "nonseparable":
        if "q_re" in d:
            q = np.asarray(d["q_re"], dtype=float) + 1j * np.asarray(
                d.get("q_im", np.zeros_like(d["q_re"])), dtype=float
            )
            return NonseparableKernel(grid, q)
        return NonseparableKernel.ones(grid)
    raise ConfigurationError(f"unknown kernel family {family!r}")


def shape_to_dict(shape):
    if isinstance(shape, Dirac):
        return {"kind": "dirac"}
    if isinstance(shape, Gaussian):
        return {
            "kind": "gaussian",
            "sigma": shape.sigma,
            "truncation_halfwidth": shape.truncation_halfwidth,
        }
    raise ConfigurationError(f"unknown pulse shape {type(shape).__name__}")


def shape_from_dict(d):
    kind = d.get("kind", "dirac")
    if kind == "dirac":
        return Dirac()
    if kind == "gaussian":
        return Gaussian(
            sigma=float(d["sigma"]),
            truncation_halfwidth=float(d["truncation_halfwidth"]),
        )
    raise ConfigurationError(f"unknown pulse shape kind {kind!r}")


def write_samples(path, samples, provenance=None, sidecar_path=None):
    """CSV `n1,n2,re,im` plus a JSON sidecar with the sampling config and
    provenance (kernel/signal specs, seed)."""
    path = Path(path)
    cfg = samples.config
    vals = np.asarray(samples.values, dtype=complex)
    with path.open("w") as fh:
        fh.write("n1,n2,re,im\n")
        for i, n1 in enumerate(cfg.n1):
            for j, n2 in enumerate(cfg.n2):
                v = vals[i, j]
                fh.write(f"{n1},{n2},{_fmt(v.real)},{_fmt(v.imag)}\n")
    sidecar = Path(sidecar_path) if sidecar_path else path.with_suffix(path.suffix + ".json")
    meta = {
        "sampling": {
            "omega_sx": cfg.omega_sx,
            "omega_sy": cfg.omega_sy,
            "n1_min": cfg.n1_min,
            "n1_max": cfg.n1_max,
            "n2_min": cfg.n2_min,
            "n2_max": cfg.n2_max,
        },
        "values_are_real": bool(samples.is_real),
        "provenance": provenance or {},
    }
    sidecar.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return path, sidecar


def read_samples(path, sidecar_path=None):
    """Inverse of write_samples; returns (SampleSet, provenance dict)."""
    path = Path(path)
    sidecar = Path(sidecar_path) if sidecar_path else path.with_suffix(path.suffix + ".json")
    meta = json.loads(sidecar.read_text())
    s = meta["sampling"]
    cfg = SamplingConfig(
        omega_sx=float(s["omega_sx"]),
        omega_sy=float(s["omega_sy"]),
        n1_min=int(s["n1_min"]),
        n1_max=int(s["n1_max"]),
        n2_min=int(s["n2_min"]),
        n2_max=int(s["n2_max"]),
    )
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    vals = np.zeros(cfg.shape, dtype=complex)
    i1 = data[:, 0].astype(int) - cfg.n1_min
    i2 = data[:, 1].astype(int) - cfg.n2_min
    vals[i1, i2] = data[:, 2] + 1j * data[:, 3]
    if meta.get("values_are_real"):
        vals = vals.real
    return SampleSet(values=vals, config=cfg), meta.get("provenance", {})


def write_swce(path, measurements, provenance=None, sidecar_path=None):
    """CSV `k1,k2,re,im` plus a JSON sidecar with the grid parameters."""
    path = Path(path)
    g = measurements.grid
    vals = measurements.values
    with path.open("w") as fh:
        fh.write("k1,k2,re,im\n")
        for i, k1 in enumerate(g.k1):
            for j, k2 in enumerate(g.k2):
                v = vals[i, j]
                fh.write(f"{k1},{k2},{_fmt(v.real)},{_fmt(v.imag)}\n")
    sidecar = Path(sidecar_path) if sidecar_path else path.with_suffix(path.suffix + ".json")
    meta = {
        "grid": {
            "k1_min": g.k1_min,
            "k1_max": g.k1_max,
            "k2_min": g.k2_min,
            "k2_max": g.k2_max,
            "omega0x": g.omega0x,
            "omega0y": g.omega0y,
        },
        "provenance": provenance or {},
    }
    sidecar.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return path, sidecar


def read_swce(path, sidecar_path=None):
    path = Path(path)
    sidecar = Path(sidecar_path) if sidecar_path else path.with_suffix(path.suffix + ".json")
    meta = json.loads(sidecar.read_text())
    gd = meta["grid"]
    grid = SpectralGrid(
        k1_min=int(gd["k1_min"]),
        k1_max=int(gd["k1_max"]),
        k2_min=int(gd["k2_min"]),
        k2_max=int(gd["k2_max"]),
        omega0x=float(gd["omega0x"]),
        omega0y=float(gd["omega0y"]),
    )
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    vals = np.zeros((grid.size1, grid.size2), dtype=complex)
    i1 = data[:, 0].astype(int) - grid.k1_min
    i2 = data[:, 1].astype(int) - grid.k2_min
    vals[i1, i2] = data[:, 2] + 1j * data[:, 3]
    return SwceMeasurements(values=vals, grid=grid), meta.get("provenance", {})


def write_estimation_result(path, result):
    """JSON with locations, amplitudes split re/im, residual, diagnostics."""
    path = Path(path)
    payload = {
        "locations": [
            {"x": float(x), "y": float(y)} for x, y in zip(result.xs, result.ys)
        ],
        "amplitudes": [
            {"re": float(a.real), "im": float(a.imag)} for a in result.amplitudes
        ],
        "residual": float(result.residual),
        "diagnostics": {
            **{k: v for k, v in result.diagnostics.items()},
            "pairing_matrix": np.asarray(result.pairing_matrix, dtype=float).tolist(),
        },
    }
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def write_report(path, report, trials_csv_path=None):
    """Experiment report JSON plus a per-trial true/estimated locations CSV."""
    path = Path(path)
    path.write_text(json.dumps(report.as_dict(), indent=2, sort_keys=True) + "\n")
    csv_path = (
        Path(trials_csv_path)
        if trials_csv_path
        else path.with_name(path.stem + "_trials.csv")
    )
    with csv_path.open("w") as fh:
        fh.write("trial,pulse,true_x,true_y,est_x,est_y\n")
        for t in report.trials:
            for p in range(len(t.true_xs)):
                fh.write(
                    f"{t.trial},{p},{_fmt(t.true_xs[p])},{_fmt(t.true_ys[p])},"
                    f"{_fmt(t.est_xs[p])},{_fmt(t.est_ys[p])}\n"
                )
    return path, csv_path
