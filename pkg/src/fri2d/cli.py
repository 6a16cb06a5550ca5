"""Command-line front end exposing each pipeline stage on files.

Subcommands: kernel, check-alias, sample, spectrum, estimate,
dirac-experiment, blob-experiment. Exit codes: 0 success, 2 configuration
error (including a failed alias certificate), 3 numerical degeneracy.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, DegenerateSignalError
from .kernels import alias_check
from .signals import FriSignal, acquire, add_awgn, sampling_window
from .spectral import demodulate, dtft_on_grid
from .estimation import estimate_2d
from .experiments import (
    ExperimentConfig,
    emit_kernel,
    run_blob_experiment,
    run_dirac_experiment,
)
from . import io as fio

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DEGENERATE = 3


def _add_kernel_args(p):
    p.add_argument("--family", choices=["separable", "nonseparable"],
                   default="nonseparable")
    p.add_argument("--k-halfwidth", type=int, default=4,
                   help="symmetric index range [-k, k] on both axes")
    p.add_argument("--omega0x", type=float, default=np.pi / 0.99)
    p.add_argument("--omega0y", type=float, default=None,
                   help="defaults to omega0x")
    p.add_argument("--r1", type=int, default=1, help="separable spline order, x")
    p.add_argument("--r2", type=int, default=1, help="separable spline order, y")
    p.add_argument("--q-file", type=Path, default=None,
                   help="JSON with q_re/q_im matrices for the nonseparable family")


def _kernel_from_args(args):
    d = {
        "family": args.family,
        "k1_min": -args.k_halfwidth,
        "k1_max": args.k_halfwidth,
        "k2_min": -args.k_halfwidth,
        "k2_max": args.k_halfwidth,
        "omega0x": args.omega0x,
        "omega0y": args.omega0y if args.omega0y is not None else args.omega0x,
        "r1": args.r1,
        "r2": args.r2,
    }
    if args.family == "nonseparable" and args.q_file is not None:
        qd = json.loads(args.q_file.read_text())
        d["q_re"] = qd["q_re"]
        d["q_im"] = qd.get("q_im")
        if d["q_im"] is None:
            d.pop("q_im")
    return fio.kernel_from_dict(d)


def _cmd_kernel(args):
    kernel = _kernel_from_args(args)
    extent = None
    if args.extent is not None:
        e = args.extent
        extent = ((-e, e), (-e, e))
    emit_kernel(kernel, args.domain, args.out, extent=extent, num=args.num)
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_check_alias(args):
    kernel = _kernel_from_args(args)
    g = kernel.grid
    omega_sx = args.omega_sx if args.omega_sx else g.size1 * g.omega0x
    omega_sy = args.omega_sy if args.omega_sy else g.size2 * g.omega0y
    report = alias_check(
        kernel,
        omega_sx=omega_sx,
        omega_sy=omega_sy,
        m_max=args.m_max,
        tol_zero=args.tol_zero,
        tol_nonzero=args.tol_nonzero,
    )
    if args.out:
        Path(args.out).write_text(
            json.dumps(report.as_dict(), indent=2, sort_keys=True) + "\n"
        )
    status = "PASS" if report.passed else "FAIL"
    print(
        f"alias certificate: {status} "
        f"(worst zero violation {report.worst_zero_violation:.3e}, "
        f"min on-grid magnitude {report.min_on_grid_magnitude:.3e})"
    )
    return EXIT_OK if report.passed else EXIT_CONFIG


def _cmd_sample(args):
    cfg = json.loads(Path(args.config).read_text())
    kernel = fio.kernel_from_dict(cfg["kernel"])
    shape = fio.shape_from_dict(cfg["signal"].get("shape", {"kind": "dirac"}))
    pulses = [
        (p.get("gamma_re", 1.0) + 1j * p.get("gamma_im", 0.0), p["x"], p["y"])
        for p in cfg["signal"]["pulses"]
    ]
    signal = FriSignal.from_pulses(pulses, shape)
    g = kernel.grid
    samp = cfg.get("sampling", {})
    omega_sx = samp.get("omega_sx", g.size1 * g.omega0x)
    omega_sy = samp.get("omega_sy", g.size2 * g.omega0y)
    if all(k in samp for k in ("n1_min", "n1_max", "n2_min", "n2_max")):
        from .signals import SamplingConfig

        window = SamplingConfig(
            omega_sx=omega_sx, omega_sy=omega_sy,
            n1_min=samp["n1_min"], n1_max=samp["n1_max"],
            n2_min=samp["n2_min"], n2_max=samp["n2_max"],
        )
    else:
        xs, ys = signal.xs, signal.ys
        window = sampling_window(
            kernel, shape, (xs.min(), xs.max()), (ys.min(), ys.max()),
            omega_sx, omega_sy,
        )
    samples = acquire(
        signal, kernel, window,
        oversample=cfg.get("oversample", 16),
        method=cfg.get("acquisition_method", "auto"),
    )
    if args.snr_db is not None:
        samples = add_awgn(samples, args.snr_db, seed=args.seed)
    provenance = {
        "kernel": fio.kernel_to_dict(kernel),
        "signal": {
            "shape": fio.shape_to_dict(shape),
            "pulses": cfg["signal"]["pulses"],
        },
        "snr_db": args.snr_db,
        "seed": args.seed,
    }
    path, sidecar = fio.write_samples(args.out, samples, provenance=provenance)
    print(f"wrote {path} (+ {sidecar})")
    return EXIT_OK


def _cmd_spectrum(args):
    samples, provenance = fio.read_samples(args.samples)
    if "kernel" not in provenance:
        raise ConfigurationError(
            "samples sidecar lacks kernel provenance; cannot demodulate"
        )
    kernel = fio.kernel_from_dict(provenance["kernel"])
    shape = fio.shape_from_dict(
        provenance.get("signal", {}).get("shape", {"kind": "dirac"})
    )
    fhat = dtft_on_grid(samples, kernel.grid)
    P = demodulate(fhat, kernel, shape, floor=args.floor)
    path, sidecar = fio.write_swce(args.out, P, provenance=provenance)
    print(f"wrote {path} (+ {sidecar})")
    return EXIT_OK


def _cmd_estimate(args):
    P, _provenance = fio.read_swce(args.spectrum)
    result = estimate_2d(P, args.num_pulses)
    fio.write_estimation_result(args.out, result)
    print(f"wrote {args.out} (residual {result.residual:.3e})")
    return EXIT_OK


def _experiment_config(args, default_cls):
    overrides = {}
    if args.config:
        overrides.update(json.loads(Path(args.config).read_text()))
    for name in (
        "trials", "seed", "num_pulses", "k_halfwidth", "snr_db",
        "sampling_factor", "kernel_family", "r1", "r2", "sigma", "oversample",
    ):
        v = getattr(args, name, None)
        if v is not None:
            overrides[name] = v
    overrides.pop("kind", None)
    return default_cls(**overrides)


def _cmd_experiment(args, runner, default_cls):
    config = _experiment_config(args, default_cls)
    report = runner(config)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rpath, cpath = fio.write_report(out_dir / f"{config.kind}_report.json", report)
    print(
        f"{config.kind}: mse_db = {report.mse_db:.2f} dB over {config.trials} "
        f"trial(s); mean amplitude error {report.mean_amplitude_error:.3e}"
    )
    print(f"wrote {rpath} and {cpath}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fri2d",
        description="2-D pulse-stream sampling kernels, acquisition, and recovery",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernel", help="export a kernel grid as CSV")
    _add_kernel_args(p)
    p.add_argument("--domain", choices=["spatial", "frequency", "frequency-grid"],
                   default="spatial")
    p.add_argument("--num", type=int, default=101, help="grid points per axis")
    p.add_argument("--extent", type=float, default=None,
                   help="half-extent per axis (defaults to the natural range)")
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=_cmd_kernel)

    p = sub.add_parser("check-alias", help="run the alias-cancellation certificate")
    _add_kernel_args(p)
    p.add_argument("--omega-sx", dest="omega_sx", type=float, default=None,
                   help="defaults to |K1|*omega0x")
    p.add_argument("--omega-sy", dest="omega_sy", type=float, default=None)
    p.add_argument("--m-max", dest="m_max", type=int, default=3)
    p.add_argument("--tol-zero", dest="tol_zero", type=float, default=1e-10)
    p.add_argument("--tol-nonzero", dest="tol_nonzero", type=float, default=1e-6)
    p.add_argument("--out", type=Path, default=None, help="report JSON path")
    p.set_defaults(func=_cmd_check_alias)

    p = sub.add_parser("sample", help="simulate acquisition from a config JSON")
    p.add_argument("--config", type=Path, required=True,
                   help="JSON with kernel, signal, sampling sections")
    p.add_argument("--snr-db", dest="snr_db", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("spectrum", help="samples CSV -> demodulated measurements CSV")
    p.add_argument("--samples", type=Path, required=True)
    p.add_argument("--floor", type=float, default=1e-8)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("estimate", help="measurements CSV -> pulse estimates JSON")
    p.add_argument("--spectrum", type=Path, required=True)
    p.add_argument("-L", "--num-pulses", dest="num_pulses", type=int, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=_cmd_estimate)

    for kind, runner, default_cls in (
        ("dirac-experiment", run_dirac_experiment, ExperimentConfig.dirac_default),
        ("blob-experiment", run_blob_experiment, ExperimentConfig.blob_default),
    ):
        p = sub.add_parser(kind, help=f"run the {kind.replace('-', ' ')}")
        p.add_argument("--config", type=Path, default=None,
                       help="JSON config; CLI flags override its fields")
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out-dir", dest="out_dir", type=Path, default=Path("."))
        p.add_argument("--num-pulses", dest="num_pulses", type=int, default=None)
        p.add_argument("--k-halfwidth", dest="k_halfwidth", type=int, default=None)
        p.add_argument("--snr-db", dest="snr_db", type=float, default=None)
        p.add_argument("--sampling-factor", dest="sampling_factor", type=int,
                       default=None)
        p.add_argument("--kernel-family", dest="kernel_family",
                       choices=["separable", "nonseparable"], default=None)
        p.add_argument("--r1", type=int, default=None)
        p.add_argument("--r2", type=int, default=None)
        p.add_argument("--sigma", type=float, default=None)
        p.add_argument("--oversample", type=int, default=None)
        p.set_defaults(
            func=lambda a, r=runner, c=default_cls: _cmd_experiment(a, r, c)
        )

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DegenerateSignalError as exc:
        print(f"error (numerical degeneracy): {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ConfigurationError as exc:
        print(f"error (configuration): {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error (configuration): {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
