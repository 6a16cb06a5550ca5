"""2-D pulse-stream signals, simulated kernel-based acquisition, and noise.

A signal is a finite sum of scaled, shifted copies of a known pulse (Dirac or
truncated Gaussian). Acquisition convolves the signal with a sampling kernel
and reads the result on a uniform lattice. For Diracs the samples are exact
superpositions of shifted kernel values; for Gaussians the convolution is
carried out on a dense grid (or, where available, in closed form).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy.signal import fftconvolve
from scipy.special import erf

from .errors import ConfigurationError
from .kernels import NonseparableKernel

__all__ = [
    "Dirac",
    "Gaussian",
    "PulseShape",
    "pulse_ctft",
    "FriSignal",
    "SamplingConfig",
    "SampleSet",
    "sampling_window",
    "acquire",
    "add_awgn",
]


@dataclass(frozen=True)
class Dirac:
    """Point pulse; flat unit spectrum."""

    @property
    def support_halfwidth(self):
        return 0.0

    def ctft(self, omega_x, omega_y):
        wx = np.asarray(omega_x, dtype=float)
        out = np.ones_like(wx)
        return out if out.ndim else 1.0


@dataclass(frozen=True)
class Gaussian:
    """Unit-peak isotropic Gaussian, truncated to a square in space.

    sigma is the standard deviation; truncation_halfwidth must be at least
    4*sigma so the discarded tail energy is below 1e-7 of the total.
    """

    sigma: float
    truncation_halfwidth: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ConfigurationError(f"sigma must be positive, got {self.sigma}")
        if self.truncation_halfwidth < 4.0 * self.sigma:
            raise ConfigurationError(
                f"truncation_halfwidth {self.truncation_halfwidth} below the "
                f"minimum 4*sigma = {4.0 * self.sigma}"
            )

    @property
    def support_halfwidth(self):
        return self.truncation_halfwidth

    def spatial(self, x, y):
        """Truncated pulse values."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        w = self.truncation_halfwidth
        inside = (np.abs(x) <= w) & (np.abs(y) <= w)
        vals = np.exp(-(x * x + y * y) / (2.0 * self.sigma ** 2))
        return np.where(inside, vals, 0.0)

    def ctft(self, omega_x, omega_y):
        """Closed-form spectrum of the untruncated pulse: 2*pi*sigma^2 *
        exp(-sigma^2*(wx^2+wy^2)/2). The truncation mismatch is bounded by
        the 4*sigma constructor constraint."""
        wx = np.asarray(omega_x, dtype=float)
        wy = np.asarray(omega_y, dtype=float)
        s2 = self.sigma ** 2
        out = 2.0 * math.pi * s2 * np.exp(-0.5 * s2 * (wx * wx + wy * wy))
        return out if out.ndim else float(out)


PulseShape = Union[Dirac, Gaussian]


def pulse_ctft(shape, omega_x, omega_y):
    """2-D continuous Fourier transform of the pulse shape."""
    return shape.ctft(omega_x, omega_y)


@dataclass(frozen=True, eq=False)
class FriSignal:
    """Finite pulse stream: amplitudes gammas at locations (xs, ys)."""

    gammas: np.ndarray = field(repr=False)
    xs: np.ndarray = field(repr=False)
    ys: np.ndarray = field(repr=False)
    shape: PulseShape = Dirac()

    def __post_init__(self):
        gammas = np.atleast_1d(np.asarray(self.gammas, dtype=complex))
        xs = np.atleast_1d(np.asarray(self.xs, dtype=float))
        ys = np.atleast_1d(np.asarray(self.ys, dtype=float))
        if not (gammas.size == xs.size == ys.size):
            raise ConfigurationError("gammas, xs, ys must have equal lengths")
        if gammas.size < 1:
            raise ConfigurationError("a signal needs at least one pulse")
        locs = set(zip(xs.tolist(), ys.tolist()))
        if len(locs) != xs.size:
            raise ConfigurationError("pulse locations must be pairwise distinct")
        object.__setattr__(self, "gammas", gammas)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @classmethod
    def from_pulses(cls, pulses, shape=Dirac()):
        """pulses: iterable of (gamma, x, y)."""
        g, x, y = zip(*pulses)
        return cls(np.asarray(g), np.asarray(x), np.asarray(y), shape)

    @property
    def num_pulses(self):
        return self.gammas.size

    @property
    def pulses(self):
        return [
            (complex(g), float(x), float(y))
            for g, x, y in zip(self.gammas, self.xs, self.ys)
        ]

    @property
    def is_real(self):
        return bool(np.all(self.gammas.imag == 0.0))


@dataclass(frozen=True)
class SamplingConfig:
    """Uniform sample lattice: rates (rad/len) and inclusive index window."""

    omega_sx: float
    omega_sy: float
    n1_min: int
    n1_max: int
    n2_min: int
    n2_max: int

    def __post_init__(self):
        if not (self.omega_sx > 0 and self.omega_sy > 0):
            raise ConfigurationError("sampling rates must be positive")
        if self.n1_min > self.n1_max or self.n2_min > self.n2_max:
            raise ConfigurationError("empty sample window")

    @property
    def tsx(self):
        return 2.0 * math.pi / self.omega_sx

    @property
    def tsy(self):
        return 2.0 * math.pi / self.omega_sy

    @property
    def n1(self):
        return np.arange(self.n1_min, self.n1_max + 1)

    @property
    def n2(self):
        return np.arange(self.n2_min, self.n2_max + 1)

    @property
    def shape(self):
        return (self.n1_max - self.n1_min + 1, self.n2_max - self.n2_min + 1)

    def positions(self):
        return self.n1 * self.tsx, self.n2 * self.tsy


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Sample values on the lattice; values[i1, i2] sits at index n1_min+i1, n2_min+i2."""

    values: np.ndarray = field(repr=False)
    config: SamplingConfig

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.shape != self.config.shape:
            raise ConfigurationError(
                f"sample array shape {vals.shape} does not match the window "
                f"{self.config.shape}"
            )
        object.__setattr__(self, "values", vals)

    @property
    def is_real(self):
        return not np.iscomplexobj(self.values)


def sampling_window(kernel, shape, x_extent, y_extent, omega_sx, omega_sy):
    """Smallest index window whose lattice covers the filtered signal's support.

    x_extent/y_extent bound the pulse locations; the window is widened by the
    pulse and kernel supports on each side.
    """
    tsx = 2.0 * math.pi / omega_sx
    tsy = 2.0 * math.pi / omega_sy
    (kx_lo, kx_hi), (ky_lo, ky_hi) = kernel.support
    w = shape.support_halfwidth
    lo_x = x_extent[0] - w + kx_lo
    hi_x = x_extent[1] + w + kx_hi
    lo_y = y_extent[0] - w + ky_lo
    hi_y = y_extent[1] + w + ky_hi
    return SamplingConfig(
        omega_sx=omega_sx,
        omega_sy=omega_sy,
        n1_min=math.floor(lo_x / tsx),
        n1_max=math.ceil(hi_x / tsx),
        n2_min=math.floor(lo_y / tsy),
        n2_max=math.ceil(hi_y / tsy),
    )


def _validate_rates(kernel, config):
    g = kernel.grid
    slack = 1.0 - 1e-12
    if config.omega_sx < slack * g.size1 * g.omega0x:
        raise ConfigurationError(
            f"omega_sx = {config.omega_sx} below |K1|*omega0x = "
            f"{g.size1 * g.omega0x}"
        )
    if config.omega_sy < slack * g.size2 * g.omega0y:
        raise ConfigurationError(
            f"omega_sy = {config.omega_sy} below |K2|*omega0y = "
            f"{g.size2 * g.omega0y}"
        )


def _validate_coverage(signal, kernel, config):
    (kx_lo, kx_hi), (ky_lo, ky_hi) = kernel.support
    w = signal.shape.support_halfwidth
    lo_x = signal.xs.min() - w + kx_lo
    hi_x = signal.xs.max() + w + kx_hi
    lo_y = signal.ys.min() - w + ky_lo
    hi_y = signal.ys.max() + w + ky_hi
    eps = 1e-9
    margins = {
        "x low": config.n1_min * config.tsx - lo_x,
        "x high": hi_x - config.n1_max * config.tsx,
        "y low": config.n2_min * config.tsy - lo_y,
        "y high": hi_y - config.n2_max * config.tsy,
    }
    bad = {side: m for side, m in margins.items() if m > eps}
    if bad:
        detail = ", ".join(f"{side} uncovered by {m:.6g}" for side, m in bad.items())
        raise ConfigurationError(f"sample window does not cover the signal: {detail}")


def acquire(signal, kernel, config, oversample=16, method="auto"):
    """Filter the signal with the kernel and sample on the configured lattice.

    Dirac pulses use the kernel's spatial closed form directly. Gaussian
    pulses use a dense-grid FFT convolution at `oversample` points per sample
    interval by default; method="exact" switches to a closed-form erf
    evaluation (nonseparable kernel with omega0x == omega0y only, and the
    pulse must be truncated at >= 6*sigma so treating it as untruncated is
    harmless).
    """
    _validate_rates(kernel, config)
    _validate_coverage(signal, kernel, config)
    if isinstance(signal.shape, Dirac):
        values = _acquire_dirac(signal, kernel, config)
    elif method == "exact":
        values = _acquire_gaussian_exact(signal, kernel, config)
    elif method in ("auto", "fft"):
        values = _acquire_gaussian_fft(signal, kernel, config, oversample)
    else:
        raise ConfigurationError(f"unknown acquisition method {method!r}")
    if signal.is_real and kernel.is_real_valued:
        values = values.real
    return SampleSet(values=values, config=config)


def _acquire_dirac(signal, kernel, config):
    xs, ys = config.positions()
    out = np.zeros(config.shape, dtype=complex)
    for g, px, py in zip(signal.gammas, signal.xs, signal.ys):
        out += g * kernel.spatial_grid(xs - px, ys - py)
    return out


def _acquire_gaussian_fft(signal, kernel, config, oversample):
    if oversample < 2:
        raise ConfigurationError(f"oversample must be >= 2, got {oversample}")
    shape = signal.shape
    # the grid must resolve the pulse itself, not just the sample lattice;
    # floor the density at six nodes per sigma or the pulse spectrum aliases
    ov_x = max(int(oversample), math.ceil(6.0 * config.tsx / shape.sigma))
    ov_y = max(int(oversample), math.ceil(6.0 * config.tsy / shape.sigma))
    dx = config.tsx / ov_x
    dy = config.tsy / ov_y
    w = shape.support_halfwidth

    # pulse-field grid: covers all pulses plus the truncation width, nodes on
    # multiples of (dx, dy) so the convolution output lands on the sample lattice
    fx_lo = math.floor((signal.xs.min() - w) / dx) - 1
    fx_hi = math.ceil((signal.xs.max() + w) / dx) + 1
    fy_lo = math.floor((signal.ys.min() - w) / dy) - 1
    fy_hi = math.ceil((signal.ys.max() + w) / dy) + 1
    fx = np.arange(fx_lo, fx_hi + 1) * dx
    fy = np.arange(fy_lo, fy_hi + 1) * dy
    FX, FY = np.meshgrid(fx, fy, indexing="ij")
    field_vals = np.zeros(FX.shape, dtype=complex)
    for g, px, py in zip(signal.gammas, signal.xs, signal.ys):
        field_vals += g * shape.spatial(FX - px, FY - py)

    (kx_lo, kx_hi), (ky_lo, ky_hi) = kernel.support
    gx_n = math.ceil(max(abs(kx_lo), kx_hi) / dx)
    gy_n = math.ceil(max(abs(ky_lo), ky_hi) / dy)
    gx = np.arange(-gx_n, gx_n + 1) * dx
    gy = np.arange(-gy_n, gy_n + 1) * dy
    kern_vals = kernel.spatial_grid(gx, gy)

    real_path = signal.is_real and kernel.is_real_valued
    if real_path:
        field_vals = field_vals.real
        kern_vals = kern_vals.real
    conv = fftconvolve(field_vals, kern_vals, mode="full") * (dx * dy)

    # output node k corresponds to position (fx_lo - gx_n + k) * dx
    out = np.zeros(config.shape, dtype=conv.dtype)
    i1 = config.n1 * ov_x - (fx_lo - gx_n)
    i2 = config.n2 * ov_y - (fy_lo - gy_n)
    ok1 = (i1 >= 0) & (i1 < conv.shape[0])
    ok2 = (i2 >= 0) & (i2 < conv.shape[1])
    out[np.ix_(ok1, ok2)] = conv[np.ix_(i1[ok1], i2[ok2])]
    return out.astype(complex)


def _acquire_gaussian_exact(signal, kernel, config):
    """Closed-form Gaussian/kernel convolution in the 45-degree-rotated frame.

    Valid for the nonseparable kernel with equal base frequencies; the pulse
    is treated as untruncated, so demand truncation >= 6*sigma.
    """
    shape = signal.shape
    if not isinstance(kernel, NonseparableKernel):
        raise ConfigurationError("exact acquisition needs the nonseparable kernel")
    g = kernel.grid
    if not math.isclose(g.omega0x, g.omega0y, rel_tol=1e-12):
        raise ConfigurationError("exact acquisition needs omega0x == omega0y")
    if shape.truncation_halfwidth < 6.0 * shape.sigma:
        raise ConfigurationError(
            "exact acquisition treats the pulse as untruncated; use "
            "truncation_halfwidth >= 6*sigma"
        )
    omega0 = g.omega0x
    sigma = shape.sigma
    half = g.t0x / math.sqrt(2.0)  # rotated box halfwidth

    xs, ys = config.positions()
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    out = np.zeros(config.shape, dtype=complex)

    # rotated modulation frequencies kappa = omega0*(k1 +/- k2)/sqrt(2); the
    # coefficient matrix q re-indexed by the sum/difference integers
    s1 = np.arange(g.k1_min + g.k2_min, g.k1_max + g.k2_max + 1)
    s2 = np.arange(g.k2_min - g.k1_max, g.k2_max - g.k1_min + 1)
    Q = np.zeros((s1.size, s2.size), dtype=complex)
    for a, k1 in enumerate(g.k1):
        for b, k2 in enumerate(g.k2):
            Q[(k1 + k2) - s1[0], (k2 - k1) - s2[0]] += kernel.q[a, b]
    kap1 = omega0 * s1 / math.sqrt(2.0)
    kap2 = omega0 * s2 / math.sqrt(2.0)

    def axis_factors(t, kap):
        """(2pi*sigma^2)^(1/2)-scaled integral of exp(-u^2/2sigma^2 - j*kap*u)
        over [t-half, t+half], times exp(j*kap*t); shape (npts, nkap)."""
        t = t[:, None]
        kap = kap[None, :]
        z_hi = (t + half + 1j * kap * sigma ** 2) / (sigma * math.sqrt(2.0))
        z_lo = (t - half + 1j * kap * sigma ** 2) / (sigma * math.sqrt(2.0))
        core = sigma * math.sqrt(math.pi / 2.0) * (erf(z_hi) - erf(z_lo))
        return np.exp(-0.5 * (kap * sigma) ** 2) * np.exp(1j * kap * t) * core

    for gam, px, py in zip(signal.gammas, signal.xs, signal.ys):
        wx = X - px
        wy = Y - py
        t1 = ((wx + wy) / math.sqrt(2.0)).ravel()
        t2 = ((wy - wx) / math.sqrt(2.0)).ravel()
        c1 = axis_factors(t1, kap1)
        c2 = axis_factors(t2, kap2)
        contrib = np.einsum("ns,st,nt->n", c1, Q, c2)
        out += gam * (omega0 ** 2 / 8.0) * contrib.reshape(config.shape)
    return out


def add_awgn(samples, snr_db, seed):
    """Add white Gaussian noise at the requested SNR (per-sample average power
    over the full window). Real noise for real samples, circular complex noise
    otherwise; deterministic for a fixed seed."""
    vals = samples.values
    power = float(np.mean(np.abs(vals) ** 2))
    if power == 0.0:
        raise ConfigurationError("cannot set an SNR on all-zero samples")
    if np.isinf(snr_db):
        return SampleSet(values=vals.copy(), config=samples.config)
    var = power * 10.0 ** (-snr_db / 10.0)
    rng = np.random.default_rng(seed)
    if samples.is_real:
        noise = rng.normal(0.0, math.sqrt(var), size=vals.shape)
    else:
        noise = rng.normal(0.0, math.sqrt(var / 2.0), size=vals.shape) + 1j * rng.normal(
            0.0, math.sqrt(var / 2.0), size=vals.shape
        )
    return SampleSet(values=vals + noise, config=samples.config)
