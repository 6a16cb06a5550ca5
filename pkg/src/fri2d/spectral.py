"""From spatial samples to weighted-exponential spectral measurements.

The sample DTFT, evaluated on the measurement lattice and scaled by the
sample-cell area, equals the product of the signal spectrum and the kernel's
transform there (the kernel's alias zeros remove every other spectral copy).
Dividing out the kernel and pulse responses leaves a pure sum of weighted
complex exponentials in the pulse locations, ready for harmonic retrieval.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, SingularityError
from .signals import pulse_ctft

__all__ = ["SwceMeasurements", "dtft_on_grid", "demodulate"]


@dataclass(frozen=True, eq=False)
class SwceMeasurements:
    """Complex measurements P[k1, k2] on a spectral grid."""

    values: np.ndarray = field(repr=False)
    grid: "SpectralGrid"

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        want = (self.grid.size1, self.grid.size2)
        if vals.shape != want:
            raise ConfigurationError(
                f"measurement matrix shape {vals.shape}, expected {want}"
            )
        if not np.all(np.isfinite(vals)):
            raise ConfigurationError("measurements contain non-finite entries")
        object.__setattr__(self, "values", vals)


def dtft_on_grid(samples, grid):
    """Sample DTFT on the measurement lattice, scaled by tsx*tsy.

    Returns F[k1, k2] = tsx*tsy * sum_n psi[n1, n2] *
    exp(-j*(k1*omega0x*n1*tsx + k2*omega0y*n2*tsy)).
    """
    cfg = samples.config
    xs, ys = cfg.positions()
    e1 = np.exp(-1j * np.outer(grid.k1 * grid.omega0x, xs))
    e2 = np.exp(-1j * np.outer(grid.k2 * grid.omega0y, ys))
    return cfg.tsx * cfg.tsy * (e1 @ samples.values @ e2.T)


def demodulate(fhat, kernel, shape, grid=None, floor=1e-8):
    """Divide the on-lattice spectrum by the kernel and pulse responses.

    The divisor is the true transform of the spatial kernel (the kernel's
    frequency form times its spectral_scale) times the pulse spectrum. Any
    divisor entry whose magnitude falls below floor times the largest one
    raises SingularityError naming the offending lattice index.
    """
    if grid is None:
        grid = kernel.grid
    fhat = np.asarray(fhat, dtype=complex)
    want = (grid.size1, grid.size2)
    if fhat.shape != want:
        raise ConfigurationError(f"fhat shape {fhat.shape}, expected {want}")
    wx, wy = grid.omega_mesh()
    divisor = np.asarray(kernel.ctft(wx, wy), dtype=complex) * pulse_ctft(shape, wx, wy)
    mags = np.abs(divisor)
    cutoff = floor * mags.max()
    if np.any(mags < cutoff):
        i1, i2 = np.unravel_index(int(np.argmin(mags)), mags.shape)
        raise SingularityError(
            f"spectral divisor vanishes at (k1={grid.k1[i1]}, k2={grid.k2[i2]}): "
            f"|G*H| = {mags[i1, i2]:.3e} < {cutoff:.3e}",
            k1=int(grid.k1[i1]),
            k2=int(grid.k2[i2]),
        )
    return SwceMeasurements(values=fhat / divisor, grid=grid)
