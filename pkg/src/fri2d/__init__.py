"""2-D finite-rate-of-innovation sampling toolkit.

Closed-form compactly supported sampling kernels (separable modulated-spline
and nonseparable rotated-window families), simulated kernel-based acquisition
of 2-D pulse streams, demodulation to weighted-exponential spectral
measurements, and high-resolution recovery of pulse locations and amplitudes.
"""

from .errors import (
    ConfigurationError,
    DegenerateSignalError,
    Fri2dError,
    InsufficientDataError,
    SingularityError,
)
from .kernels import (
    AliasReport,
    ExponentialReproducer,
    NonseparableKernel,
    ReproductionResult,
    SeparableSmsKernel,
    SpectralGrid,
    alias_check,
    bspline,
    fourier_consistency,
    reproduce_exponential,
)
from .signals import (
    Dirac,
    FriSignal,
    Gaussian,
    SampleSet,
    SamplingConfig,
    acquire,
    add_awgn,
    pulse_ctft,
    sampling_window,
)
from .spectral import SwceMeasurements, demodulate, dtft_on_grid
from .estimation import (
    EstimationResult,
    amplitudes_ls,
    estimate_2d,
    matrix_pencil_1d,
    pair_locations,
    prony_oracle,
    wrap_location,
)
from .experiments import (
    ExperimentConfig,
    ExperimentReport,
    emit_kernel,
    run_blob_experiment,
    run_dirac_experiment,
    run_experiment,
)

__version__ = "0.1.0"

__all__ = [
    "AliasReport",
    "ConfigurationError",
    "DegenerateSignalError",
    "Dirac",
    "EstimationResult",
    "ExperimentConfig",
    "ExperimentReport",
    "ExponentialReproducer",
    "Fri2dError",
    "FriSignal",
    "Gaussian",
    "InsufficientDataError",
    "NonseparableKernel",
    "ReproductionResult",
    "SampleSet",
    "SamplingConfig",
    "SeparableSmsKernel",
    "SingularityError",
    "SpectralGrid",
    "SwceMeasurements",
    "acquire",
    "add_awgn",
    "alias_check",
    "amplitudes_ls",
    "bspline",
    "demodulate",
    "dtft_on_grid",
    "emit_kernel",
    "estimate_2d",
    "fourier_consistency",
    "matrix_pencil_1d",
    "pair_locations",
    "prony_oracle",
    "pulse_ctft",
    "reproduce_exponential",
    "run_blob_experiment",
    "run_dirac_experiment",
    "run_experiment",
    "sampling_window",
    "wrap_location",
]
