"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI: ConfigurationError (and subclasses) -> 2,
DegenerateSignalError -> 3.
"""


class Fri2dError(Exception):
    """Base class for all package errors."""


class ConfigurationError(Fri2dError):
    """Inconsistent or inadmissible parameters (precondition violations)."""


class InsufficientDataError(ConfigurationError):
    """Not enough measurements for the requested model order."""


class SingularityError(ConfigurationError):
    """Spectral division would amplify noise beyond the configured floor."""

    def __init__(self, message, k1=None, k2=None):
        super().__init__(message)
        self.k1 = k1
        self.k2 = k2


class DegenerateSignalError(Fri2dError):
    """Numerical rank collapse: the data does not support the model order."""
