"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration file, key, or value."""


class NumericalError(RuntimeError):
    """A numerical operation failed to meet its accuracy contract."""


class SingularSystemError(NumericalError):
    """Linear system singular or too ill-conditioned to trust.

    Carries the Laplace node at which the failure occurred.
    """

    def __init__(self, message, s=None):
        super().__init__(message)
        self.s = s


class InversionError(NumericalError):
    """Inverse Laplace transform failed (bad node value or stalled series)."""

    def __init__(self, message, s=None, residual=None):
        super().__init__(message)
        self.s = s
        self.residual = residual


class RegimeError(ValueError):
    """Closed-form expression requested outside its coupling regime."""
