"""Exception types shared across the package."""


class BVortexError(Exception):
    """Base class for all package errors."""


class CapabilityError(BVortexError):
    """An operation was requested for a domain kind that does not support it."""


class GeometryError(BVortexError):
    """Invalid geometric configuration (overlapping windows, corner parameter, ...)."""


class ConvergenceError(BVortexError):
    """An iterative solve failed to reach its tolerance.

    Carries the residual history when available.
    """

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = list(history) if history is not None else []


class QuadratureError(BVortexError):
    """A quadrature did not converge to the requested tolerance."""


class ConfigError(BVortexError):
    """Malformed or unknown configuration input."""
