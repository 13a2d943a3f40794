"""Exception types shared across the package."""


class ZuecapError(Exception):
    """Base class for errors raised by this package."""


class FormatError(ZuecapError, ValueError):
    """A text input (graph, channel, or codebook file) is malformed."""


class CapExceededError(ZuecapError, ValueError):
    """An operation would exceed its configured size cap."""


class ConvergenceError(ZuecapError, RuntimeError):
    """An iterative solver hit its iteration cap before reaching tolerance."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual
