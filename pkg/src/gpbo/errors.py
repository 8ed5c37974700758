"""Exception hierarchy shared across the package."""


class GpboError(Exception):
    """Base class for all package errors."""


class BoundsError(GpboError, ValueError):
    """A value lies outside its dimension's bounds or option set."""

    def __init__(self, message: str, dimension: int | None = None):
        super().__init__(message)
        self.dimension = dimension


class ShapeError(GpboError, ValueError):
    """A vector's length does not match the expected dimensionality."""


class ContractError(GpboError, ValueError):
    """An argument violates a documented precondition."""


class DataError(GpboError):
    """Observed data is unusable (non-finite scores, empty inputs)."""

    def __init__(self, message: str, iteration: int | None = None):
        super().__init__(message)
        self.iteration = iteration
        self.partial_trace = None


class NumericalError(GpboError):
    """A linear-algebra routine failed beyond recoverable jitter."""


class UnsupportedOperationError(GpboError):
    """The operation is undefined for this input (e.g. grid over an
    infinite space)."""


class TransportError(GpboError):
    """A message channel failed or closed while a request was in flight."""

    def __init__(self, message: str):
        super().__init__(message)
        self.partial_trace = None


class ChannelClosed(TransportError):
    """Receive on a channel that has been closed."""


class ProtocolError(GpboError):
    """The peer replied with an error or violated the echo contract."""
