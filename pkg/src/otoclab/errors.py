"""Exception types shared across the package."""


class OtocLabError(Exception):
    """Base class for all errors raised by otoclab."""


class InvalidDimensionError(OtocLabError, ValueError):
    pass


class InvalidArgumentError(OtocLabError, ValueError):
    pass


class ResourceLimitError(OtocLabError):
    pass


class DegenerateKernelError(OtocLabError, ValueError):
    """All smoothing weights underflowed; the coarse-grained kernel is empty."""


class NoResonanceError(OtocLabError):
    """No eigenvalue lies strictly inside the unit shell."""


class InvalidWindowError(OtocLabError, ValueError):
    pass


class NoWindowError(OtocLabError):
    pass


class ConfigError(OtocLabError, ValueError):
    pass


class NumericFailure(OtocLabError, RuntimeError):
    """An iterative numerical routine failed to converge."""

    def __init__(self, message, iterations=None):
        super().__init__(message)
        self.iterations = iterations
