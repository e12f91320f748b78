"""Exception types shared across the package."""


class ShrunkClustError(Exception):
    """Base class for all package errors."""


class DimensionError(ShrunkClustError, ValueError):
    """Shapes of the inputs are inconsistent with the operation."""


class ParameterError(ShrunkClustError, ValueError):
    """A parameter is outside its admissible range."""


class DataError(ShrunkClustError, ValueError):
    """Input data could not be parsed or fails a validity check."""


class NumericalError(ShrunkClustError, RuntimeError):
    """A factorization or solve broke down (e.g. loss of definiteness)."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ConvergenceError(ShrunkClustError, RuntimeError):
    """An iterative method exhausted its budget before reaching tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
