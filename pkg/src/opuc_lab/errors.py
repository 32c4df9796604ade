"""Exception hierarchy shared by all opuc_lab modules."""


class OpucError(Exception):
    """Base class for every error raised by opuc_lab."""


class InvalidContextError(OpucError, ValueError):
    """A polynomial does not fit the degree context it was given."""


class AliasingError(OpucError, ValueError):
    """A grid is too coarse for the bandwidth of the data placed on it."""


class DivergentSeriesError(OpucError, ValueError):
    """A fractional power series was requested for a non-summable exponent."""


class DegenerateMeasureError(OpucError):
    """The moment matrix of a measure stopped being positive definite.

    ``index`` is the recursion step at which |gamma_j| reached 1.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ConvergenceError(OpucError):
    """An iterative solver ran out of iterations; ``trace`` holds diagnostics."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class PreconditionError(OpucError, ValueError):
    """Inputs violate a documented precondition of an operation."""


class ConstructionError(OpucError):
    """An extremal construction produced an object that violates its invariants."""
