"""Exception types shared across the library."""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class ConvergenceError(RuntimeError):
    """An iterative solver failed to converge within its iteration budget."""


class ToleranceError(RuntimeError):
    """A quadrature failed to meet its tolerance after maximal refinement."""


class TableBoundError(ValueError):
    """A query exceeded the bound of the divisor table it was given."""
