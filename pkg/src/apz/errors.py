"""Exception types shared by the numerical modules."""


class DomainError(ValueError):
    """Argument outside the domain where the function is defined."""


class PoleError(DomainError):
    """Evaluation at a pole of a meromorphic function."""


class SpecError(ValueError):
    """A product specification violates its invariants."""


class DivergenceError(SpecError):
    """The product diverges (its log-series has a nonzero 1/n coefficient)."""


class SequenceDataError(ValueError):
    """A Moebius transform produced a non-integer exponent."""


class ConvergenceError(ArithmeticError):
    """A series or iteration did not reach the requested accuracy."""


class RootFindingError(ConvergenceError):
    """Simultaneous root iteration failed to converge."""

    def __init__(self, message, residuals=None, iterations=None):
        super().__init__(message)
        self.residuals = residuals
        self.iterations = iterations


class ConsistencyError(ArithmeticError):
    """Two independent evaluation paths disagree beyond tolerance."""
