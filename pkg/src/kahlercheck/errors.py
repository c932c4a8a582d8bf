"""Exception types raised by the geometry and verification layers."""


class KahlerCheckError(Exception):
    """Base class for all library errors."""


class ChartDomainError(KahlerCheckError, ValueError):
    """A point lies outside (or too close to the edge of) the chart domain."""


class DegenerateGeometryError(KahlerCheckError, ArithmeticError):
    """Singular metric, vanishing gradient, rank-deficient Jacobian or a
    Gram-Schmidt pivot below its guard."""


class ParameterError(KahlerCheckError, ValueError):
    """Geometry parameters outside their admissible range."""


class QuadratureError(KahlerCheckError, RuntimeError):
    """A quadrature run failed to reach the requested tolerance."""

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = list(history or [])
