"""Exception types raised by the library."""


class DimensionError(ValueError):
    """Operands live in ambient spaces of different dimension."""


class InfeasibleError(ValueError):
    """A requested construction has no solution (e.g. an impossible gap)."""


class InvariantError(ArithmeticError):
    """Two computations that must agree in exact arithmetic disagree beyond
    their tolerance."""
