"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input lies outside the region where a formula is physical or defined."""


class KinkError(DomainError):
    """Derivative requested at the non-differentiable point of the rectangular overlap."""


class ConvergenceError(ArithmeticError):
    """A finite-difference or quadrature refinement failed to settle."""


class BoundDivergenceError(ArithmeticError):
    """The Cramer-Rao bound is infinite (zero sensitivity or zero information)."""
