"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the admissible parameter region (bad k, gamma, n, ...)."""


class ExponentUnderflowError(ArithmeticError):
    """An operator application produced a radial power rho**a with a <= 0."""


class DivergenceError(ArithmeticError):
    """An inner-product integral does not converge."""


class ConvergenceError(RuntimeError):
    """An iterative numerical procedure failed to converge."""


class ZeroFunctionError(ValueError):
    """Normalization requested for the zero function."""


class SingularTransformError(ArithmeticError):
    """The component mixing matrix is numerically singular."""
