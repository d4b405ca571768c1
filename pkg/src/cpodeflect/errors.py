"""Exception types shared across the package."""


class CpoError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(CpoError, ValueError):
    """A physical parameter violates its domain (negative rate, w_eq out of range, ...)."""


class ConfigurationError(CpoError, ValueError):
    """A config value, numeric guard, or grid constraint is violated before a run starts."""


class InvalidRegimeError(CpoError, ValueError):
    """Inputs fall outside the regime where the requested quantity is defined (e.g. Delta = 0)."""


class UnderResolvedError(CpoError, ValueError):
    """A feature is too narrow for the grid it is sampled on."""


class SingularDenominatorError(CpoError, ZeroDivisionError):
    """A closed-form denominator is (numerically) zero."""


class SingularResponseError(CpoError, ArithmeticError):
    """The steady-state linear system is singular or hopelessly ill-conditioned."""


class NumericalDivergenceError(CpoError, ArithmeticError):
    """An integration produced non-finite values."""


class BoundaryContaminationError(CpoError, ArithmeticError):
    """Field magnitude at the periodic domain edges exceeded the leak guard."""


class NoDipError(CpoError, ValueError):
    """The probe spectrum has no interior dip to measure."""


class UndefinedCentroidError(CpoError, ValueError):
    """Beam diagnostics requested for a field with zero norm."""


class InvalidEvolutionError(CpoError, ValueError):
    """Evolution parameters are inconsistent (non-positive mass, negative duration, ...)."""
