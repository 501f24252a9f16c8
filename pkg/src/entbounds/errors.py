"""Exception hierarchy shared by all modules."""


class EntBoundsError(Exception):
    """Base class for every error raised by the package."""


class ParameterError(EntBoundsError, ValueError):
    """A distribution or function parameter is outside its valid range."""


class ValidationError(EntBoundsError, ValueError):
    """Input data (pmf, joint table, file) is malformed."""


class DegenerateConditionError(ValidationError):
    """Conditioning on an observation of zero probability."""


class OrderError(ParameterError):
    """Invalid entropy order (alpha <= 0 or too close to 1)."""


class DomainError(ParameterError):
    """Argument lies in a region where a closed form is undefined."""


class UnsupportedVariantError(EntBoundsError, ValueError):
    """Operation requested for a variant that does not support it."""


class ValidityError(EntBoundsError, ValueError):
    """A bound was requested outside the range of orders where it exists.

    The ``threshold`` attribute carries the critical order, so callers can
    report the admissibility condition (e.g. ``alpha > 1/3``).
    """

    def __init__(self, message, threshold=None):
        super().__init__(message)
        self.threshold = threshold


class AccuracyError(EntBoundsError, ArithmeticError):
    """A numerical procedure failed to reach its requested accuracy."""


class NormalizationError(AccuracyError):
    """A density handed to quadrature does not integrate to one."""


class SearchError(EntBoundsError, RuntimeError):
    """A root/threshold search could not bracket its target."""
