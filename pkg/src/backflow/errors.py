"""Exception types shared across the package."""

__all__ = [
    "BackflowError",
    "SpecViolation",
    "QuadratureFailure",
    "SingularPoint",
    "ZeroLeadingDenominator",
    "DegreeZero",
    "TruncationFailure",
    "RootExtractionFailure",
]


class BackflowError(Exception):
    """Base class for all package-specific failures."""


class SpecViolation(BackflowError):
    """A wave-function specification breaks one of its invariants."""


class QuadratureFailure(BackflowError):
    """Numerical integration could not reach the requested tolerance."""


class SingularPoint(BackflowError):
    """Evaluation requested at a point where the quantity is undefined."""


class ZeroLeadingDenominator(BackflowError):
    """Series division by a series whose constant term is numerically zero."""


class DegreeZero(BackflowError):
    """Root finding requested for a constant (or zero) polynomial."""


class TruncationFailure(BackflowError):
    """Coefficient tail failed to decay below threshold within the cap."""


class RootExtractionFailure(BackflowError):
    """Polynomial factoring left residuals above tolerance."""
