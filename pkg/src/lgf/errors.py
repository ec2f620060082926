"""Exception hierarchy shared across the package.

Each class maps to one process exit code in the command line interface:
validation errors exit 2, resource errors 3, insufficient data 4 and
verification failures 5. Library callers catch the classes directly.
"""

from __future__ import annotations


class LgfError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ValidationError(LgfError):
    """Bad argument or unusable input (wrong dimension, malformed file, ...)."""

    exit_code = 2


class SingularPointError(ValidationError):
    """A recurrence cannot be iterated because its leading coefficient
    vanishes at a needed index."""

    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(message or f"leading coefficient vanishes at n={index}")


class ResourceError(LgfError):
    """A configured memory or size budget would be exceeded."""

    exit_code = 3


class PrecisionLossError(ResourceError):
    """The working precision cannot support the requested output accuracy
    (ill-conditioned fit, or results at two precisions disagree)."""


class InsufficientDataError(LgfError):
    """Not enough data points for the requested operation."""

    exit_code = 4


class NoApplicableRecurrenceError(InsufficientDataError):
    """No guessed recurrence can produce a required value: every candidate
    has a vanishing leading coefficient or unmet dependencies there."""

    def __init__(self, point, message: str | None = None):
        self.point = point
        super().__init__(message or f"no recurrence applies at {point}")


class VerificationError(LgfError):
    """An exact check that must hold failed (nonzero residual, certificate
    mismatch, extension contradicting direct counts)."""

    exit_code = 5


class GuessInconsistencyError(VerificationError):
    """Extended values contradict directly counted values on the overlap."""
