"""Exception hierarchy shared by every module.

The CLI maps these onto process exit codes, so each class carries one.
"""

from __future__ import annotations


class QHarmonicError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class ValidationError(QHarmonicError, ValueError):
    """A parameter is outside the domain where the operation is defined."""

    exit_code = 1


class DomainError(ValidationError):
    pass


class PoleError(ValidationError):
    pass


class ExactModeUnsupported(ValidationError):
    """Raised when an exact result was requested but only a limit exists."""


class NonFiniteElementError(ValidationError):
    """The invariant integral was asked for on a non-finite element."""


class NonConvergenceError(QHarmonicError, ArithmeticError):
    """A series, product or quadrature did not meet its tolerance."""

    exit_code = 2


class DegreeCapExceeded(QHarmonicError):
    """Gröbner completion produced a rule longer than the degree cap."""

    exit_code = 3

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial
