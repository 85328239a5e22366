"""Exception hierarchy. Exit codes used by the CLI are attached to each class."""


class QOrthoError(Exception):
    exit_code = 3


class DomainError(QOrthoError, ValueError):
    """A parameter lies outside the validity domain of the requested object."""

    exit_code = 2


class DenominatorPole(QOrthoError, ZeroDivisionError):
    """A denominator q-shifted factorial vanishes inside the summation range."""

    exit_code = 3


class NonConvergent(QOrthoError, ArithmeticError):
    """A truncated sum or product did not meet its tolerance within max_terms."""

    exit_code = 3
