"""Exception types shared across the package.

Each class carries the process exit code the command line maps it to.
"""


class QgbError(Exception):
    exit_code = 3


class ConfigurationError(QgbError, ValueError):
    """Malformed input: bad shapes, unknown labels, invalid JSON fields."""

    exit_code = 2


class DomainError(QgbError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""

    exit_code = 2


class NumericalError(QgbError, ArithmeticError):
    """An iterative routine failed to converge or produced non-finite output."""

    exit_code = 3


class RangeError(NumericalError, OverflowError):
    """The requested evaluation would overflow double precision."""

    exit_code = 3
