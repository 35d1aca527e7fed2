"""Exception hierarchy shared by every module."""


class CMPeriodsError(Exception):
    """Base class for all errors raised by the package."""


class DomainError(CMPeriodsError, ValueError):
    """Input lies outside the domain of the operation."""


class PrecisionError(CMPeriodsError, ArithmeticError):
    """Target precision could not be reached within the iteration cap."""


class ConvergenceError(CMPeriodsError, ArithmeticError):
    """A series does not converge for the given argument."""


class DivisionByZero(CMPeriodsError, ZeroDivisionError):
    """Exact division by zero."""


class NoRootInQp(CMPeriodsError, ArithmeticError):
    """The requested root does not exist in Q_p."""


class ConfigError(CMPeriodsError, ValueError):
    """Invalid command line or suite configuration."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class FixtureError(CMPeriodsError, ValueError):
    """Fixture file violates its schema."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")
