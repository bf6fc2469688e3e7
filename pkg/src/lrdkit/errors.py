"""Exception hierarchy shared across the package.

Exit-code mapping for the CLI: usage / invalid parameters -> 1,
data quality -> 2, numerical failure -> 3.
"""


class LrdError(Exception):
    """Base class for all package errors."""


class ParameterError(LrdError, ValueError):
    """A parameter is outside its mathematical domain."""


class ConstraintError(LrdError, ValueError):
    """A request is infeasible for the given data (e.g. segment too short)."""


class DegenerateDataError(LrdError):
    """Input is degenerate for the requested statistic (zero variance, zero spectrum)."""


class BandTooNarrowError(LrdError):
    """Fewer than three scales are admissible for the configured frequency band."""


class NumericalError(LrdError):
    """A numerical routine failed (e.g. covariance factorization)."""


class ParseError(LrdError):
    """An input file could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class DataQualityError(LrdError):
    """Input data failed a quality gate (e.g. too many artifacts dropped)."""
