"""Exception types raised across the package."""


class HawkcastError(Exception):
    """Base class for all package errors."""


class MonotonicSignal(HawkcastError, ValueError):
    """Signal has fewer than two maxima or two minima, so no IMF can be sifted."""


class LengthMismatch(HawkcastError, ValueError):
    pass


class DimensionMismatch(HawkcastError, ValueError):
    pass


class EmptyPopulation(HawkcastError, ValueError):
    pass


class EmptyArchive(HawkcastError, ValueError):
    pass


class EmptySet(HawkcastError, ValueError):
    pass


class OutOfBox(HawkcastError, ValueError):
    """Decision vector lies outside the problem's box."""


class DegenerateData(HawkcastError, ValueError):
    pass


class Untrained(HawkcastError, RuntimeError):
    pass


class ZeroActual(HawkcastError, ValueError):
    """A metric that divides by actual values met a zero."""


class DegenerateDenominator(HawkcastError, ValueError):
    pass


class DegenerateVariance(HawkcastError, ValueError):
    pass


class ZeroBaseline(HawkcastError, ValueError):
    pass


class ZeroVariance(HawkcastError, ValueError):
    """Loss differential has zero variance; the DM statistic is undefined."""


class TooShort(HawkcastError, ValueError):
    pass


class ParseError(HawkcastError, ValueError):
    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class TooManyMissing(HawkcastError, ValueError):
    pass


class ConfigError(HawkcastError, ValueError):
    pass
