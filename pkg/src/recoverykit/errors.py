"""Exception hierarchy shared across the toolkit.

Everything derives from RecoveryKitError so callers (and the CLI / HTTP
layers) can map library failures to a single error channel.
"""


class RecoveryKitError(Exception):
    """Base class for all toolkit errors."""


class DomainError(RecoveryKitError, ValueError):
    """An input lies outside the mathematical domain of an operation."""


class ConstructionError(DomainError):
    """An object's invariants would be violated at construction time."""


class CalibrationError(RecoveryKitError):
    """The bootstrap could not reprice a quote, or a curve fails a consistency check."""


class InconsistentQuotesError(CalibrationError):
    """A quote is unsolvable given the quotes at shorter tenors."""


class ArbitrageError(RecoveryKitError):
    """Quoted instruments admit an arbitrage (e.g. CDS dearer than zero-recovery DDS)."""


class UndefinedRateError(DomainError):
    """A fair rate is undefined, e.g. every scenario carries a zero spread."""


class NumericError(RecoveryKitError):
    """A numerical scheme failed to converge."""


class ParseError(RecoveryKitError):
    """A market data file is malformed.

    ``problems`` lists one human-readable message per offending row.
    """

    def __init__(self, message: str, problems: list[str] | None = None):
        self.problems = problems or []
        if self.problems:
            message = message + ": " + "; ".join(self.problems)
        super().__init__(message)
