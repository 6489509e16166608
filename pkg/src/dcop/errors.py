"""Exception hierarchy shared across the package."""


class DcopError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(DcopError, ValueError):
    """Declared dimensions (M, L) disagree with the stored data."""


class BudgetError(DcopError):
    """A dense grid would exceed the configured size budget."""


class TieError(DcopError):
    """Exact ties encountered under the error tie policy."""


class ValidationFailure(DcopError):
    """An object failed axiom validation where a valid one was required."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SchemaError(DcopError, ValueError):
    """A document or file does not match its declared schema."""
