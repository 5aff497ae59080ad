"""Exception types shared by all gfsl modules."""


class GfslError(Exception):
    """Base class for all library errors."""


class PoleError(GfslError):
    """An input sits on a pole of the requested function."""


class DomainError(GfslError):
    """Input outside the mathematical domain of the operation."""


class AccuracyError(GfslError):
    """Requested tolerance could not be reached; carries the achieved bound."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class ConsistencyError(GfslError):
    """Two routes that must agree numerically do not."""


class SupportError(GfslError):
    """Test-function mass leaks outside the window the formula covers."""


class BudgetError(GfslError):
    """Resource budget exhausted; carries whatever partial result exists."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ConstructionError(GfslError):
    """A constructed object failed its own defining checks."""
