"""Exception types shared across the library and mapped to CLI exit codes."""


class IsetError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(IsetError):
    """A value is outside the domain of the requested operation.

    Examples: composite prime argument, zero denominator, mismatched
    primes between operands, cosine outside [-1, 1].
    """


class BudgetError(IsetError):
    """A declared resource budget would be, or was, exceeded.

    Carries how far the computation got (``searched``) and the budget
    that stopped it, so callers can report partial progress.
    """

    def __init__(self, message: str, searched: int = 0, budget: int | None = None):
        super().__init__(message)
        self.searched = searched
        self.budget = budget
