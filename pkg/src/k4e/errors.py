"""Exception hierarchy shared by every module."""

from __future__ import annotations


class K4eError(Exception):
    """Base class for all package errors."""


class UnclassifiableLeave(K4eError):
    pass


class DuplicateBlock(K4eError):
    pass


class NonIntegral(K4eError):
    pass


class InvalidBlock(K4eError):
    pass


class VerificationError(K4eError):
    """A design failed a verifier it was required to pass."""

    def __init__(self, report, message: str | None = None):
        super().__init__(message or report.summary())
        self.report = report


class Infeasible(K4eError):
    """A necessary existence condition fails."""


class Unsupported(K4eError):
    """No construction route is available; names the missing ingredient."""


class UnsupportedIngredient(Unsupported):
    """An ingredient provider has no strategy for the requested parameters."""


class LayoutMismatch(K4eError):
    pass


class ParityViolation(K4eError):
    pass


class MissingPart(K4eError):
    pass


class NoIdempotent(K4eError):
    pass


class SearchExhausted(K4eError):
    pass


class BudgetExceeded(K4eError):
    def __init__(self, message: str = "node budget exceeded", nodes: int = 0):
        super().__init__(message)
        self.nodes = nodes


class Timeout(K4eError):
    pass


class KnownException(K4eError):
    """The requested (g, n, leave) is excluded by the main existence theorem.

    ``reference`` names the result that establishes the exclusion.
    """

    def __init__(self, message: str, reference: str | None = None):
        super().__init__(message)
        self.reference = reference


class UnknownId(K4eError, KeyError):
    pass


class CorruptEntry(K4eError):
    pass
