"""Exception types shared across the package."""

from __future__ import annotations


class ZeroSumError(Exception):
    """Base class for all library-specific errors."""


class InvalidGroupError(ZeroSumError, ValueError):
    """Group construction input is malformed (factor < 2, broken chain, over cap)."""


class UnsupportedGroupError(ZeroSumError, ValueError):
    """Operation requires a group class it was not given (usually a p-group)."""


class UndefinedHeightError(ZeroSumError, ValueError):
    """Height requested for the zero element, where the defining maximum is unbounded."""


class NotApplicableError(ZeroSumError, ValueError):
    """Closed-form result exists only under a structural hypothesis that fails here."""


class NeedsOracleError(ZeroSumError):
    """No closed form covers this input; caller should fall back to exhaustive search."""


class BudgetExceededError(ZeroSumError, RuntimeError):
    """Search ran out of node or time budget.

    Carries partial progress so callers can report how far the search got.
    Never used to smuggle out an estimate: an exceeded budget yields no value.
    """

    def __init__(self, message: str, *, nodes_visited: int = 0,
                 elapsed_seconds: float = 0.0):
        super().__init__(message)
        self.nodes_visited = nodes_visited
        self.elapsed_seconds = elapsed_seconds


class InternalCheckError(ZeroSumError, RuntimeError):
    """A self-verification that must always pass has failed.

    Raised when a construction fails its own zero-sumfree check or when two
    independent computation routes disagree. Indicates a bug in this package
    (or a genuine counterexample, which would be far more interesting).
    """


class CertificateError(ZeroSumError, ValueError):
    """Certificate file is structurally malformed (not merely wrong)."""
