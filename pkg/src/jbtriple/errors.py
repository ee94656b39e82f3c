"""Exception types shared across the toolkit."""

__all__ = [
    "TripleError",
    "SpaceMismatchError",
    "InvalidTripotentError",
    "PeirceMembershipError",
    "NotQuasiInvertibleError",
    "DecompositionError",
    "PreconditionError",
]


class TripleError(Exception):
    """Base class for all toolkit-specific errors."""


class SpaceMismatchError(TripleError):
    """Operands live in different spaces (factor shapes do not agree)."""


class InvalidTripotentError(TripleError):
    """An element failed the tripotent validation e = {e, e, e}."""


class PeirceMembershipError(TripleError):
    """An element is not in the required Peirce subspace."""


class NotQuasiInvertibleError(TripleError):
    """No quasi-inverse exists (some block is rank deficient)."""


class DecompositionError(TripleError):
    """A requested convex decomposition is not available for this input."""


class PreconditionError(TripleError):
    """A documented precondition of an operation was violated."""
