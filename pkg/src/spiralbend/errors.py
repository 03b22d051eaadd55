"""Exception types shared across the package."""


class SpiralbendError(Exception):
    """Base class for all package errors."""


class InvalidArgument(SpiralbendError, ValueError):
    """An input value is malformed, non-finite or of the wrong shape."""


class InvalidParameter(SpiralbendError, ValueError):
    """A parameter combination violates a positivity or range proviso."""


class InvalidBody(SpiralbendError, ValueError):
    """A convex body oracle fails the normalization or symmetry requirements."""


class NeedsExtension(SpiralbendError):
    """A radius schedule is too short to cover the requested point."""


class NotInvariant(SpiralbendError):
    """A paired space is not invariant within the requested tolerance."""

    def __init__(self, message, defect):
        super().__init__(message)
        self.defect = defect


class PreconditionFailed(SpiralbendError, ValueError):
    """An operation's geometric precondition does not hold."""


class ConsistencyError(SpiralbendError):
    """Two computations that must agree exactly disagree (a bug signal)."""
