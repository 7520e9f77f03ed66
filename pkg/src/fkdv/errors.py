"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Bad user input or parameters outside an operation's domain."""


class SolverError(RuntimeError):
    """A numerical procedure failed to converge or lost its invariants."""


class BracketError(SolverError):
    """A root bracket did not straddle a sign change.

    Carries the classification of both endpoints so callers can widen or
    shift the bracket.
    """

    def __init__(self, message, lo_outcome=None, hi_outcome=None):
        super().__init__(message)
        self.lo_outcome = lo_outcome
        self.hi_outcome = hi_outcome
