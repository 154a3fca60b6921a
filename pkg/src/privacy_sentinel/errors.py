"""Exception types shared across the engine."""


class SentinelError(Exception):
    """Base class for all engine errors."""


class ValidationError(SentinelError):
    """Input violates a documented precondition or invariant."""


class ConflictError(SentinelError):
    """Operation would duplicate something that must be unique."""


class NotFoundError(SentinelError):
    """Referenced entity does not exist."""


class StateError(SentinelError):
    """Illegal lifecycle transition or operation for the current state."""


class InsufficientEvidenceError(SentinelError):
    """Statistical operation requested on an empty sample."""


class ParseError(SentinelError):
    """Malformed input file; carries the offending location when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class IntegrityError(SentinelError):
    """Persisted state violates a structural invariant."""
