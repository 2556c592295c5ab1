"""Exception types shared across the library."""


class HallcpxError(Exception):
    """Base class for library errors."""


class DomainError(HallcpxError, ValueError):
    """An argument lies outside an operation's domain."""


class BudgetExceededError(HallcpxError):
    """An enumeration would exceed the configured budget; never truncated silently."""


class InconsistencyError(HallcpxError):
    """An internal cross-check failed; indicates a bug, never returned as a value."""
