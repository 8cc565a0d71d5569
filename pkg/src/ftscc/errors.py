"""Exception hierarchy shared by every ftscc module."""

from __future__ import annotations


class FtsccError(Exception):
    """Base class for all errors raised by this package."""


class GraphParseError(FtsccError, ValueError):
    """Raised when an edge-list document cannot be parsed."""

    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class ContractError(FtsccError, ValueError):
    """A caller violated an operation's precondition."""


class FailureBudgetExceeded(ContractError):
    def __init__(self, size: int, k: int) -> None:
        super().__init__(f"failure budget exceeded: {size} failures given, index supports k={k}")
        self.size = size
        self.k = k


class FtrsBudgetExceeded(ContractError):
    """Exhaustive FTRS work would exceed the configured budget."""


class IndexFormatError(FtsccError):
    """An index file is truncated, corrupted, or of an unknown version."""


class InvariantViolation(FtsccError, AssertionError):
    """A debug-mode internal consistency check failed."""
