from __future__ import annotations


class GelfandScopeError(Exception):
    """Base class for every error raised by the toolkit."""

    exit_code = 1


class UsageError(GelfandScopeError, ValueError):
    """Bad input: malformed JSON, foreign subgroup generators, mismatched tables."""

    exit_code = 2


class FieldDomainError(UsageError):
    """Arithmetic outside the domain of GF(2^m) (inverse of zero, bad degree)."""


class ResourceCapError(GelfandScopeError):
    """A configured cap was exceeded."""

    exit_code = 3

    def __init__(self, cap_name: str, cap_value: int, detail: str = "") -> None:
        self.cap_name = cap_name
        self.cap_value = cap_value
        message = f"{cap_name} cap of {cap_value} exceeded"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class ConstructionError(GelfandScopeError):
    """A construction failed its verification contract."""


class InternalError(GelfandScopeError):
    """An invariant that should always hold was violated."""
