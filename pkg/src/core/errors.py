"""Exceptions raised across the package. The CLI reports any of them as a diagnostic."""

from typing import Iterable, Optional


class VirtualExtensionError(Exception):
    """Base class for every library error"""


class PeriodLimitExceeded(VirtualExtensionError):
    def __init__(self, period: int, cap: int):
        super().__init__(f"period {period} exceeds the configured cap {cap}")
        self.period = period
        self.cap = cap


class DegreeLimitExceeded(VirtualExtensionError):
    def __init__(self, degree: int, cap: int, what: str = "degree"):
        super().__init__(f"{what} {degree} exceeds the configured degree cap {cap}")
        self.degree = degree
        self.cap = cap


class UndecidableMembership(VirtualExtensionError):
    pass


class UndecidableBranch(VirtualExtensionError):
    pass


class ArityMismatch(VirtualExtensionError):
    pass


class NonEnumerableDomain(VirtualExtensionError):
    pass


class DomainViolation(VirtualExtensionError):
    pass


class NotAChain(VirtualExtensionError):
    pass


class DomainMismatch(VirtualExtensionError):
    pass


class NonEnumerableCarrier(VirtualExtensionError):
    pass


class ZeroBranchDivisor(VirtualExtensionError):
    pass


class SizeLimit(VirtualExtensionError):
    pass


class EvaluationError(VirtualExtensionError):
    pass


class ParseError(VirtualExtensionError):
    def __init__(self, message: str, line: int, column: int, expected: Optional[Iterable[str]] = None):
        self.line = line
        self.column = column
        self.expected = sorted(set(expected or ()))
        detail = f"{message} at line {line}, column {column}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)
        self.message = message
