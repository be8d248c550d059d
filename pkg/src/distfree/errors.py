"""Exception hierarchy for distfree."""

from typing import Any


class DistFreeError(Exception):
    """Base exception for distfree errors."""

    pass


class InvalidArgumentError(DistFreeError, ValueError):
    """Raised when an operation's precondition is violated."""

    pass


class DimensionMismatchError(InvalidArgumentError):
    """Raised when matrix or vector sizes are inconsistent."""

    pass


class QuadratureError(DistFreeError):
    """Raised when an integrand is not finite at a quadrature node."""

    def __init__(self, message: str, location: Any = None):
        super().__init__(message)
        self.location = location


class IllConditionedCovarianceError(DistFreeError):
    """Raised when a covariance cannot be factorized even after jitter."""

    def __init__(self, message: str, condition_estimate: float, jitter: float):
        super().__init__(message)
        self.condition_estimate = condition_estimate
        self.jitter = jitter


class InternalConsistencyError(DistFreeError):
    """Raised when an assembled structure violates an identity it must satisfy."""

    pass


class ConfigError(DistFreeError):
    """Raised for unreadable or invalid run configuration files."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
