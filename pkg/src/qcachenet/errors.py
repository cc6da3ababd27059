"""
Exception hierarchy for QCacheNet.

All errors raised by the simulator derive from QCacheNetError so callers
(and the CLI) can catch the whole family at once.
"""
from typing import Any, Dict, Optional


class QCacheNetError(Exception):
    """Base class for all QCacheNet errors."""
    pass


class InvalidProbabilityError(QCacheNetError, ValueError):
    """Raised when a probability lies outside [0, 1]."""
    pass


class InvalidStateError(QCacheNetError, ValueError):
    """Raised when a density matrix or pure state is malformed."""
    pass


class InvalidInputError(QCacheNetError, ValueError):
    """Raised when an input vector has the wrong shape or values."""
    pass


class InvalidConfigError(QCacheNetError, ValueError):
    """Raised when network, queue or experiment parameters are invalid."""
    pass


class ConfigParseError(InvalidConfigError):
    """Raised when an experiment config file cannot be parsed."""

    def __init__(self, message: str, line: Optional[int] = None, key: Optional[str] = None):
        self.line = line
        self.key = key
        location = []
        if line is not None:
            location.append(f"line {line}")
        if key is not None:
            location.append(f"key '{key}'")
        prefix = f"[{', '.join(location)}] " if location else ""
        super().__init__(f"{prefix}{message}")


class DegenerateFormulaError(QCacheNetError, ArithmeticError):
    """Raised when the closed-form queue wait divides by zero."""
    pass


class NumericalFailureError(QCacheNetError, ArithmeticError):
    """Raised when a linear solve or consistency check fails."""
    pass


class CapacityError(QCacheNetError):
    """Raised when an exhaustive table would exceed its size guard."""
    pass


class InfiniteRateError(QCacheNetError, ArithmeticError):
    """Raised when a zero time overhead would give an infinite rate."""
    pass


class InfeasibleProblemError(QCacheNetError):
    """
    Raised when no configuration satisfies the fidelity constraint.

    Attributes:
        best_row: The best infeasible row (by objective), for diagnostics
    """

    def __init__(self, message: str, best_row: Optional[Dict[str, Any]] = None):
        self.best_row = best_row
        if best_row is not None:
            message = f"{message}; best infeasible row: {best_row}"
        super().__init__(message)
