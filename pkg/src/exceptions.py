"""
Exception hierarchy for the online learning toolkit.
"""

import numpy as np


class NystromError(Exception):
    """
    Base class for every error raised by this package.
    """


class InvalidArgumentError(NystromError, ValueError):
    """
    Raised when an argument violates an operation's precondition
    (shape mismatch, out-of-range parameter, non-finite input).
    """


class DegenerateSpectrumError(NystromError, ArithmeticError):
    """
    Raised when every eigenvalue of the landmark kernel matrix is clipped,
    leaving an empty feature map.
    """


class SingularSystemError(NystromError, np.linalg.LinAlgError):
    """
    Raised when a least squares system has no unique solution.
    """


class InsufficientWarmupError(NystromError):
    """
    Raised when a stream ends before the warm-up buffer is full.
    """


class IngestionError(NystromError):
    """
    Raised when a dataset cannot be read into a stream.
    """


class ParseError(IngestionError):
    """
    Raised for a malformed LIBSVM line.
    """

    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class UnsupportedDiagnosticError(NystromError):
    """
    Raised when a diagnostic is requested for a loss it cannot handle.
    """


class ConfigError(NystromError):
    """
    Raised when a run configuration is inconsistent.
    """


class BudgetViolationError(NystromError):
    """
    Raised when a learner's stored-real counts change during a pass.
    """
