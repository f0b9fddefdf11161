#!/usr/bin/env python3
"""
Error types shared by the solver suite.
The CLI maps each family onto an exit code in spectral_editor.main.
"""

from typing import Optional


class SpectralEditError(Exception):
    """Base class for every error raised on purpose by the suite"""


class GraphParseError(SpectralEditError):
    """Malformed edge-list or instance/solution document"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class ContractError(SpectralEditError):
    """A precondition of an operation was violated"""


class CapacityError(SpectralEditError):
    """Exhaustive enumeration (or materialization) refused for size reasons"""

    def __init__(self, message: str, pool_size: int = 0, limit: int = 0):
        self.pool_size = pool_size
        self.limit = limit
        super().__init__(message)


class NumericError(SpectralEditError):
    """Floating eigensolver failed to converge or produced a bad residual"""


class UsageError(SpectralEditError):
    """Unsupported (kind, r, engine) combination or bad command-line usage"""


class InvariantViolation(SpectralEditError):
    """A certificate that must always hold did not (kernel size bound, branch bound)"""


class BenchDisagreement(SpectralEditError):
    """Two engines returned different answers for the same instance"""

    def __init__(self, message: str, records: tuple = ()):
        self.records = records
        super().__init__(message)
