"""Exceptions raised across the simulator."""

from typing import Optional, Tuple


class UnruhError(Exception):
    """Base class for every error raised by this package."""


class DomainError(UnruhError, ValueError):
    """A parameter or input lies outside its valid domain."""


class NotHermitianError(DomainError):
    """Raised when a matrix that must be Hermitian is not."""

    def __init__(self, pair: Tuple[int, int], deviation: float):
        self.pair = pair
        self.deviation = deviation
        i, j = pair
        super().__init__(
            f"Matrix is not Hermitian: |M[{i},{j}] - conj(M[{j},{i}])| = {deviation:.3e}"
        )


class InvalidDensityMatrixError(DomainError):
    """Trace, positivity or shape violation of a density matrix."""


class StructureError(DomainError):
    """A state lacks the X structure an X-state fast path needs."""


class DegenerateChannelError(UnruhError, ArithmeticError):
    """The channel output has zero trace and cannot be normalized."""


class ConvergenceError(UnruhError, RuntimeError):
    """An iterative solver ran out of iterations."""

    def __init__(self, message: str, best_value: Optional[float] = None, iterations: int = 0):
        self.best_value = best_value
        self.iterations = iterations
        if best_value is not None:
            message = f"{message} (best value {best_value:.10g} after {iterations} iterations)"
        super().__init__(message)


class DatasetError(UnruhError, ValueError):
    """A sweep record failed validation before being written."""
