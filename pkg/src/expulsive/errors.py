"""Exception vocabulary shared across the package."""

from __future__ import annotations


class ExpulsiveError(Exception):
    """Base class for all package-specific failures."""


class ResolutionError(ExpulsiveError):
    """A grid or step size is too coarse for the requested computation."""


class BlowupError(ExpulsiveError):
    """A nonlinear outward integration ran away.

    Carries the coordinate at which the amplitude cap was exceeded.
    """

    def __init__(self, coordinate: float, message: str | None = None):
        self.coordinate = float(coordinate)
        super().__init__(message or f"nonlinear runaway at x = {self.coordinate:.6g}")


class FitWindowError(ExpulsiveError):
    """A tail-fit window is unusable (too short, outside the grid, ...)."""


class NonMonotoneScanError(ExpulsiveError):
    """A collapse scan produced interleaved stable/collapse verdicts.

    The full verdict table (list of (amplitude, norm, verdict) tuples) is
    attached so the caller can inspect it instead of silently bisecting.
    """

    def __init__(self, table, message: str | None = None):
        self.table = list(table)
        super().__init__(message or "collapse scan verdicts are not monotone in amplitude")


class BracketError(ExpulsiveError):
    """A scan or bisection failed to bracket its target; table attached."""

    def __init__(self, table, message: str):
        self.table = list(table)
        super().__init__(message)
