"""Numerical laboratory for bound states held inside an expulsive potential."""

__version__ = "0.1.0"

from .errors import (
    BlowupError,
    BracketError,
    ExpulsiveError,
    FitWindowError,
    NonMonotoneScanError,
    ResolutionError,
)
from .model import Grid, ProblemSpec, WaveFunction, make_grid

__all__ = [
    "BlowupError",
    "BracketError",
    "ExpulsiveError",
    "FitWindowError",
    "Grid",
    "NonMonotoneScanError",
    "ProblemSpec",
    "ResolutionError",
    "WaveFunction",
    "make_grid",
    "__version__",
]
