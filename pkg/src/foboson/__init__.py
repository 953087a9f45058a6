"""Continued-fraction slope calculus, the elliptic bosonization bracket, and
exact chain-level bivector checks."""

from . import arith, bracket, dgchain, elliptic
from ._kernels import BACKEND
from .errors import ConvergenceError, DomainError, FobosonError, PoleError, ShapeError

__version__ = "0.1.0"

__all__ = [
    "arith",
    "bracket",
    "dgchain",
    "elliptic",
    "BACKEND",
    "ConvergenceError",
    "DomainError",
    "FobosonError",
    "PoleError",
    "ShapeError",
]
