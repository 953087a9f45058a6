"""Exception types shared across the package."""


class FobosonError(Exception):
    """Base class; ``kind`` is the tag reported in CLI error objects."""

    kind = "error"


class DomainError(FobosonError, ValueError):
    kind = "domain"


class PoleError(FobosonError, ArithmeticError):
    """Raised when an argument sits too close to a lattice point."""

    kind = "pole"

    def __init__(self, message, distance=None):
        super().__init__(message)
        self.distance = distance


class ConvergenceError(FobosonError, ArithmeticError):
    kind = "convergence"


class ShapeError(FobosonError, ValueError):
    kind = "shape"
