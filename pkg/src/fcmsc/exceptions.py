"""Exception types raised across the package."""


class FcmscError(Exception):
    """Base class for all package errors."""


class InvalidInputError(FcmscError, ValueError):
    """Input data violates a documented precondition (non-finite, empty, ...)."""


class InvalidParameterError(FcmscError, ValueError):
    """A scalar parameter is outside its admissible range."""


class ShapeError(InvalidInputError):
    """Matrix shapes are inconsistent with each other or with the operation."""


class ParseError(InvalidInputError):
    """A data file could not be parsed as a numeric matrix."""


class LabelRangeError(InvalidInputError):
    """Cluster labels are not a contiguous 0..m-1 id set."""


class DegenerateBandwidthError(InvalidInputError):
    """Automatic kernel bandwidth selection collapsed to zero."""


class NumericalError(FcmscError, RuntimeError):
    """A numerical routine failed (SVD non-convergence, overflow, ...)."""


class IllConditionedError(NumericalError):
    """A linear system or spectral division is too ill-conditioned to solve."""


class DivergenceError(NumericalError):
    """Solver iterates became non-finite."""
