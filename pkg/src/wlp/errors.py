"""Exception types shared across the package."""


class WlpError(Exception):
    """Base class for all package errors."""


class NotFiniteLength(WlpError):
    """Cokernel fails the finite-length certificate (degenerate map)."""


class GenerationFailed(WlpError):
    """Random map generation exhausted its retry budget."""


class LineDegenerate(WlpError):
    """No sampled line produced a consistent rank-2 restriction profile."""


class ConsistencyFailure(WlpError):
    """Euler-characteristic / duality cross-check failed."""


class TheoremViolation(WlpError):
    """A measured rank contradicts a predicted injective/surjective range."""


class ParseError(WlpError):
    """Malformed instance file."""


class ShapeError(WlpError):
    """Twist sequences or entry grids have incompatible shapes."""


class DegreeError(WlpError):
    """An explicit map entry has the wrong degree."""
