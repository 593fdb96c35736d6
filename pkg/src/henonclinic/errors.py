"""Exception types raised by the library."""


class HenonclinicError(Exception):
    """Base class for all library-specific failures."""


class DivergenceError(HenonclinicError):
    """Map iteration produced a non-finite state."""


class NonInvertibleError(HenonclinicError):
    """The map cannot be inverted (delta = 0)."""


class NonSaddleError(HenonclinicError):
    """Origin of the 2-D map is not a real saddle (c^2 - 4*delta <= 0)."""


class NonHyperbolicError(HenonclinicError):
    """Origin of the 4-D map lacks a real 2+2 hyperbolic splitting."""


class ResonanceError(HenonclinicError):
    """A coefficient system is singular: an eigenvalue power hits the spectrum.

    The offending order is attached as ``order`` (an int for single-variable
    series, an ``(n, m)`` tuple for double series).
    """

    def __init__(self, message, order):
        super().__init__(message)
        self.order = order


class SymmetryError(HenonclinicError):
    """The coefficient swap between branches requires delta = 1."""


class NoConvergenceError(HenonclinicError):
    """Newton iteration did not reach the residual tolerance."""


class TrivialRootError(HenonclinicError):
    """Newton converged to the fixed point at the origin.

    The converged parameters are attached as ``root_params``.
    """

    def __init__(self, message, root_params=None):
        super().__init__(message)
        self.root_params = root_params


class OutsideValidityError(HenonclinicError):
    """A root's parameters left the trusted domain of the series.

    ``radius`` is the parameter radius at which the series residual first
    exceeds the reference threshold, when known.
    """

    def __init__(self, message, radius=None):
        super().__init__(message)
        self.radius = radius


class ContinuationStartError(HenonclinicError):
    """No converged solution exists at the starting parameter value."""


class FitInvalidError(HenonclinicError):
    """Regression data are inconsistent with a quadratic tangency."""


class ConfigError(HenonclinicError):
    """Invalid run configuration (bad value or unknown key)."""
