"""Cubic Henon-type maps in 2-D and 4-D.

The planar map is ``f(x, y) = (y, -delta*x + c*y + 3*y^3)``; the 4-D map
couples two copies of it linearly through ``b*(y1 - y2)``.  Both are
polynomial diffeomorphisms with constant Jacobian determinant (``delta``
and ``delta^2``) and are odd: ``f(-p) = -f(p)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DivergenceError,
    NonHyperbolicError,
    NonInvertibleError,
    NonSaddleError,
)


@dataclass(frozen=True)
class Spectrum:
    """Real eigendata of the linearization at the origin.

    Eigenvalues are sorted by decreasing modulus inside each group.  Each
    eigenvector has unit Euclidean norm and a fixed orientation (first
    nonzero component positive on the unstable side, negative on the
    stable side); the fixed signs make downstream series coefficients
    reproducible and, at delta = 1, turn the planar stable vector into
    the exact coordinate swap of the unstable one.
    """

    unstable_eigenvalues: tuple[float, ...]
    stable_eigenvalues: tuple[float, ...]
    unstable_eigenvectors: tuple[np.ndarray, ...]
    stable_eigenvectors: tuple[np.ndarray, ...]


@dataclass(frozen=True)
class ModePair:
    """Unstable/stable eigenpair of one decoupling mode of the 4-D map."""

    lambda_u: float
    lambda_s: float
    vector_u: np.ndarray
    vector_s: np.ndarray


def _oriented_unit(v: np.ndarray, positive: bool) -> np.ndarray:
    """Scale to unit norm with the first nonzero component's sign fixed."""
    v = np.asarray(v, dtype=float)
    u = v / np.linalg.norm(v)
    for comp in u:
        if comp != 0.0:
            if (comp > 0.0) != positive:
                u = -u
            break
    u.setflags(write=False)
    return u


def _validate_delta(delta: float) -> None:
    if delta <= 0.0:
        raise NonInvertibleError(
            f"delta must be positive for the map to be invertible, got {delta}"
        )
    if delta > 1.0:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")


def _check_finite(out: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(out)):
        raise DivergenceError(f"{what} produced a non-finite state")
    return out


def _saddle_roots(trace: float, det: float) -> tuple[float, float]:
    """Roots of lambda^2 - trace*lambda + det, (unstable, stable)."""
    disc = trace * trace - 4.0 * det
    if disc <= 0.0:
        raise NonSaddleError(
            f"no real saddle: trace^2 - 4*det = {disc} is not positive"
        )
    root = math.sqrt(disc)
    lam_a = 0.5 * (trace + root)
    lam_b = 0.5 * (trace - root)
    if abs(lam_a) < abs(lam_b):
        lam_a, lam_b = lam_b, lam_a
    return lam_a, lam_b


@dataclass(frozen=True)
class CubicMap2D:
    """The planar cubic map ``(x, y) -> (y, -delta*x + c*y + 3*y^3)``.

    Requires ``delta in (0, 1]`` and ``c^2 - 4*delta > 0`` so that the
    origin is a real saddle.
    """

    c: float
    delta: float

    def __post_init__(self):
        _validate_delta(self.delta)
        if self.c**2 - 4.0 * self.delta <= 0.0:
            raise NonSaddleError(
                f"origin is not a saddle: c^2 - 4*delta = "
                f"{self.c**2 - 4.0 * self.delta} <= 0"
            )

    @property
    def dim(self) -> int:
        return 2

    def apply(self, pt) -> np.ndarray:
        """One forward step; accepts a point or an array of points (..., 2)."""
        pt = np.asarray(pt, dtype=float)
        x, y = pt[..., 0], pt[..., 1]
        cube = y * y * y  # y**3 via pow() is not exactly odd for arrays
        out = np.stack([y, -self.delta * x + self.c * y + 3.0 * cube], axis=-1)
        return _check_finite(out, "2-D map")

    def inverse(self, pt) -> np.ndarray:
        """One backward step: ``(x, y) -> ((c*x - y + 3*x^3)/delta, x)``."""
        pt = np.asarray(pt, dtype=float)
        x, y = pt[..., 0], pt[..., 1]
        out = np.stack(
            [(self.c * x - y + 3.0 * x * x * x) / self.delta, x], axis=-1
        )
        return _check_finite(out, "2-D inverse map")

    def jacobian(self, pt) -> np.ndarray:
        """Differential of ``apply`` at ``pt``; det = delta everywhere."""
        pt = np.asarray(pt, dtype=float)
        y = pt[1]
        return np.array(
            [[0.0, 1.0], [-self.delta, self.c + 9.0 * y**2]]
        )

    def inverse_jacobian(self, pt) -> np.ndarray:
        """Differential of ``inverse`` at ``pt``."""
        pt = np.asarray(pt, dtype=float)
        x = pt[0]
        d = self.delta
        return np.array(
            [[(self.c + 9.0 * x**2) / d, -1.0 / d], [1.0, 0.0]]
        )

    def fixed_points(self) -> list[np.ndarray]:
        """Origin, plus the symmetric pair when ``1 - c + delta > 0``."""
        pts = [np.zeros(2)]
        q = 1.0 - self.c + self.delta
        if q > 0.0:
            r = math.sqrt(q / 3.0)
            pts.append(np.array([r, r]))
            pts.append(np.array([-r, -r]))
        return pts

    def eigen_origin(self) -> Spectrum:
        """Saddle eigendata at the origin: roots of lambda^2 - c*lambda + delta."""
        lam_u, lam_s = _saddle_roots(self.c, self.delta)
        return Spectrum(
            unstable_eigenvalues=(lam_u,),
            stable_eigenvalues=(lam_s,),
            unstable_eigenvectors=(_oriented_unit([1.0, lam_u], positive=True),),
            stable_eigenvectors=(_oriented_unit([1.0, lam_s], positive=False),),
        )


@dataclass(frozen=True)
class CubicMap4D:
    """Two linearly coupled copies of :class:`CubicMap2D`.

    ``f(x1,y1,x2,y2) = (y1, c*y1 - delta*x1 + 3*y1^3 + b*(y1-y2),
    y2, c*y2 - delta*x2 + 3*y2^3 - b*(y1-y2))``.  The origin must be
    hyperbolic with two real expanding and two real contracting
    directions, which holds when both mode quadratics
    ``lambda^2 - c*lambda + delta`` and ``lambda^2 - (c+2b)*lambda + delta``
    have real roots off the unit circle.
    """

    c: float
    delta: float
    b: float

    def __post_init__(self):
        _validate_delta(self.delta)
        if self.b < 0.0:
            raise NonHyperbolicError(f"coupling b must be >= 0, got {self.b}")
        for trace in (self.c, self.c + 2.0 * self.b):
            disc = trace * trace - 4.0 * self.delta
            if disc <= 0.0:
                raise NonHyperbolicError(
                    f"mode quadratic with trace {trace} has no real roots"
                )
            lam = 0.5 * (abs(trace) + math.sqrt(disc))
            if lam <= 1.0 or self.delta / lam >= 1.0:
                raise NonHyperbolicError(
                    f"mode quadratic with trace {trace} has roots on or "
                    f"inside the unit circle"
                )

    @property
    def dim(self) -> int:
        return 4

    def apply(self, pt) -> np.ndarray:
        pt = np.asarray(pt, dtype=float)
        x1, y1, x2, y2 = (pt[..., i] for i in range(4))
        cpl = self.b * (y1 - y2)
        out = np.stack(
            [
                y1,
                self.c * y1 - self.delta * x1 + 3.0 * y1 * y1 * y1 + cpl,
                y2,
                self.c * y2 - self.delta * x2 + 3.0 * y2 * y2 * y2 - cpl,
            ],
            axis=-1,
        )
        return _check_finite(out, "4-D map")

    def inverse(self, pt) -> np.ndarray:
        pt = np.asarray(pt, dtype=float)
        x1, y1, x2, y2 = (pt[..., i] for i in range(4))
        cb, d = self.c + self.b, self.delta
        out = np.stack(
            [
                (cb * x1 + 3.0 * x1 * x1 * x1 - self.b * x2 - y1) / d,
                x1,
                (cb * x2 + 3.0 * x2 * x2 * x2 - self.b * x1 - y2) / d,
                x2,
            ],
            axis=-1,
        )
        return _check_finite(out, "4-D inverse map")

    def jacobian(self, pt) -> np.ndarray:
        pt = np.asarray(pt, dtype=float)
        y1, y2 = pt[1], pt[3]
        c, d, b = self.c, self.delta, self.b
        return np.array(
            [
                [0.0, 1.0, 0.0, 0.0],
                [-d, c + b + 9.0 * y1**2, 0.0, -b],
                [0.0, 0.0, 0.0, 1.0],
                [0.0, -b, -d, c + b + 9.0 * y2**2],
            ]
        )

    def inverse_jacobian(self, pt) -> np.ndarray:
        pt = np.asarray(pt, dtype=float)
        x1, x2 = pt[0], pt[2]
        c, d, b = self.c, self.delta, self.b
        return np.array(
            [
                [(c + b + 9.0 * x1**2) / d, -1.0 / d, -b / d, 0.0],
                [1.0, 0.0, 0.0, 0.0],
                [-b / d, 0.0, (c + b + 9.0 * x2**2) / d, -1.0 / d],
                [0.0, 0.0, 1.0, 0.0],
            ]
        )

    def mode_pairs(self) -> tuple[ModePair, ModePair]:
        """Eigenpairs of the symmetric and antisymmetric decoupling modes.

        Writing states as sum/difference of the two chains decouples the
        linearization into two planar saddles; the first returned pair
        belongs to the symmetric mode (trace ``c``), the second to the
        antisymmetric mode (trace ``c + 2b``).  The 4-D eigenvectors are
        the corresponding sum/difference unit vectors.
        """
        pairs = []
        for trace, sign in ((self.c, 1.0), (self.c + 2.0 * self.b, -1.0)):
            lam_u, lam_s = _saddle_roots(trace, self.delta)
            vecs = []
            for lam, positive in ((lam_u, True), (lam_s, False)):
                planar = [1.0, lam]
                vecs.append(
                    _oriented_unit(
                        planar + [sign * x for x in planar], positive=positive
                    )
                )
            pairs.append(ModePair(lam_u, lam_s, vecs[0], vecs[1]))
        return tuple(pairs)

    def eigen_origin(self) -> Spectrum:
        """Full eigendata at the origin from the two decoupling modes."""
        modes = self.mode_pairs()
        unstable = sorted(
            ((m.lambda_u, m.vector_u) for m in modes),
            key=lambda t: -abs(t[0]),
        )
        stable = sorted(
            ((m.lambda_s, m.vector_s) for m in modes),
            key=lambda t: -abs(t[0]),
        )
        return Spectrum(
            unstable_eigenvalues=tuple(t[0] for t in unstable),
            stable_eigenvalues=tuple(t[0] for t in stable),
            unstable_eigenvectors=tuple(t[1] for t in unstable),
            stable_eigenvectors=tuple(t[1] for t in stable),
        )
