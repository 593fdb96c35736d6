"""Power-series parametrization of the origin's 1-D invariant manifolds.

A branch is represented by a truncated series
``S(t) = (sum a_n t^n, sum b_n t^n)`` solving the conjugacy equation
``f(S(t)) = S(lambda * t)`` order by order, where ``lambda`` is the
driving eigenvalue of the branch.  Order 0 is the fixed point at the
origin and order 1 the corresponding unit eigenvector; every higher
order follows from a 2x2 linear solve fed by a cubic convolution of
the lower-order ``b`` coefficients.  Because the map is odd, all
even-order coefficients vanish identically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ResonanceError, SymmetryError
from .maps import CubicMap2D

RESONANCE_TOL = 1e-12


@dataclass(frozen=True)
class Series2D:
    """Truncated manifold series of one branch of the 2-D map."""

    branch: str
    lam: float
    coeffs_a: np.ndarray
    coeffs_b: np.ndarray
    params: CubicMap2D
    order: int

    def __post_init__(self):
        if self.branch not in ("unstable", "stable"):
            raise ValueError(f"unknown branch {self.branch!r}")
        for name in ("coeffs_a", "coeffs_b"):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.shape != (self.order + 1,):
                raise ValueError(
                    f"{name} must have length order+1 = {self.order + 1}"
                )
            if arr[0] != 0.0:
                raise ValueError("series must be rooted at the origin")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def to_dict(self) -> dict:
        return {
            "branch": self.branch,
            "lambda": self.lam,
            "order": self.order,
            "coeffs_a": self.coeffs_a.tolist(),
            "coeffs_b": self.coeffs_b.tolist(),
            "params": {"c": self.params.c, "delta": self.params.delta},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Series2D":
        return cls(
            branch=data["branch"],
            lam=data["lambda"],
            coeffs_a=np.asarray(data["coeffs_a"], dtype=float),
            coeffs_b=np.asarray(data["coeffs_b"], dtype=float),
            params=CubicMap2D(**data["params"]),
            order=data["order"],
        )


@dataclass(frozen=True)
class ValidityProfile:
    """Sampled conjugacy error of a truncated series and its trusted radius.

    ``tau`` is the largest sampled radius such that every sample with
    ``|t| <= tau`` has error below ``epsilon``; it is certified on the
    sample grid only.
    """

    samples: np.ndarray = field(repr=False)
    tau: float
    epsilon: float


def _horner(coeffs: np.ndarray, t):
    acc = np.zeros_like(np.asarray(t, dtype=float)) + coeffs[-1]
    for c in coeffs[-2::-1]:
        acc = acc * t + c
    return acc


def _cubic_source(b: np.ndarray, n: int) -> float:
    """Coefficient of t^n in -3*(sum b_j t^j)^3, using orders < n only.

    Direct triple summation with ascending outer index; the inner double
    sum collapses to a dot product of coefficient slices.
    """
    total = 0.0
    for i in range(1, n - 1):
        k = n - i
        total += b[i] * np.dot(b[1:k], b[k - 1:0:-1])
    return -3.0 * total


def compute_series_2d(params: CubicMap2D, branch: str, order: int) -> Series2D:
    """Solve the conjugacy coefficients up to ``order`` for one branch.

    Order n >= 2 solves ``{-lam^n a_n + b_n = 0,
    -delta a_n + (c - lam^n) b_n = s}`` where ``s`` is the cubic source
    term; the system determinant is ``lam^(2n) - c lam^n + delta`` and a
    near-zero value means ``lam^n`` hit the origin spectrum (resonance).
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    spectrum = params.eigen_origin()
    if branch == "unstable":
        lam = spectrum.unstable_eigenvalues[0]
        vec = spectrum.unstable_eigenvectors[0]
    elif branch == "stable":
        lam = spectrum.stable_eigenvalues[0]
        vec = spectrum.stable_eigenvectors[0]
    else:
        raise ValueError(f"unknown branch {branch!r}")

    a = np.zeros(order + 1)
    b = np.zeros(order + 1)
    a[1], b[1] = vec
    for n in range(2, order + 1):
        lam_n = lam**n
        det = lam_n * lam_n - params.c * lam_n + params.delta
        if abs(det) < RESONANCE_TOL:
            raise ResonanceError(
                f"resonant order n={n}: lam^n = {lam_n} lies in the origin "
                f"spectrum (system determinant {det})",
                order=n,
            )
        s = _cubic_source(b, n)
        a[n] = -s / det
        b[n] = lam_n * a[n]
    return Series2D(branch, lam, a, b, params, order)


def series_from_symmetry(s: Series2D) -> Series2D:
    """Stable branch from an unstable one by swapping coordinates.

    Valid only at ``delta = 1``, where the map is conjugate to its
    inverse under ``(x, y) -> (y, x)``: the swapped coefficient pair
    solves the stable conjugacy with eigenvalue ``1/lam``.
    """
    if s.params.delta != 1.0:
        raise SymmetryError(
            f"coordinate-swap symmetry requires delta = 1, got {s.params.delta}"
        )
    if s.branch != "unstable":
        raise SymmetryError("symmetry construction starts from the unstable branch")
    return Series2D(
        branch="stable",
        lam=1.0 / s.lam,
        coeffs_a=s.coeffs_b,
        coeffs_b=s.coeffs_a,
        params=s.params,
        order=s.order,
    )


def evaluate(s: Series2D, t):
    """Series point at parameter ``t`` (Horner); broadcasts over arrays."""
    return np.stack(
        [_horner(s.coeffs_a, t), _horner(s.coeffs_b, t)], axis=-1
    )


def tangent(s: Series2D, t):
    """Derivative of the series curve with respect to ``t``."""
    n = np.arange(1, s.order + 1, dtype=float)
    da = s.coeffs_a[1:] * n
    db = s.coeffs_b[1:] * n
    return np.stack([_horner(da, t), _horner(db, t)], axis=-1)


def conjugacy_error(s: Series2D, t) -> np.ndarray:
    """``||f(S(t)) - S(lam * t)||`` at each ``t``."""
    t = np.asarray(t, dtype=float)
    mismatch = s.params.apply(evaluate(s, t)) - evaluate(s, s.lam * t)
    return np.linalg.norm(np.atleast_2d(mismatch), axis=-1).reshape(t.shape)


def _certified_radius(ts: np.ndarray, errors: np.ndarray, epsilon: float) -> float:
    radii = np.abs(ts)
    order = np.argsort(radii, kind="stable")
    tau = 0.0
    i = 0
    while i < len(order):
        # all samples sharing one radius must pass before it counts
        j = i
        r = radii[order[i]]
        ok = True
        while j < len(order) and radii[order[j]] == r:
            ok = ok and errors[order[j]] < epsilon
            j += 1
        if not ok:
            break
        tau = r
        i = j
    return tau


def validity_profile(
    s: Series2D, epsilon: float, t_max: float, n_samples: int = 1000
) -> ValidityProfile:
    """Sample the conjugacy error on ``[-t_max, t_max]`` and certify a radius."""
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    if n_samples < 2:
        raise ValueError("need at least two samples")
    ts = np.linspace(-t_max, t_max, n_samples)
    errors = conjugacy_error(s, ts)
    tau = _certified_radius(ts, errors, epsilon)
    return ValidityProfile(
        samples=np.column_stack([ts, errors]), tau=tau, epsilon=epsilon
    )
