"""Locating transverse homoclinic points as zeros of a manifold mismatch.

The mismatch map sends root parameters to
``f^(n_u)(P_u(.)) - f^(-n_s)(P_s(.))``, the difference between a point
on the (iterated) unstable surface and one on the (iterated) stable
surface.  A non-trivial zero inside the trusted parameter domain is a
homoclinic point; its transversality is measured by the determinant of
the manifold tangents there.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from . import manifold2d as m2
from . import manifold4d as m4
from .errors import (
    HenonclinicError,
    NoConvergenceError,
    OutsideValidityError,
    TrivialRootError,
)
from .manifold2d import Series2D
from .manifold4d import Series4D

Series = Union[Series2D, Series4D]

# componentwise parameter caps inside which the default series orders keep
# the conjugacy error below the root-acceptance scale.  The unstable cap is
# the published trusted range; the stable branch allows more room because
# its conjugacy argument contracts (|lam_s * t| < |t|), which keeps its
# polynomial accurate much further out (verified below 1e-13 up to t = 3
# at order 100 across the continuation range).
TRUST_RADIUS_2D = (1.6, 2.5)
TRUST_RADIUS_4D = (1.16, 1.4)

TRIVIAL_RADIUS = 1e-6


@dataclass(frozen=True)
class MismatchProblem:
    """An (unstable, stable) series pair sharing one map, plus iterate counts."""

    unstable: Series
    stable: Series
    n_u: int = 0
    n_s: int = 0
    trust_radius: tuple[float, float] | float | None = None

    def __post_init__(self):
        if self.unstable.branch != "unstable" or self.stable.branch != "stable":
            raise ValueError("problem needs an (unstable, stable) series pair")
        if type(self.unstable) is not type(self.stable):
            raise ValueError("series dimensions differ")
        if self.unstable.params != self.stable.params:
            raise ValueError("series were built for different map parameters")
        if self.n_u < 0 or self.n_s < 0:
            raise ValueError("iterate counts must be non-negative")
        trust = self.trust_radius
        if trust is None:
            trust = TRUST_RADIUS_2D if self.dim == 2 else TRUST_RADIUS_4D
        elif np.isscalar(trust):
            trust = (float(trust), float(trust))
        object.__setattr__(self, "trust_radius", tuple(trust))

    @property
    def params(self):
        return self.unstable.params

    @property
    def dim(self) -> int:
        return 2 if isinstance(self.unstable, Series2D) else 4


@dataclass(frozen=True)
class HomoclinicSolution:
    """A converged non-trivial mismatch zero and its diagnostics."""

    root_params: np.ndarray
    point: np.ndarray
    residual: float
    transversality_det: float
    newton_iters: int


@dataclass(frozen=True)
class DistanceProfile:
    """Distances ``d_n`` of forward/backward iterates from the origin."""

    entries: tuple[tuple[int, float], ...]
    min_distance: float
    argmin: int


def _halves(prob: MismatchProblem, x: np.ndarray):
    """Evaluate both sides at batched root parameters, shape (..., k)."""
    x = np.asarray(x, dtype=float)
    if prob.dim == 2:
        pu = m2.evaluate(prob.unstable, x[..., 0])
        ps = m2.evaluate(prob.stable, x[..., 1])
    else:
        pu = m4.evaluate(prob.unstable, x[..., 0], x[..., 1])
        ps = m4.evaluate(prob.stable, x[..., 2], x[..., 3])
    f = prob.params
    for _ in range(prob.n_u):
        pu = f.apply(pu)
    for _ in range(prob.n_s):
        ps = f.inverse(ps)
    return pu, ps


def mismatch(prob: MismatchProblem, x) -> np.ndarray:
    """``f^(n_u)(P_u) - f^(-n_s)(P_s)`` at root parameters ``x``.

    Wild arguments (far outside the series domain) may overflow to
    non-finite values; callers treat those as unusable candidates, so the
    evaluation itself stays silent about them.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        pu, ps = _halves(prob, x)
        return pu - ps


def _chain_jacobian(f, point: np.ndarray, n: int, forward: bool) -> np.ndarray:
    """Differential of ``f^n`` (or ``f^-n``) along the orbit of ``point``."""
    dim = point.shape[-1]
    jac = np.eye(dim)
    p = point
    for _ in range(n):
        if forward:
            jac = f.jacobian(p) @ jac
            p = f.apply(p)
        else:
            jac = f.inverse_jacobian(p) @ jac
            p = f.inverse(p)
    return jac


def mismatch_jacobian(prob: MismatchProblem, x) -> np.ndarray:
    """Analytic Jacobian of the mismatch with respect to the root parameters."""
    x = np.asarray(x, dtype=float)
    f = prob.params
    if prob.dim == 2:
        cols_u = m2.tangent(prob.unstable, x[0])[:, None]
        cols_s = m2.tangent(prob.stable, x[1])[:, None]
        pu = m2.evaluate(prob.unstable, x[0])
        ps = m2.evaluate(prob.stable, x[1])
    else:
        cols_u = m4.jacobian(prob.unstable, x[0], x[1])
        cols_s = m4.jacobian(prob.stable, x[2], x[3])
        pu = m4.evaluate(prob.unstable, x[0], x[1])
        ps = m4.evaluate(prob.stable, x[2], x[3])
    ju = _chain_jacobian(f, pu, prob.n_u, forward=True)
    js = _chain_jacobian(f, ps, prob.n_s, forward=False)
    return np.hstack([ju @ cols_u, -(js @ cols_s)])


def transversality_det(prob: MismatchProblem, root_params) -> float:
    """Determinant of the manifold tangent vectors at the homoclinic point.

    Columns are the (iterated) unstable tangents followed by the
    (iterated) stable tangents; a value bounded away from zero certifies
    a transverse intersection.
    """
    jac = mismatch_jacobian(prob, root_params)
    half = prob.dim // 2
    jac[:, half:] *= -1.0  # undo the mismatch sign on the stable columns
    return float(np.linalg.det(jac))


def _unstable_point(prob: MismatchProblem, x: np.ndarray) -> np.ndarray:
    pu, _ = _halves(prob, x)
    return pu


def _validity_crossing(prob: MismatchProblem, x: np.ndarray, epsilon: float):
    """Radius at which the series error first exceeds ``epsilon`` toward ``x``."""
    worst = None
    if prob.dim == 2:
        halves = ((prob.unstable, abs(x[0])), (prob.stable, abs(x[1])))
        for series, radius in halves:
            ts = np.linspace(0.0, max(radius, 1e-6), 64)
            errs = m2.conjugacy_error(series, ts)
            hit = np.nonzero(errs > epsilon)[0]
            if hit.size:
                r = float(ts[hit[0]])
                worst = r if worst is None else min(worst, r)
    else:
        halves = ((prob.unstable, x[0], x[1]), (prob.stable, x[2], x[3]))
        for series, u, v in halves:
            r_max = float(np.hypot(u, v))
            scale = np.linspace(0.0, 1.0, 64)
            errs = m4.conjugacy_error(series, scale * u, scale * v)
            hit = np.nonzero(errs > epsilon)[0]
            if hit.size:
                r = float(scale[hit[0]] * r_max)
                worst = r if worst is None else min(worst, r)
    return worst


def root_series_errors(prob: MismatchProblem, root_params) -> tuple[float, float]:
    """Conjugacy error of each series at the root's own parameters.

    Roots are accepted slightly beyond the strictly certified radius, so
    this records how accurate each manifold representation actually is at
    the reported intersection.
    """
    x = np.asarray(root_params, dtype=float)
    if prob.dim == 2:
        eu = m2.conjugacy_error(prob.unstable, x[0])
        es = m2.conjugacy_error(prob.stable, x[1])
    else:
        eu = m4.conjugacy_error(prob.unstable, x[0], x[1])
        es = m4.conjugacy_error(prob.stable, x[2], x[3])
    return float(eu), float(es)


def find_homoclinic(
    prob: MismatchProblem,
    seed,
    tol: float = 1e-13,
    max_iters: int = 60,
) -> HomoclinicSolution:
    """Damped Newton iteration on the mismatch from ``seed``.

    Success requires every mismatch component below ``tol``, a root
    outside the trivial ball around the origin, and root parameters
    inside the trusted series domain (componentwise).
    """
    x = np.asarray(seed, dtype=float).copy()
    if x.shape != (prob.dim,):
        raise ValueError(f"seed must have {prob.dim} components")
    r = mismatch(prob, x)
    iters = 0
    with np.errstate(over="ignore", invalid="ignore"):
        while np.max(np.abs(r)) >= tol:
            if iters >= max_iters:
                raise NoConvergenceError(
                    f"no convergence after {max_iters} Newton iterations "
                    f"(residual {np.max(np.abs(r)):.3e})"
                )
            jac = mismatch_jacobian(prob, x)
            try:
                step = np.linalg.solve(jac, r)
            except np.linalg.LinAlgError as exc:
                raise NoConvergenceError(
                    f"singular mismatch Jacobian: {exc}"
                ) from exc
            base = np.linalg.norm(r)
            # try the full step and up to 30 halvings, evaluated in one batch
            scales = 0.5 ** np.arange(31, dtype=float)
            candidates = x[None, :] - scales[:, None] * step[None, :]
            residuals = mismatch(prob, candidates)
            norms = np.linalg.norm(residuals, axis=-1)
            better = np.nonzero(norms < base)[0]
            if better.size == 0:
                raise NoConvergenceError(
                    "Newton step failed to reduce the residual after 30 halvings"
                )
            k = better[0]
            x, r = candidates[k], residuals[k]
            iters += 1

    if np.linalg.norm(x) < TRIVIAL_RADIUS:
        raise TrivialRootError(
            "Newton converged to the trivial root at the origin", root_params=x
        )
    half = prob.dim // 2
    cap_u, cap_s = prob.trust_radius
    if np.max(np.abs(x[:half])) > cap_u or np.max(np.abs(x[half:])) > cap_s:
        radius = _validity_crossing(prob, x, epsilon=tol)
        raise OutsideValidityError(
            f"root parameters {x} leave the trusted domain "
            f"(unstable |.| <= {cap_u}, stable |.| <= {cap_s}); series error "
            f"exceeds {tol:.1e} at radius {radius}",
            radius=radius,
        )
    return HomoclinicSolution(
        root_params=x,
        point=_unstable_point(prob, x),
        residual=float(np.max(np.abs(r))),
        transversality_det=transversality_det(prob, x),
        newton_iters=iters,
    )


def mirror_solution(sol: HomoclinicSolution) -> HomoclinicSolution:
    """The sign-flipped partner root.

    The map and both series are odd, so negating the root parameters gives
    another root with bitwise-identical residual; tangents are even, so
    the transversality determinant is unchanged.
    """
    return HomoclinicSolution(
        root_params=-sol.root_params,
        point=-sol.point,
        residual=sol.residual,
        transversality_det=sol.transversality_det,
        newton_iters=sol.newton_iters,
    )


def seed_grid(
    prob: MismatchProblem,
    bounds,
    resolution: int,
    exclude_radius: float = 0.5,
    norm_cutoff: float | None = None,
) -> list[np.ndarray]:
    """Grid seeds for Newton, ranked by ascending mismatch norm.

    ``bounds`` is one ``(lo, hi)`` pair applied to every parameter axis or
    a sequence of per-axis pairs.  Points within ``exclude_radius`` of the
    origin are dropped so the ranking is not dominated by the trivial
    root's basin.
    """
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    bounds = np.asarray(bounds, dtype=float)
    if bounds.shape == (2,):
        bounds = np.tile(bounds, (prob.dim, 1))
    if bounds.shape != (prob.dim, 2):
        raise ValueError(f"bounds must be (lo, hi) or {prob.dim} such pairs")
    axes = [np.linspace(lo, hi, resolution) for lo, hi in bounds]
    grids = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    keep = np.linalg.norm(pts, axis=1) >= exclude_radius
    pts = pts[keep]
    if pts.size == 0:
        return []
    norms = np.linalg.norm(mismatch(prob, pts), axis=-1)
    if norm_cutoff is not None:
        inside = norms <= norm_cutoff
        pts, norms = pts[inside], norms[inside]
    order = np.argsort(norms, kind="stable")
    return [pts[i] for i in order]


def distance_profile(
    params,
    point,
    n_min: int = -20,
    n_max: int = 20,
    escape_radius: float = 1e3,
) -> DistanceProfile:
    """Distances of ``f^n(point)`` from the origin for ``n_min <= n <= n_max``.

    Each direction stops early once an iterate leaves the escape radius;
    divergence is recorded by the truncated profile, not raised.
    """
    if n_min > 0 or n_max < 0:
        raise ValueError("the profile range must contain n = 0")
    point = np.asarray(point, dtype=float)
    entries = {0: float(np.linalg.norm(point))}
    for sign, stop in ((1, n_max), (-1, n_min)):
        p = point
        for n in range(sign, stop + sign, sign):
            try:
                p = params.apply(p) if sign > 0 else params.inverse(p)
            except HenonclinicError:
                break
            d = float(np.linalg.norm(p))
            if d > escape_radius:
                break
            entries[n] = d
    ordered = tuple(sorted(entries.items()))
    ns = [n for n, _ in ordered]
    ds = [d for _, d in ordered]
    k = int(np.argmin(ds))
    return DistanceProfile(entries=ordered, min_distance=ds[k], argmin=ns[k])
