"""Orbit iteration and figure-data generators.

Covers phase portraits with escape detection, the three-strip horseshoe
rendering for the rescaled cubic map on the unit square, phase-space
slices of the 4-D map, and uniform parameter-grid meshes of manifold
series for visualization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import manifold2d as m2
from . import manifold4d as m4
from .errors import HenonclinicError
from .manifold2d import Series2D
from .manifold4d import Series4D

# elliptic period-2 coordinate of the planar map at c = -5/2, delta = 1:
# the cycle is (1/sqrt6, -1/sqrt6) <-> (-1/sqrt6, 1/sqrt6)
ELLIPTIC_X = 1.0 / math.sqrt(6.0)
ELLIPTIC_Y = -1.0 / math.sqrt(6.0)


@dataclass(frozen=True)
class OrbitRecord:
    """Consecutive iterates of one seed, truncated once it escapes."""

    points: np.ndarray = field(repr=False)
    escaped: bool
    escape_index: int | None


@dataclass(frozen=True)
class SlicePoint:
    """Projected coordinates of an orbit point satisfying the slice condition."""

    x1: float
    y1: float
    x2: float
    source_index: int


@dataclass(frozen=True)
class ManifoldMesh:
    """Series evaluated on a uniform parameter grid, row-major.

    For a planar series ``param_values`` has shape (rows, 1) holding t and
    ``points`` (rows, 1, 2); for a surface series they are (rows, cols, 2)
    for (u, v) and (rows, cols, 4), with the last phase-space coordinate
    available as a scalar field for color encoding.
    """

    param_values: np.ndarray = field(repr=False)
    points: np.ndarray = field(repr=False)
    bounds: tuple


def iterate_orbit(params, start, n_steps: int, escape_radius: float = 1e3) -> OrbitRecord:
    """Iterate the map from ``start``, stopping early beyond ``escape_radius``."""
    p = np.asarray(start, dtype=float)
    points = [p]
    escaped = False
    escape_index = None
    for i in range(1, n_steps + 1):
        try:
            p = params.apply(p)
        except HenonclinicError:
            escaped = True
            escape_index = i - 1
            break
        points.append(p)
        if np.linalg.norm(p) > escape_radius:
            escaped = True
            escape_index = i
            break
    return OrbitRecord(
        points=np.asarray(points), escaped=escaped, escape_index=escape_index
    )


def _rescaled_cubic(a: float, pts: np.ndarray) -> np.ndarray:
    """Forward step of the rescaled map (y, -x + 3 a^3 y^3 - (5/2) a y)."""
    x, y = pts[..., 0], pts[..., 1]
    return np.stack([y, -x + 3.0 * a**3 * (y * y * y) - 2.5 * a * y], axis=-1)


def _rescaled_cubic_inverse(a: float, pts: np.ndarray) -> np.ndarray:
    x, y = pts[..., 0], pts[..., 1]
    return np.stack([3.0 * a**3 * (x * x * x) - 2.5 * a * x - y, x], axis=-1)


def horseshoe_strips(a: float = 5.0, grid_n: int = 1000):
    """Grid renderings of the first horseshoe-construction step on Q = [-1/2, 1/2]^2.

    Returns three point sets: (i) the grid of Q itself, (ii) the grid
    points lying in ``Q & f(Q)`` (three vertical strips), and (iii) those
    additionally in ``f^-1(Q)``, i.e. points surviving one forward and one
    backward iteration.  The area-preserving rescaled cubic map is used,
    so membership in ``f(Q)`` is tested through the explicit inverse.
    """
    if grid_n < 2:
        raise ValueError("grid_n must be >= 2")
    axis = np.linspace(-0.5, 0.5, grid_n)
    gx, gy = np.meshgrid(axis, axis, indexing="ij")
    q = np.stack([gx.ravel(), gy.ravel()], axis=-1)
    in_image = np.max(np.abs(_rescaled_cubic_inverse(a, q)), axis=-1) <= 0.5
    in_preimage = np.max(np.abs(_rescaled_cubic(a, q)), axis=-1) <= 0.5
    return q, q[in_image], q[in_image & in_preimage]


def count_vertical_bands(
    points: np.ndarray, n_bins: int = 100, min_fraction: float = 0.5
) -> int:
    """Number of vertical bands in a point set via an x-projection histogram.

    A bin counts as band interior when it holds at least ``min_fraction``
    of the fullest bin (half maximum by default); the strips thin out
    toward their edges, where only a short column segment survives, and
    the relative floor separates the full-height strips from the thin
    slivers connecting them along the square's edge.
    """
    if len(points) == 0:
        return 0
    hist, _ = np.histogram(points[:, 0], bins=n_bins, range=(-0.5, 0.5))
    on = hist >= min_fraction * hist.max()
    return int(np.sum(on[1:] & ~on[:-1]) + int(on[0]))


def band_extents(
    points: np.ndarray, n_bins: int = 100, min_fraction: float = 0.5
) -> list[tuple[float, float]]:
    """x-intervals of the bands found by :func:`count_vertical_bands`."""
    if len(points) == 0:
        return []
    hist, edges = np.histogram(points[:, 0], bins=n_bins, range=(-0.5, 0.5))
    on = hist >= min_fraction * hist.max()
    extents = []
    start = None
    for i, flag in enumerate(on):
        if flag and start is None:
            start = edges[i]
        elif not flag and start is not None:
            extents.append((start, edges[i]))
            start = None
    if start is not None:
        extents.append((start, edges[-1]))
    return extents


def slice_4d(
    params,
    seeds,
    n_steps: int,
    y2_star: float = ELLIPTIC_Y,
    tolerance: float = 1e-4,
    escape_radius: float = 1e3,
) -> list[SlicePoint]:
    """Collect (x1, y1, x2) of orbit points with ``|y2 - y2_star| < tolerance``.

    Seeds are processed in order and each orbit stops early on escape, so
    the output is deterministic.
    """
    if tolerance <= 0.0:
        raise ValueError("tolerance must be positive")
    out: list[SlicePoint] = []
    for seed in seeds:
        p = np.asarray(seed, dtype=float)
        for n in range(n_steps + 1):
            if abs(p[3] - y2_star) < tolerance:
                out.append(SlicePoint(p[0], p[1], p[2], n))
            if n == n_steps:
                break
            try:
                p = params.apply(p)
            except HenonclinicError:
                break
            if np.linalg.norm(p) > escape_radius:
                break
    return out


def extend_manifold(
    series,
    mapping,
    iterations: int = 6,
    t_max: float = 0.42,
    n_points: int = 500,
) -> list[np.ndarray]:
    """Grow a planar manifold branch by iterating a fundamental segment.

    The segment ``t in [t_max/lam, t_max]`` (which straddles 0 for the
    inverse-hyperbolic eigenvalues here) is evaluated from the series and
    then pushed ``iterations`` times with the map (unstable branch) or its
    inverse (stable branch); consecutive segments join up by construction.
    Both the segment length and the iterate count are plot parameters.
    """
    ts = np.linspace(t_max / series.lam, t_max, n_points)
    segment = m2.evaluate(series, ts)
    out = [segment]
    advance = mapping.apply if series.branch == "unstable" else mapping.inverse
    for _ in range(iterations):
        segment = advance(segment)
        out.append(segment)
    return out


def sample_manifold_grid(series, bounds, resolution) -> ManifoldMesh:
    """Evaluate a manifold series on a uniform parameter grid.

    For a planar series ``bounds`` is one ``(lo, hi)`` interval; for a
    surface series either one interval reused for u and v or a pair of
    intervals, with ``resolution`` points per axis.
    """
    if isinstance(series, Series2D):
        lo, hi = bounds
        ts = np.linspace(lo, hi, resolution)
        pts = m2.evaluate(series, ts)
        return ManifoldMesh(
            param_values=ts[:, None, None],
            points=pts[:, None, :],
            bounds=(float(lo), float(hi)),
        )
    if isinstance(series, Series4D):
        bounds = np.asarray(bounds, dtype=float)
        if bounds.shape == (2,):
            bounds = np.stack([bounds, bounds])
        (ulo, uhi), (vlo, vhi) = bounds
        us = np.linspace(ulo, uhi, resolution)
        vs = np.linspace(vlo, vhi, resolution)
        gu, gv = np.meshgrid(us, vs, indexing="ij")
        pts = m4.evaluate(series, gu, gv)
        return ManifoldMesh(
            param_values=np.stack([gu, gv], axis=-1),
            points=pts,
            bounds=((float(ulo), float(uhi)), (float(vlo), float(vhi))),
        )
    raise TypeError(f"unsupported series type {type(series).__name__}")
