"""Two-parameter power series for the origin's 2-D invariant manifolds.

Each branch of the 4-D map is an immersed surface
``S(u, v) = (sum a1_nm u^n v^m, ..., sum a4_nm u^n v^m)`` solving
``f(S(u, v)) = S(lambda_A u, lambda_B v)``, where ``(lambda_A,
lambda_B)`` are the branch eigenvalues of the symmetric and
antisymmetric decoupling modes (in that order, so the series deforms
continuously from the uncoupled product structure at ``b = 0``).
Coefficients are solved degree by degree: each ``(n, m)`` is a 4x4
linear system whose right-hand side is a cubic convolution of strictly
lower-degree coefficients of the second and fourth coordinate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ResonanceError
from .maps import CubicMap4D

RESONANCE_TOL = 1e-12

# 17 rays covering the closed upper half-turn, step pi/16
DEFAULT_THETAS = tuple(k * math.pi / 16.0 for k in range(17))


@dataclass(frozen=True)
class Series4D:
    """Truncated two-variable manifold series of one branch of the 4-D map.

    ``coeffs`` has shape (4, order+1, order+1); entry ``[i, n, m]`` is the
    ``u^n v^m`` coefficient of coordinate ``i`` and is zero for
    ``n + m > order``.
    """

    branch: str
    lambdas: tuple[float, float]
    coeffs: np.ndarray = field(repr=False)
    params: CubicMap4D
    order: int

    def __post_init__(self):
        if self.branch not in ("unstable", "stable"):
            raise ValueError(f"unknown branch {self.branch!r}")
        arr = np.array(self.coeffs, dtype=float)
        n1 = self.order + 1
        if arr.shape != (4, n1, n1):
            raise ValueError(f"coeffs must have shape (4, {n1}, {n1})")
        if np.any(arr[:, 0, 0] != 0.0):
            raise ValueError("series must be rooted at the origin")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)
        object.__setattr__(self, "lambdas", tuple(float(x) for x in self.lambdas))

    def to_dict(self) -> dict:
        # degree-major flattening: ascending total degree, then ascending m
        n1 = self.order + 1
        flat = [[] for _ in range(4)]
        for d in range(n1):
            for m in range(d + 1):
                for i in range(4):
                    flat[i].append(float(self.coeffs[i, d - m, m]))
        return {
            "branch": self.branch,
            "lambdas": list(self.lambdas),
            "order": self.order,
            "coeffs": {f"a{i + 1}": flat[i] for i in range(4)},
            "params": {
                "c": self.params.c,
                "delta": self.params.delta,
                "b": self.params.b,
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Series4D":
        order = data["order"]
        grids = np.zeros((4, order + 1, order + 1))
        pos = 0
        for d in range(order + 1):
            for m in range(d + 1):
                for i in range(4):
                    grids[i, d - m, m] = data["coeffs"][f"a{i + 1}"][pos]
                pos += 1
        return cls(
            branch=data["branch"],
            lambdas=tuple(data["lambdas"]),
            coeffs=grids,
            params=CubicMap4D(**data["params"]),
            order=order,
        )


@dataclass(frozen=True)
class PolarValidityProfile:
    """Conjugacy error sampled along rays ``(u, v) = r (cos t, sin t)``.

    ``r_valid`` is the largest sampled radius below which every stored ray
    keeps its error under ``epsilon``.
    """

    thetas: tuple[float, ...]
    radii: np.ndarray = field(repr=False)
    errors: np.ndarray = field(repr=False)
    r_valid: float
    epsilon: float


def _diag_slice(grid: np.ndarray, d: int) -> np.ndarray:
    """Coefficients of total degree ``d`` as a vector indexed by n."""
    n = np.arange(d + 1)
    return grid[n, d - n]


def compute_series_4d(params: CubicMap4D, branch: str, order: int) -> Series4D:
    """Solve the two-variable conjugacy coefficients up to total degree ``order``.

    The cubic source terms are built per total degree from two successive
    polynomial products (square, then cube) of the stored coefficient
    slices, so the whole construction costs O(order^4).
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    sym, anti = params.mode_pairs()
    if branch == "unstable":
        lam_a, lam_b = sym.lambda_u, anti.lambda_u
        vec_a, vec_b = sym.vector_u, anti.vector_u
    elif branch == "stable":
        lam_a, lam_b = sym.lambda_s, anti.lambda_s
        vec_a, vec_b = sym.vector_s, anti.vector_s
    else:
        raise ValueError(f"unknown branch {branch!r}")

    c, d_, b = params.c, params.delta, params.b
    n1 = order + 1
    coeffs = np.zeros((4, n1, n1))
    coeffs[:, 1, 0] = vec_a
    coeffs[:, 0, 1] = vec_b

    # degree-d slices of a2 and a4 and of their squares, filled as we go
    sl2 = {1: _diag_slice(coeffs[1], 1)}
    sl4 = {1: _diag_slice(coeffs[3], 1)}
    sq2: dict[int, np.ndarray] = {}
    sq4: dict[int, np.ndarray] = {}

    for d in range(2, n1):
        for e, sl, sq in ((d - 1, sl2, sq2), (d - 1, sl4, sq4)):
            if e >= 2:
                acc = np.zeros(e + 1)
                for e1 in range(1, e):
                    acc += np.convolve(sl[e1], sl[e - e1])
                sq[e] = acc
        cube2 = np.zeros(d + 1)
        cube4 = np.zeros(d + 1)
        for e in range(2, d):
            cube2 += np.convolve(sq2[e], sl2[d - e])
            cube4 += np.convolve(sq4[e], sl4[d - e])

        for n in range(d, -1, -1):
            m = d - n
            lam_nm = lam_a**n * lam_b**m
            q_sym = lam_nm * lam_nm - c * lam_nm + d_
            q_anti = lam_nm * lam_nm - (c + 2.0 * b) * lam_nm + d_
            if abs(q_sym * q_anti) < RESONANCE_TOL:
                raise ResonanceError(
                    f"resonant degree (n, m) = ({n}, {m}): lam_A^n lam_B^m = "
                    f"{lam_nm} lies in the origin spectrum",
                    order=(n, m),
                )
            mat = np.array(
                [
                    [-lam_nm, 1.0, 0.0, 0.0],
                    [-d_, c + b - lam_nm, 0.0, -b],
                    [0.0, 0.0, -lam_nm, 1.0],
                    [0.0, -b, -d_, c + b - lam_nm],
                ]
            )
            rhs = np.array([0.0, -3.0 * cube2[n], 0.0, -3.0 * cube4[n]])
            coeffs[:, n, m] = np.linalg.solve(mat, rhs)

        sl2[d] = _diag_slice(coeffs[1], d)
        sl4[d] = _diag_slice(coeffs[3], d)

    return Series4D(branch, (lam_a, lam_b), coeffs, params, order)


def _eval_grids(grids: np.ndarray, u, v):
    """Nested Horner over stacked coefficient grids; broadcasts over arrays.

    ``grids`` has shape (k, rows, cols); the result has shape (k,) plus
    the broadcast shape of ``u`` and ``v``.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    k, rows, cols = grids.shape
    expand = (slice(None), slice(None)) + (None,) * u.ndim
    acc = np.zeros((k, rows) + u.shape)
    for m in range(cols - 1, -1, -1):
        acc = acc * v + grids[:, :, m][expand]
    out = np.zeros((k,) + u.shape)
    for n in range(rows - 1, -1, -1):
        out = out * u + acc[:, n]
    return out


def evaluate(s: Series4D, u, v):
    """Series point at ``(u, v)``; broadcasts over equal-shaped arrays."""
    return np.moveaxis(_eval_grids(s.coeffs, u, v), 0, -1)


def jacobian(s: Series4D, u: float, v: float) -> np.ndarray:
    """4x2 matrix of the partial derivatives (dS/du, dS/dv) at ``(u, v)``."""
    degrees = np.arange(1, s.order + 1, dtype=float)
    du = _eval_grids(s.coeffs[:, 1:, :] * degrees[None, :, None], u, v)
    dv = _eval_grids(s.coeffs[:, :, 1:] * degrees[None, None, :], u, v)
    return np.column_stack([du, dv])


def conjugacy_error(s: Series4D, u, v) -> np.ndarray:
    """``||f(S(u, v)) - S(lam_A u, lam_B v)||`` at each parameter pair."""
    u = np.asarray(u, dtype=float)
    lam_a, lam_b = s.lambdas
    mismatch = s.params.apply(evaluate(s, u, v)) - evaluate(
        s, lam_a * u, lam_b * v
    )
    return np.linalg.norm(np.atleast_2d(mismatch), axis=-1).reshape(u.shape)


def validity_profile(
    s: Series4D,
    epsilon: float,
    r_max: float = 2.0,
    thetas: tuple[float, ...] = DEFAULT_THETAS,
    n_samples: int = 400,
    threads: int = 1,
) -> PolarValidityProfile:
    """Sample the conjugacy error along polar rays and certify a common radius.

    Rays are independent, so with ``threads > 1`` they are evaluated by a
    thread pool; results are assembled by ray index either way.
    """
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    radii = np.linspace(0.0, r_max, n_samples)
    errors = np.empty((len(thetas), n_samples))

    def _ray(theta: float) -> np.ndarray:
        return conjugacy_error(
            s, radii * math.cos(theta), radii * math.sin(theta)
        )

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            for k, row in enumerate(pool.map(_ray, thetas)):
                errors[k] = row
    else:
        for k, theta in enumerate(thetas):
            errors[k] = _ray(theta)
    worst = np.maximum.accumulate(errors.max(axis=0))
    below = np.nonzero(worst < epsilon)[0]
    r_valid = float(radii[below[-1]]) if below.size else 0.0
    return PolarValidityProfile(
        thetas=tuple(thetas),
        radii=radii,
        errors=errors,
        r_valid=r_valid,
        epsilon=epsilon,
    )
