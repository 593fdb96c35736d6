import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from henonclinic.errors import (
    NonHyperbolicError,
    NonInvertibleError,
    NonSaddleError,
)
from henonclinic.maps import CubicMap2D, CubicMap4D

F2 = CubicMap2D(c=-2.5, delta=1.0)
F4 = CubicMap4D(c=-2.5, delta=1.0, b=0.1)
RNG = np.random.default_rng(7)


def fd_jacobian(func, pt, h=1e-6):
    pt = np.asarray(pt, dtype=float)
    cols = []
    for i in range(pt.size):
        e = np.zeros_like(pt)
        e[i] = h
        cols.append((func(pt + e) - func(pt - e)) / (2.0 * h))
    return np.stack(cols, axis=-1)


class TestMap2D:
    def test_fixed_point_origin(self):
        assert np.all(F2.apply([0.0, 0.0]) == 0.0)

    def test_hand_substitution(self):
        # second component: -1*1 + (-2.5)*1 + 3*1 = -0.5
        assert np.allclose(F2.apply([1.0, 1.0]), [1.0, -0.5], atol=1e-15)

    def test_odd_symmetry(self):
        pts = RNG.uniform(-1.5, 1.5, (200, 2))
        assert np.array_equal(F2.apply(-pts), -F2.apply(pts))

    def test_inverse_examples(self):
        assert np.allclose(F2.inverse([1.0, -0.5]), [1.0, 1.0], atol=1e-15)
        assert np.all(F2.inverse([0.0, 0.0]) == 0.0)

    def test_inverse_round_trip(self):
        pts = RNG.uniform(-1.0, 1.0, (1000, 2))
        err = np.abs(F2.inverse(F2.apply(pts)) - pts)
        assert err.max() < 1e-12

    def test_delta_zero_rejected(self):
        with pytest.raises(NonInvertibleError):
            CubicMap2D(c=-2.5, delta=0.0)

    def test_jacobian_at_origin(self):
        assert np.array_equal(
            F2.jacobian([0.0, 0.0]), [[0.0, 1.0], [-1.0, -2.5]]
        )

    def test_jacobian_determinant_is_delta(self):
        for delta in (1.0, 0.97, 0.5):
            f = CubicMap2D(c=-2.5, delta=delta)
            for pt in RNG.uniform(-2, 2, (50, 2)):
                assert abs(np.linalg.det(f.jacobian(pt)) - delta) < 1e-14

    def test_jacobian_matches_finite_differences(self):
        pt = [0.3, -0.4]
        assert np.abs(F2.jacobian(pt) - fd_jacobian(F2.apply, pt)).max() < 1e-6

    def test_inverse_jacobian_matches_finite_differences(self):
        f = CubicMap2D(c=-2.5, delta=0.97)
        pt = [0.4, 0.2]
        fd = fd_jacobian(f.inverse, pt)
        assert np.abs(f.inverse_jacobian(pt) - fd).max() < 1e-6

    def test_fixed_points(self):
        pts = F2.fixed_points()
        r = math.sqrt((1.0 - (-2.5) + 1.0) / 3.0)
        assert len(pts) == 3
        assert np.allclose(pts[1], [r, r]) and np.allclose(pts[2], [-r, -r])
        for pt in pts:
            assert np.linalg.norm(F2.apply(pt) - pt) < 1e-12

    def test_fixed_points_origin_only(self):
        # 1 - c + delta <= 0 needs c >= 1 + delta; keep the saddle condition
        f = CubicMap2D(c=2.5, delta=1.0)
        assert len(f.fixed_points()) == 1

    def test_eigen_origin(self):
        spec = F2.eigen_origin()
        assert spec.unstable_eigenvalues == (-2.0,)
        assert spec.stable_eigenvalues == (-0.5,)
        s5 = math.sqrt(5.0)
        vu, vs = spec.unstable_eigenvectors[0], spec.stable_eigenvectors[0]
        assert np.allclose(np.abs(vu), [1 / s5, 2 / s5], atol=1e-15)
        assert np.allclose(np.abs(vs), [2 / s5, 1 / s5], atol=1e-15)
        assert abs(spec.unstable_eigenvalues[0] * spec.stable_eigenvalues[0] - 1.0) < 1e-14

    def test_eigen_residual(self):
        for delta in (1.0, 0.96):
            f = CubicMap2D(c=-2.5, delta=delta)
            spec = f.eigen_origin()
            jac = f.jacobian([0.0, 0.0])
            for lam, vec in (
                (spec.unstable_eigenvalues[0], spec.unstable_eigenvectors[0]),
                (spec.stable_eigenvalues[0], spec.stable_eigenvectors[0]),
            ):
                assert np.linalg.norm(jac @ vec - lam * vec) < 1e-12
                assert abs(np.linalg.norm(vec) - 1.0) < 1e-14

    def test_non_saddle_rejected(self):
        with pytest.raises(NonSaddleError):
            CubicMap2D(c=-1.0, delta=1.0)

    def test_conjugate_to_inverse_at_delta_one(self):
        pts = RNG.uniform(-1.2, 1.2, (300, 2))
        lhs = F2.apply(pts[:, ::-1])[:, ::-1]
        assert np.abs(lhs - F2.inverse(pts)).max() < 1e-12

    def test_period_two_cycle(self):
        e = 1.0 / math.sqrt(6.0)
        p = np.array([e, -e])
        q = F2.apply(p)
        assert np.linalg.norm(q - np.array([-e, e])) < 1e-12
        assert np.linalg.norm(F2.apply(q) - p) < 1e-12


class TestMap4D:
    def test_origin_fixed(self):
        assert np.all(F4.apply(np.zeros(4)) == 0.0)

    def test_uncoupled_is_product(self):
        # association order differs slightly between the two code paths
        f0 = CubicMap4D(c=-2.5, delta=1.0, b=0.0)
        pts = RNG.uniform(-1, 1, (100, 4))
        out = f0.apply(pts)
        assert np.abs(out[:, :2] - F2.apply(pts[:, :2])).max() < 1e-15
        assert np.abs(out[:, 2:] - F2.apply(pts[:, 2:])).max() < 1e-15
        inv = f0.inverse(pts)
        assert np.abs(inv[:, :2] - F2.inverse(pts[:, :2])).max() < 1e-15

    def test_swap_symmetry(self):
        pts = RNG.uniform(-1, 1, (100, 4))
        swap = [2, 3, 0, 1]
        assert np.array_equal(F4.apply(pts[:, swap]), F4.apply(pts)[:, swap])

    def test_odd_symmetry(self):
        pts = RNG.uniform(-1, 1, (100, 4))
        assert np.array_equal(F4.apply(-pts), -F4.apply(pts))

    def test_inverse_round_trip(self):
        f = CubicMap4D(c=-2.5, delta=0.997, b=0.1)
        pts = RNG.uniform(-1, 1, (1000, 4))
        assert np.abs(f.inverse(f.apply(pts)) - pts).max() < 1e-11
        assert np.abs(f.apply(f.inverse(pts)) - pts).max() < 1e-11

    def test_jacobian_determinant_symbolic(self):
        # the exact determinant of the differential is delta^2, independent
        # of the state and of b
        x1, y1, x2, y2, c, d, b = sympy.symbols("x1 y1 x2 y2 c d b")
        image = sympy.Matrix(
            [
                y1,
                c * y1 - d * x1 + 3 * y1**3 + b * (y1 - y2),
                y2,
                c * y2 - d * x2 + 3 * y2**3 - b * (y1 - y2),
            ]
        )
        jac = image.jacobian([x1, y1, x2, y2])
        assert sympy.simplify(jac.det() - d**2) == 0

    def test_jacobian_determinant_numeric(self):
        for pt in RNG.uniform(-2, 2, (100, 4)):
            assert abs(np.linalg.det(F4.jacobian(pt)) - 1.0) < 1e-12
        f = CubicMap4D(c=-2.5, delta=0.9, b=0.2)
        for pt in RNG.uniform(-2, 2, (20, 4)):
            assert abs(np.linalg.det(f.jacobian(pt)) - 0.81) < 1e-12

    def test_jacobian_matches_finite_differences(self):
        pt = RNG.uniform(-1, 1, 4)
        assert np.abs(F4.jacobian(pt) - fd_jacobian(F4.apply, pt)).max() < 1e-6
        assert (
            np.abs(F4.inverse_jacobian(pt) - fd_jacobian(F4.inverse, pt)).max()
            < 1e-6
        )

    def test_block_structure_at_b_zero(self):
        f0 = CubicMap4D(c=-2.5, delta=1.0, b=0.0)
        jac = f0.jacobian(np.zeros(4))
        block = F2.jacobian([0.0, 0.0])
        assert np.array_equal(jac[:2, :2], block)
        assert np.array_equal(jac[2:, 2:], block)
        assert np.all(jac[:2, 2:] == 0.0) and np.all(jac[2:, :2] == 0.0)

    def test_eigen_uncoupled(self):
        spec = CubicMap4D(c=-2.5, delta=1.0, b=0.0).eigen_origin()
        assert spec.unstable_eigenvalues == (-2.0, -2.0)
        assert spec.stable_eigenvalues == (-0.5, -0.5)

    def test_eigen_coupled_against_characteristic_polynomial(self):
        # oracle: roots of det(J - lambda I) from the companion polynomial
        spec = F4.eigen_origin()
        char_roots = np.sort(np.linalg.eigvals(F4.jacobian(np.zeros(4))).real)
        ours = np.sort(spec.unstable_eigenvalues + spec.stable_eigenvalues)
        assert np.abs(char_roots - ours).max() < 1e-12
        # quadratic-root values frozen from the antisymmetric mode
        # lambda^2 + 2.3 lambda + 1 = 0
        assert abs(spec.unstable_eigenvalues[1] - (-1.717890834580027)) < 1e-14
        assert abs(spec.stable_eigenvalues[0] - (-0.5821091654199727)) < 1e-14

    def test_eigen_ordering_and_residual(self):
        spec = F4.eigen_origin()
        mags_u = [abs(x) for x in spec.unstable_eigenvalues]
        mags_s = [abs(x) for x in spec.stable_eigenvalues]
        assert mags_u == sorted(mags_u, reverse=True)
        assert mags_s == sorted(mags_s, reverse=True)
        assert all(m > 1 for m in mags_u) and all(m < 1 for m in mags_s)
        jac = F4.jacobian(np.zeros(4))
        for lam, vec in zip(
            spec.unstable_eigenvalues + spec.stable_eigenvalues,
            spec.unstable_eigenvectors + spec.stable_eigenvectors,
        ):
            assert np.linalg.norm(jac @ vec - lam * vec) < 1e-12
            assert abs(np.linalg.norm(vec) - 1.0) < 1e-14

    def test_eigen_product_is_delta_squared(self):
        f = CubicMap4D(c=-2.5, delta=0.99, b=0.07)
        spec = f.eigen_origin()
        prod = np.prod(spec.unstable_eigenvalues + spec.stable_eigenvalues)
        assert abs(prod - 0.99**2) < 1e-12

    def test_non_hyperbolic_rejected(self):
        with pytest.raises(NonHyperbolicError):
            CubicMap4D(c=-1.0, delta=1.0, b=0.0)
        with pytest.raises(NonHyperbolicError):
            CubicMap4D(c=-2.5, delta=1.0, b=-0.1)


@settings(max_examples=60, deadline=None)
@given(
    x=st.floats(-2, 2),
    y=st.floats(-2, 2),
    delta=st.floats(0.1, 1.0),
)
def test_round_trip_property(x, y, delta):
    f = CubicMap2D(c=-2.5, delta=delta)
    pt = np.array([x, y])
    back = f.inverse(f.apply(pt))
    assert np.abs(back - pt).max() < 1e-11 * max(1.0, np.abs(pt).max())


@settings(max_examples=60, deadline=None)
@given(
    coords=st.lists(st.floats(-2, 2), min_size=4, max_size=4),
    b=st.floats(0.0, 0.2),
)
def test_odd_symmetry_property_4d(coords, b):
    f = CubicMap4D(c=-2.5, delta=1.0, b=b)
    pt = np.array(coords)
    assert np.array_equal(f.apply(-pt), -f.apply(pt))
