import json
import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from henonclinic import exactcheck
from henonclinic import manifold2d as m2
from henonclinic.errors import SymmetryError
from henonclinic.maps import CubicMap2D

F = CubicMap2D(c=-2.5, delta=1.0)


@pytest.fixture(scope="module")
def unstable100():
    return m2.compute_series_2d(F, "unstable", 100)


@pytest.fixture(scope="module")
def stable100():
    return m2.compute_series_2d(F, "stable", 100)


class TestCoefficients:
    def test_low_orders_match_hand_solve(self):
        s = m2.compute_series_2d(F, "unstable", 5)
        s5 = math.sqrt(5.0)
        assert s.lam == -2.0
        assert s.coeffs_a[0] == 0.0 and s.coeffs_b[0] == 0.0
        assert np.allclose([s.coeffs_a[1], s.coeffs_b[1]], [1 / s5, -2 / s5], atol=1e-16)
        assert s.coeffs_a[2] == 0.0 and s.coeffs_b[2] == 0.0
        # order 3 by hand: 8 a3 + b3 = 0 and -a3 + (11/2) b3 = -3 b1^3
        # gives a3 = b1^3 / 15, b3 = -8 a3
        b1 = s.coeffs_b[1]
        assert abs(s.coeffs_a[3] - b1**3 / 15.0) < 1e-16
        assert abs(s.coeffs_b[3] + 8.0 * s.coeffs_a[3]) < 1e-15
        assert abs(abs(s.coeffs_a[3]) - 0.047702783519995504) < 1e-15
        assert abs(abs(s.coeffs_b[3]) - 0.381622268159964) < 1e-14

    def test_even_orders_vanish(self, unstable100):
        assert np.all(unstable100.coeffs_a[::2] == 0.0)
        assert np.all(unstable100.coeffs_b[::2] == 0.0)

    def test_first_recurrence_row(self, unstable100):
        s = unstable100
        n = np.arange(s.order + 1)
        assert np.allclose(
            s.coeffs_b, s.lam**n * s.coeffs_a, rtol=1e-13, atol=1e-300
        )

    def test_stable_branch_eigendata(self, stable100):
        s5 = math.sqrt(5.0)
        assert stable100.lam == -0.5
        assert np.allclose(
            [stable100.coeffs_a[1], stable100.coeffs_b[1]],
            [-2 / s5, 1 / s5],
            atol=1e-16,
        )

    def test_dissipative_branch(self):
        f = CubicMap2D(c=-2.5, delta=0.97)
        s = m2.compute_series_2d(f, "unstable", 30)
        errs = m2.conjugacy_error(s, np.linspace(-0.5, 0.5, 101))
        assert errs.max() < 1e-15

    def test_order_validation(self):
        with pytest.raises(ValueError):
            m2.compute_series_2d(F, "unstable", 0)
        with pytest.raises(ValueError):
            m2.compute_series_2d(F, "sideways", 10)


class TestRationalOracle:
    """Exact-arithmetic validation of the recurrence.

    The series is rebuilt over the rationals (stdlib fractions) and
    re-substituted into the defining equation by plain polynomial
    algebra; a second, fully independent recomposition uses sympy.
    """

    def test_recomposition_is_exactly_zero(self):
        a, b = exactcheck.rational_series_2d(
            Fraction(-5, 2), Fraction(1), Fraction(-2), (1, -2), 9
        )
        assert exactcheck.recompose_residual_2d(
            Fraction(-5, 2), Fraction(1), Fraction(-2), a, b, 9
        )

    def test_recomposition_dissipative(self):
        # delta = 9/16 keeps the whole eigenproblem rational (roots -9/4, -1/4)
        a, b = exactcheck.rational_series_2d(
            Fraction(-5, 2), Fraction(9, 16), Fraction(-9, 4), (1, Fraction(-9, 4)), 7
        )
        assert exactcheck.recompose_residual_2d(
            Fraction(-5, 2), Fraction(9, 16), Fraction(-9, 4), a, b, 7
        )

    def test_sympy_recomposition_agrees(self):
        a, b = exactcheck.rational_series_2d(
            Fraction(-5, 2), Fraction(1), Fraction(-2), (1, -2), 7
        )
        t = sp.symbols("t")
        A = sum(sp.Rational(x.numerator, x.denominator) * t**n for n, x in enumerate(a))
        B = sum(sp.Rational(x.numerator, x.denominator) * t**n for n, x in enumerate(b))
        lam = sp.Integer(-2)
        comp1 = sp.expand(B - A.subs(t, lam * t))
        comp2 = sp.expand(
            -A + sp.Rational(-5, 2) * B + 3 * B**3 - B.subs(t, lam * t)
        )
        for comp in (comp1, comp2):
            poly = sp.Poly(comp, t)
            assert all(
                coeff == 0
                for mono, coeff in zip(poly.monoms(), poly.coeffs())
                if mono[0] <= 7
            )

    def test_float_pipeline_matches_rational_oracle(self):
        a, b = exactcheck.rational_series_2d(
            Fraction(-5, 2), Fraction(1), Fraction(-2), (1, -2), 15
        )
        s = m2.compute_series_2d(F, "unstable", 15)
        scale = 1.0 / math.sqrt(5.0)  # unit eigenvector = (1, -2)/sqrt(5)
        for n in range(16):
            expect = float(a[n]) * scale**n
            assert abs(s.coeffs_a[n] - expect) < 1e-14 * max(1.0, abs(expect))
            expect_b = float(b[n]) * scale**n
            assert abs(s.coeffs_b[n] - expect_b) < 1e-14 * max(1.0, abs(expect_b))


class TestSymmetry:
    def test_swap_equals_recurrence_stable(self, unstable100, stable100):
        swapped = m2.series_from_symmetry(unstable100)
        assert swapped.lam == 1.0 / unstable100.lam
        assert np.array_equal(swapped.coeffs_a, unstable100.coeffs_b)
        assert np.array_equal(swapped.coeffs_b, unstable100.coeffs_a)
        assert np.abs(swapped.coeffs_a - stable100.coeffs_a).max() < 1e-12
        assert np.abs(swapped.coeffs_b - stable100.coeffs_b).max() < 1e-12

    def test_involution(self, unstable100):
        swapped = m2.series_from_symmetry(unstable100)
        back = m2.Series2D(
            branch="unstable",
            lam=1.0 / swapped.lam,
            coeffs_a=swapped.coeffs_b,
            coeffs_b=swapped.coeffs_a,
            params=swapped.params,
            order=swapped.order,
        )
        assert np.array_equal(back.coeffs_a, unstable100.coeffs_a)
        assert np.array_equal(back.coeffs_b, unstable100.coeffs_b)

    def test_requires_symplectic_case(self):
        f = CubicMap2D(c=-2.5, delta=0.99)
        s = m2.compute_series_2d(f, "unstable", 10)
        with pytest.raises(SymmetryError):
            m2.series_from_symmetry(s)

    def test_requires_unstable_branch(self, stable100):
        with pytest.raises(SymmetryError):
            m2.series_from_symmetry(stable100)


class TestEvaluation:
    def test_origin(self, unstable100):
        assert np.all(m2.evaluate(unstable100, 0.0) == 0.0)

    def test_oddness(self, unstable100):
        ts = np.linspace(-1.5, 1.5, 101)
        pts = m2.evaluate(unstable100, ts)
        neg = m2.evaluate(unstable100, -ts)
        assert np.abs(pts + neg).max() < 1e-14

    def test_tangent_at_zero_is_eigenvector(self, unstable100):
        tan = m2.tangent(unstable100, 0.0)
        assert np.array_equal(
            tan, [unstable100.coeffs_a[1], unstable100.coeffs_b[1]]
        )

    def test_tangent_matches_finite_differences(self, unstable100):
        h = 1e-6
        fd = (
            m2.evaluate(unstable100, 0.5 + h) - m2.evaluate(unstable100, 0.5 - h)
        ) / (2 * h)
        assert np.abs(m2.tangent(unstable100, 0.5) - fd).max() < 1e-7

    def test_tangent_parity(self, unstable100):
        # derivative of an odd curve is even
        for t in (0.3, 0.9, 1.4):
            assert (
                np.abs(
                    m2.tangent(unstable100, t) - m2.tangent(unstable100, -t)
                ).max()
                < 1e-13
            )

    def test_eigenvector_rescaling_is_reparametrization(self, unstable100):
        scale = 2.0
        n = np.arange(unstable100.order + 1, dtype=float)
        rescaled = m2.Series2D(
            branch="unstable",
            lam=unstable100.lam,
            coeffs_a=unstable100.coeffs_a * scale**n,
            coeffs_b=unstable100.coeffs_b * scale**n,
            params=F,
            order=unstable100.order,
        )
        # rescaled series still solves the conjugacy ...
        errs = m2.conjugacy_error(rescaled, np.linspace(-0.7, 0.7, 101))
        assert errs.max() < 1e-13
        # ... and traces the same point set at rescaled arguments
        ts = np.linspace(-0.7, 0.7, 51)
        assert (
            np.abs(
                m2.evaluate(rescaled, ts) - m2.evaluate(unstable100, scale * ts)
            ).max()
            < 1e-12
        )


class TestValidityProfile:
    def test_order_34_certifies_published_radius(self):
        s = m2.compute_series_2d(F, "unstable", 34)
        prof = m2.validity_profile(s, 1e-15, 1.0, 1000)
        assert prof.tau >= 0.75
        assert prof.tau <= 1.0

    def test_order_100_certifies_published_radius(self, unstable100):
        prof = m2.validity_profile(unstable100, 2e-14, 1.7, 1000)
        assert prof.tau >= 1.5
        errs = m2.conjugacy_error(unstable100, np.linspace(-1.6, 1.6, 1601))
        assert errs.max() < 4e-14

    def test_residual_below_epsilon_inside_tau(self, unstable100):
        prof = m2.validity_profile(unstable100, 2e-14, 1.7, 1000)
        inside = np.abs(prof.samples[:, 0]) <= prof.tau
        assert np.all(prof.samples[inside, 1] < prof.epsilon)

    def test_impossible_epsilon_gives_zero_radius(self, unstable100):
        # only the endpoints are sampled; both carry a nonzero rounding
        # error, so nothing certifies under an impossibly small epsilon
        prof = m2.validity_profile(unstable100, 1e-300, 1.6, 2)
        assert prof.tau == 0.0

    def test_input_validation(self, unstable100):
        with pytest.raises(ValueError):
            m2.validity_profile(unstable100, -1.0, 1.0)
        with pytest.raises(ValueError):
            m2.validity_profile(unstable100, 1e-15, 1.0, n_samples=1)


class TestSerialization:
    def test_round_trip(self, unstable100):
        doc = unstable100.to_dict()
        text = json.dumps(doc)
        back = m2.Series2D.from_dict(json.loads(text))
        assert back.branch == unstable100.branch
        assert back.lam == unstable100.lam
        assert back.order == unstable100.order
        assert back.params == unstable100.params
        assert np.array_equal(back.coeffs_a, unstable100.coeffs_a)
        assert np.array_equal(back.coeffs_b, unstable100.coeffs_b)

    def test_coefficients_read_only(self, unstable100):
        with pytest.raises(ValueError):
            unstable100.coeffs_a[3] = 1.0
