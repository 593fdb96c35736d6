"""Exact rational verification of the series construction.

For parameter choices with rational eigendata the conjugacy
coefficients are rational, so the truncated series can be rebuilt in
exact arithmetic and re-substituted into ``f o S - S o Lambda`` by
plain polynomial algebra.  Every coefficient of total degree <= N must
vanish identically; this validates the recurrence independently of the
floating-point pipeline.
"""

from __future__ import annotations

from fractions import Fraction


def _solve_linear(matrix, rhs):
    """Gaussian elimination over the rationals for a small square system."""
    n = len(rhs)
    aug = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = Fraction(1, 1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def _poly_mul(p, q, order):
    out = {}
    for ka, va in p.items():
        for kb, vb in q.items():
            k = tuple(a + b for a, b in zip(ka, kb))
            if sum(k) <= order:
                out[k] = out.get(k, Fraction(0)) + va * vb
    return {k: v for k, v in out.items() if v != 0}


def _poly_add(p, q):
    out = dict(p)
    for k, v in q.items():
        out[k] = out.get(k, Fraction(0)) + v
    return {k: v for k, v in out.items() if v != 0}


def _poly_scale(p, s):
    return {k: v * s for k, v in p.items() if v * s != 0}


def rational_series_2d(c: Fraction, delta: Fraction, lam: Fraction, vec, order: int):
    """Conjugacy coefficients over the rationals for the planar map.

    ``vec`` is the (rational) order-1 coefficient pair; scaling it only
    rescales higher orders, so no normalization is required.
    """
    a = [Fraction(0)] * (order + 1)
    b = [Fraction(0)] * (order + 1)
    a[1], b[1] = Fraction(vec[0]), Fraction(vec[1])
    for n in range(2, order + 1):
        source = Fraction(0)
        for i in range(1, n - 1):
            for j in range(1, n - i):
                k = n - i - j
                if 1 <= k:
                    source += b[i] * b[j] * b[k]
        source *= -3
        lam_n = lam**n
        a[n], b[n] = _solve_linear(
            [[-lam_n, Fraction(1)], [-delta, c - lam_n]],
            [Fraction(0), source],
        )
    return a, b


def recompose_residual_2d(c, delta, lam, a, b, order: int) -> bool:
    """True when ``f o S - S o (lam .)`` vanishes through ``order`` exactly."""
    c, delta, lam = Fraction(c), Fraction(delta), Fraction(lam)
    pa = {(n,): a[n] for n in range(order + 1) if a[n] != 0}
    pb = {(n,): b[n] for n in range(order + 1) if b[n] != 0}
    pb2 = _poly_mul(pb, pb, order)
    pb3 = _poly_mul(pb2, pb, order)
    # first component: B(t) - A(lam t)
    comp1 = _poly_add(pb, {(n,): -a[n] * lam**n for n in range(order + 1)})
    # second component: -delta A(t) + c B(t) + 3 B(t)^3 - B(lam t)
    comp2 = _poly_add(
        _poly_add(_poly_scale(pa, -delta), _poly_scale(pb, c)),
        _poly_add(_poly_scale(pb3, Fraction(3)), {
            (n,): -b[n] * lam**n for n in range(order + 1)
        }),
    )
    return not comp1 and not comp2


def rational_series_4d(
    c: Fraction,
    delta: Fraction,
    b: Fraction,
    lam_a: Fraction,
    lam_b: Fraction,
    vec_a,
    vec_b,
    order: int,
):
    """Two-variable conjugacy coefficients over the rationals.

    The cubic sources are evaluated by brute-force convolution of all
    index splittings, independent of the degree-slice scheme used by the
    floating-point builder.
    """
    coeff = [
        {(1, 0): Fraction(vec_a[i]), (0, 1): Fraction(vec_b[i])} for i in range(4)
    ]

    def cube_coeff(grid, n, m):
        total = Fraction(0)
        for n1 in range(n + 1):
            for m1 in range(m + 1):
                v1 = grid.get((n1, m1), Fraction(0))
                if v1 == 0:
                    continue
                for n2 in range(n - n1 + 1):
                    for m2 in range(m - m1 + 1):
                        v2 = grid.get((n2, m2), Fraction(0))
                        if v2 == 0:
                            continue
                        v3 = grid.get((n - n1 - n2, m - m1 - m2), Fraction(0))
                        total += v1 * v2 * v3
        return total

    for d in range(2, order + 1):
        for n in range(d, -1, -1):
            m = d - n
            lam_nm = lam_a**n * lam_b**m
            rhs2 = -3 * cube_coeff(coeff[1], n, m)
            rhs4 = -3 * cube_coeff(coeff[3], n, m)
            sol = _solve_linear(
                [
                    [-lam_nm, Fraction(1), Fraction(0), Fraction(0)],
                    [-delta, c + b - lam_nm, Fraction(0), -b],
                    [Fraction(0), Fraction(0), -lam_nm, Fraction(1)],
                    [Fraction(0), -b, -delta, c + b - lam_nm],
                ],
                [Fraction(0), rhs2, Fraction(0), rhs4],
            )
            for i in range(4):
                if sol[i] != 0:
                    coeff[i][(n, m)] = sol[i]
    return coeff


def recompose_residual_4d(c, delta, b, lam_a, lam_b, coeff, order: int) -> bool:
    """True when the 4-D defining equation vanishes through ``order`` exactly."""
    c, delta, b = Fraction(c), Fraction(delta), Fraction(b)
    lam_a, lam_b = Fraction(lam_a), Fraction(lam_b)
    shifted = [
        {k: v * lam_a ** k[0] * lam_b ** k[1] for k, v in coeff[i].items()}
        for i in range(4)
    ]
    a1, a2, a3, a4 = coeff
    cube2 = _poly_mul(_poly_mul(a2, a2, order), a2, order)
    cube4 = _poly_mul(_poly_mul(a4, a4, order), a4, order)
    cpl = _poly_add(a2, _poly_scale(a4, Fraction(-1)))
    comps = [
        _poly_add(a2, _poly_scale(shifted[0], Fraction(-1))),
        _poly_add(
            _poly_add(_poly_scale(a2, c), _poly_scale(a1, -delta)),
            _poly_add(
                _poly_add(_poly_scale(cube2, Fraction(3)), _poly_scale(cpl, b)),
                _poly_scale(shifted[1], Fraction(-1)),
            ),
        ),
        _poly_add(a4, _poly_scale(shifted[2], Fraction(-1))),
        _poly_add(
            _poly_add(_poly_scale(a4, c), _poly_scale(a3, -delta)),
            _poly_add(
                _poly_add(_poly_scale(cube4, Fraction(3)), _poly_scale(cpl, -b)),
                _poly_scale(shifted[3], Fraction(-1)),
            ),
        ),
    ]
    return all(not comp for comp in comps)
