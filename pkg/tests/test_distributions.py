import math
from fractions import Fraction as F

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from tracepoly.distributions import (
    FLOAT_MAX_N,
    IrwinHallParams,
    UniformSumParams,
    h,
    h_and_h_inv,
    h_inv,
    ih_cdf,
    ih_pdf,
    us_cdf,
    us_cdf_float,
    us_pdf,
    us_pdf_float,
)

from oracles import ih_cdf_oracle, ih_pdf_oracle

rationals = st.fractions(min_value=-30, max_value=30, max_denominator=50)
endpoints = st.tuples(
    st.fractions(min_value=-5, max_value=5, max_denominator=12),
    st.fractions(min_value=F(1, 12), max_value=5, max_denominator=12),
).map(lambda t: (t[0], t[0] + t[1]))


def IH(n):
    return IrwinHallParams(n)


def US(n, a, b):
    return UniformSumParams(n, a, b)


@pytest.mark.parametrize(
    "n, x, expected",
    [(1, F(1, 2), 1), (2, -1, 0), (2, 1, 1)],
)
def test_ih_pdf_examples(n, x, expected):
    assert ih_pdf(IH(n), x) == expected


@pytest.mark.parametrize(
    "n, x, expected",
    [(3, F(3, 2), F(1, 2)), (2, F(1, 2), F(1, 8)), (5, 5, 1)],
)
def test_ih_cdf_examples(n, x, expected):
    assert ih_cdf(IH(n), x) == expected


def test_ih_pdf_knots_take_right_piece():
    # U[0,1] density jumps at 0 and 1
    assert ih_pdf(IH(1), 0) == 1
    assert ih_pdf(IH(1), 1) == 0
    assert ih_pdf(IH(3), 3) == 0


@pytest.mark.parametrize("n", range(1, 7))
def test_ih_matches_convolution_oracle(n):
    grid = [F(i, 7) for i in range(-3, 7 * n + 4)]
    for x in grid:
        assert ih_cdf(IH(n), x) == ih_cdf_oracle(n, x)
        if x != n:  # oracle uses half-open pieces; both give 0 there for n >= 2
            assert ih_pdf(IH(n), x) == ih_pdf_oracle(n, x)


def test_h_examples():
    p = US(2, -1, 1)
    assert h_and_h_inv(p, 0, "forward") == -2
    assert h_and_h_inv(p, -1, "inverse") == F(1, 2)
    x = F(7, 5)
    assert h_and_h_inv(US(3, 0, 1), x, "inverse") == x
    with pytest.raises(ValueError):
        h_and_h_inv(p, 0, "sideways")


@given(endpoints, st.integers(1, 12), rationals)
def test_h_roundtrip(ab, n, v):
    p = US(n, *ab)
    assert h(p, h_inv(p, v)) == v
    assert h_inv(p, h(p, v)) == v


@pytest.mark.parametrize(
    "n, a, b, x, expected",
    [(1, -1, 1, 0, F(1, 2)), (2, -1, 1, 0, F(1, 2)), (2, -1, 1, 3, 0)],
)
def test_us_pdf_examples(n, a, b, x, expected):
    assert us_pdf(US(n, a, b), x) == expected


@pytest.mark.parametrize(
    "n, a, b, x, expected",
    [(2, -1, 1, -1, F(1, 8)), (4, -1, 1, 0, F(1, 2)), (1, -1, 1, 1, 1)],
)
def test_us_cdf_examples(n, a, b, x, expected):
    assert us_cdf(US(n, a, b), x) == expected


def test_corner_triangle_cross_check():
    # P(Y1 + Y2 <= -1) on [-1,1]^2 is the corner triangle: (1/2) / 4
    assert us_cdf(US(2, -1, 1), -1) == F(1, 2) / 4


def test_degenerate_and_invalid_params():
    with pytest.raises(ValueError):
        US(3, 1, 1)
    with pytest.raises(ValueError):
        US(3, 2, 1)
    with pytest.raises(ValueError):
        IH(0)
    with pytest.raises(TypeError):
        IH(2.0)


@given(endpoints, st.integers(1, 10), rationals)
def test_symmetry(ab, n, x):
    a, b = ab
    p = US(n, a, b)
    assert us_cdf(p, x) + us_cdf(p, n * (a + b) - x) == 1


@given(st.integers(1, 10), rationals)
def test_reduction_to_irwin_hall(n, x):
    p = US(n, 0, 1)
    assert us_pdf(p, x) == ih_pdf(IH(n), x)
    assert us_cdf(p, x) == ih_cdf(IH(n), x)


@given(endpoints, st.integers(1, 10), rationals)
def test_transform_consistency(ab, n, x):
    p = US(n, *ab)
    assert us_cdf(p, x) == ih_cdf(IH(n), h_inv(p, x))
    assert us_pdf(p, x) == ih_pdf(IH(n), h_inv(p, x)) / p.width


@given(endpoints, st.integers(1, 8), rationals, rationals)
def test_cdf_monotone_and_bounded(ab, n, x1, x2):
    p = US(n, *ab)
    lo, hi = sorted((x1, x2))
    assert 0 <= us_cdf(p, lo) <= us_cdf(p, hi) <= 1


@pytest.mark.parametrize("n", range(1, 11))
def test_normalization_exact(n):
    p = US(n, F(-3, 2), F(1, 3))
    na, nb = p.support
    assert us_cdf(p, nb) - us_cdf(p, na) == 1
    assert us_cdf(p, na) == 0 and us_cdf(p, nb) == 1


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 10])
def test_normalization_riemann_sum_converges(n):
    p = US(n, -1, 1)
    na, nb = p.support
    errors = []
    for steps in (8 * n, 32 * n):
        dx = (nb - na) / steps
        total = sum(us_pdf(p, na + (i + F(1, 2)) * dx) for i in range(steps)) * dx
        errors.append(abs(total - 1))
    assert errors[1] <= errors[0]
    assert errors[1] < F(1, 100)


def _pdf_piece(p, lo, hi):
    # recover the polynomial piece of us_pdf on (lo, hi) by exact interpolation
    t = sp.Symbol("t")
    pts = [lo + (hi - lo) * F(i + 1, p.n + 1) for i in range(p.n)]
    data = [(sp.Rational(x.numerator, x.denominator), sp.Rational(str(us_pdf(p, x)))) for x in pts]
    return sp.interpolate(data, t), t


@pytest.mark.parametrize("n, a, b", [(1, 0, 1), (2, -1, 1), (3, F(-1, 2), 2), (4, -1, 1), (5, 0, F(1, 3))])
def test_cdf_equals_integral_of_pdf_pieces(n, a, b):
    p = US(n, a, b)
    knots = [h(p, j) for j in range(n + 1)]
    x1 = knots[0] + (knots[1] - knots[0]) / 3
    x2 = knots[-1] - (knots[-1] - knots[-2]) / 5
    inner = [k for k in knots if x1 < k < x2]
    edges = [x1] + inner + [x2]
    total = sp.Integer(0)
    for lo, hi in zip(edges, edges[1:]):
        poly, t = _pdf_piece(p, lo, hi)
        total += sp.integrate(poly, (t, sp.Rational(str(lo)), sp.Rational(str(hi))))
    assert F(str(total)) == us_cdf(p, x2) - us_cdf(p, x1)


# -- float path ----------------------------------------------------------------


def test_float_examples():
    assert us_cdf_float(US(2, -1, 1), -1.0) == pytest.approx(0.125, abs=1e-12)
    assert us_cdf_float(US(1, 0, 1), 0.5) == 0.5
    assert us_cdf_float(US(12, -1, 1), 0.0) == pytest.approx(0.5, abs=1e-9)


@pytest.mark.parametrize("n", range(1, FLOAT_MAX_N + 1))
def test_float_agrees_with_exact(n):
    p = US(n, -1, 1)
    xs = [F(i, 13) - n for i in range(0, 26 * n + 1, max(1, n // 3))]
    exact_cdf = np.array([float(us_cdf(p, x)) for x in xs])
    exact_pdf = np.array([float(us_pdf(p, x)) for x in xs])
    fx = np.array([float(x) for x in xs])
    got_cdf = us_cdf_float(p, fx)
    got_pdf = us_pdf_float(p, fx)
    np.testing.assert_allclose(got_cdf, exact_cdf, rtol=1e-9, atol=0)
    np.testing.assert_allclose(got_pdf, exact_pdf, rtol=1e-9, atol=0)
    # scalar calls return plain floats
    assert isinstance(us_cdf_float(p, 0.25), float)
    assert us_pdf_float(p, float(xs[3])) == pytest.approx(float(exact_pdf[3]), rel=1e-9)


@settings(max_examples=200)
@given(st.integers(1, FLOAT_MAX_N), st.floats(-20, 20, allow_nan=False))
def test_float_agrees_with_exact_random(n, x):
    p = US(n, -1, 1)
    exact = us_cdf(p, F(x))
    assert us_cdf_float(p, x) == pytest.approx(float(exact), rel=1e-9, abs=0)
    exact_pdf = us_pdf(p, F(x))
    assert us_pdf_float(p, x) == pytest.approx(float(exact_pdf), rel=1e-9, abs=0)


def test_float_sampling_ks_small():
    rng = np.random.default_rng(3)
    p = US(3, F(-1, 2), 2)
    sums = np.sort(rng.uniform(-0.5, 2.0, size=(100_000, 3)).sum(axis=1))
    cdf = us_cdf_float(p, sums)
    m = len(sums)
    ks = max((np.arange(1, m + 1) / m - cdf).max(), (cdf - np.arange(m) / m).max())
    assert ks < 0.01


def test_exact_path_handles_large_n():
    # far past the float envelope the exact path is still exact
    p = US(60, -1, 1)
    assert us_cdf(p, 0) == F(1, 2)
    assert 0 < us_cdf(p, -1) < F(1, 2)
    assert math.isclose(float(us_cdf(p, -1)), 1 - float(us_cdf(p, 1)))
