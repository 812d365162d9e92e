from __future__ import annotations

import math
import time
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from wpdeg.errors import WindowError
from wpdeg.quadrature import (
    adaptive_simpson,
    arc_length,
    arc_length_growth,
    check_window,
    curvature,
    integrand,
    real_root_intervals,
)

F = Fraction


def scipy_arc_length(c, a, b):
    """Reference value with floats and scipy's QUADPACK in ``t = log y``."""

    def f(t):
        y = math.exp(t)
        p = sum(float(ck) * y ** k for k, ck in enumerate(c))
        p1 = sum(k * float(ck) * y ** (k - 1) for k, ck in enumerate(c) if k)
        p2 = sum(k * (k - 1) * float(ck) * y ** (k - 2) for k, ck in enumerate(c) if k > 1)
        v = (p1 * p1 - p * p2) / (p * p)
        return math.sqrt(max(v, 0.0)) * y

    val, _ = integrate.quad(f, math.log(a), math.log(b), limit=200, epsabs=1e-12, epsrel=1e-12)
    return val


def test_curvature_closed_forms():
    # -(log c y^k)'' = k / y^2
    for k in (1, 2, 3):
        c = [F(0)] * k + [F(5)]
        assert curvature(c, F(3)) == F(k, 9)
    assert curvature([F(7)], F(2)) == 0


def test_elliptic_integral_is_log():
    for Y in (10.0, 1e3, 1e6):
        assert arc_length([F(0), F(2)], 1, Y) == pytest.approx(math.log(Y), rel=1e-9)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_monomial_integral_closed_form(k):
    c = [F(0)] * k + [F(1)]
    assert arc_length(c, 1, 1e6) == pytest.approx(math.sqrt(k) * math.log(1e6), rel=1e-9)


@given(
    st.lists(st.fractions(min_value=0, max_value=5, max_denominator=3), min_size=2, max_size=4),
    st.floats(min_value=2.0, max_value=1e4),
)
@settings(max_examples=40, deadline=None)
def test_against_scipy(coeffs, Y):
    c = [F(1)] + coeffs  # positive coefficients: p > 0 on y > 0
    if all(x == 0 for x in coeffs):
        return
    assert arc_length(c, 1, Y) == pytest.approx(scipy_arc_length(c, 1.0, Y), rel=1e-7, abs=1e-9)


def test_simpson_on_smooth_function():
    assert adaptive_simpson(math.sin, 0.0, math.pi) == pytest.approx(2.0, abs=1e-10)


def test_constant_polynomial_integral_vanishes():
    rep = arc_length_growth([F(4)], 1, (1e3, 1e6))
    assert max(rep.integrals) < 1e-12
    assert rep.verdict_finite


@pytest.mark.parametrize("k", [1, 2, 3])
def test_growth_slope(k):
    c = [F(1)] * (k + 1)
    t0 = time.perf_counter()
    rep = arc_length_growth(c, 1)
    assert time.perf_counter() - t0 < 5
    assert rep.relative_error < 0.01
    assert not rep.verdict_finite


def test_root_in_window_is_reported():
    c = [F(-6), F(1), F(1)]  # roots -3 and 2
    with pytest.raises(WindowError) as err:
        check_window(c, 1, 10)
    lo, hi = err.value.root_interval
    assert lo <= 2 <= hi
    check_window(c, 3, 10)


def test_negative_orientation_rejected():
    with pytest.raises(WindowError, match="orient"):
        check_window([F(-1), F(-1)], 1, 10)


def test_root_isolation():
    ivs = real_root_intervals([F(-2), F(0), F(1)])
    assert len(ivs) == 2
    assert any(lo <= math.sqrt(2) <= hi for lo, hi in ivs)
    assert any(lo <= -math.sqrt(2) <= hi for lo, hi in ivs)


def test_integrand_is_float():
    assert isinstance(integrand([F(0), F(1)], 2), float)
