"""Arc-length growth of ``sqrt(-(log p)'')`` for a real polynomial ``p``.

The integrand is evaluated exactly on rational sample points and converted to
float only at the end.  Integration uses adaptive Simpson in ``t = log y``,
where the integrand of a degree-``k`` polynomial tends to the constant
``sqrt(k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import WindowError

Coeffs = Sequence[Fraction]  # ascending powers


def poly_eval(c: Coeffs, y):
    acc = 0
    for a in reversed(c):
        acc = acc * y + a
    return acc


def poly_deriv(c: Coeffs) -> tuple:
    return tuple(k * c[k] for k in range(1, len(c)))


def trim(c: Coeffs) -> tuple:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(c: Coeffs) -> int:
    return len(trim(c)) - 1


def curvature(c: Coeffs, y) -> Fraction:
    """``-(log p)''(y) = (p'^2 - p p'') / p^2`` evaluated exactly."""
    d1 = poly_deriv(c)
    d2 = poly_deriv(d1)
    p = poly_eval(c, y)
    p1 = poly_eval(d1, y)
    p2 = poly_eval(d2, y)
    return Fraction(p1 * p1 - p * p2) / (p * p)


def integrand(c: Coeffs, y) -> float:
    y = Fraction(y)
    v = curvature(c, y)
    return math.sqrt(v) if v > 0 else 0.0


def real_root_intervals(c: Coeffs) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals for the real roots of ``p`` (via sympy)."""
    c = trim(c)
    if len(c) <= 1:
        return []
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(a.numerator, a.denominator) for a in reversed(c)], x)
    out = []
    for (lo, hi), _mult in poly.intervals():
        out.append((Fraction(int(lo.p), int(lo.q)), Fraction(int(hi.p), int(hi.q))))
    return out


def check_window(c: Coeffs, y0, y1) -> None:
    """Raise :class:`WindowError` unless ``p > 0`` on ``[y0, y1]``."""
    y0, y1 = Fraction(y0), Fraction(y1)
    c = trim(c)
    if not c:
        raise WindowError("p is identically zero")
    for lo, hi in real_root_intervals(c):
        if hi >= y0 and lo <= y1:
            raise WindowError(
                f"p has a real root in [{float(lo):.6g}, {float(hi):.6g}], inside the window "
                f"[{float(y0):.6g}, {float(y1):.6g}]; shrink or move the window",
                root_interval=(lo, hi),
            )
    for y in (y0, (y0 + y1) / 2, y1):
        if poly_eval(c, y) <= 0:
            raise WindowError(f"p({float(y):.6g}) <= 0; orient the generator first")


def adaptive_simpson(f, a: float, b: float, tol: float = 1e-9, max_depth: int = 50) -> float:
    """Adaptive Simpson quadrature with Richardson correction."""

    def simpson(fa, fm, fb, a, b):
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def rec(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = simpson(fa, flm, fm, a, m)
        right = simpson(fm, frm, fb, m, b)
        diff = left + right - whole
        if depth <= 0 or abs(diff) <= 15.0 * tol:
            return left + right + diff / 15.0
        return rec(a, m, fa, flm, fm, left, tol / 2, depth - 1) + rec(m, b, fm, frm, fb, right, tol / 2, depth - 1)

    if b == a:
        return 0.0
    fa, fb = f(a), f(b)
    fm = f(0.5 * (a + b))
    return rec(a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, max_depth)


def arc_length(c: Coeffs, y0, y1, tol: float = 1e-9) -> float:
    """``int_{y0}^{y1} sqrt(max(0, -(log p)''))``; integrates in ``t = log y``."""
    if y0 <= 0:
        raise WindowError("the window must lie in y > 0")
    c = trim(c)
    if degree(c) <= 0:
        return 0.0

    def g(t):
        y = math.exp(t)
        return integrand(c, y) * y

    return adaptive_simpson(g, math.log(y0), math.log(y1), tol)


@dataclass(frozen=True)
class GrowthReport:
    degree: int
    y0: float
    y_maxes: tuple[float, ...]
    integrals: tuple[float, ...]
    slope: float
    expected_slope: float
    verdict_finite: bool
    notes: list = field(default_factory=list)

    @property
    def relative_error(self) -> float:
        if self.expected_slope == 0:
            return abs(self.slope)
        return abs(self.slope - self.expected_slope) / self.expected_slope


def default_ladder(lo_exp: float = 3.0, hi_exp: float = 6.0, steps: int = 7) -> tuple[float, ...]:
    if steps < 2:
        return (10.0 ** hi_exp,)
    return tuple(10.0 ** (lo_exp + (hi_exp - lo_exp) * k / (steps - 1)) for k in range(steps))


def arc_length_growth(c: Coeffs, y0=1, y_maxes: Sequence[float] | None = None, tol: float = 1e-9) -> GrowthReport:
    """Integrate over ``[y0, Y]`` for a ladder of ``Y`` and fit against ``log Y``.

    The windows are nested, so each integral extends the previous one.
    """
    import numpy as np

    c = trim(c)
    y_maxes = tuple(sorted(default_ladder() if y_maxes is None else y_maxes))
    check_window(c, y0, Fraction(y_maxes[-1]))
    k = degree(c)
    total = 0.0
    left = float(y0)
    integrals = []
    for Y in y_maxes:
        total += arc_length(c, left, Y, tol)
        left = Y
        integrals.append(total)
    if len(y_maxes) >= 2:
        slope = float(np.polyfit(np.log(np.array(y_maxes)), np.array(integrals), 1)[0])
    else:
        slope = integrals[0] / math.log(y_maxes[0] / float(y0))
    return GrowthReport(
        degree=k,
        y0=float(y0),
        y_maxes=y_maxes,
        integrals=tuple(integrals),
        slope=slope,
        expected_slope=math.sqrt(k) if k > 0 else 0.0,
        verdict_finite=max(abs(x) for x in integrals) < 1e-12 and abs(slope) < 1e-6,
    )
