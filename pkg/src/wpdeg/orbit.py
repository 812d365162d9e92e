"""Orbit polynomial and the finite/infinite Weil-Petersson verdict.

For a generator ``alpha`` of ``F^n_inf`` the nilpotent orbit gives

    p(y) = i^n Q(alpha, exp(-2iyN) conj(alpha))
         = sum_k i^n (-2i)^k / k! * C_k * y^k,   C_k = Q(alpha, N^k conj(alpha)).

Distance is finite iff ``p`` is constant, i.e. ``C_1 = ... = C_n = 0``.  The
same verdict is read off independently from the weight of ``alpha``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatchError, InternalConsistencyError, InvalidOrbitDataError
from .exactla import Gauss, I, Matrix, conj, dot, to_scalar
from .hodge import (
    HodgeFiltration,
    MixedHodge,
    PolarizedMixedHodge,
    Polarization,
    check_polarized_mhs,
)
from .monodromy import MonodromyOperator, WeightFiltration, weight_filtration
from .report import Check, Classification, Report, Verdict


@dataclass(frozen=True)
class OrbitProblem:
    """``(n, N, Q, alpha)`` and optionally the full limiting filtration ``F``."""

    weight_n: int
    op: MonodromyOperator
    Q: Polarization
    alpha: tuple
    F: HodgeFiltration | None = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(to_scalar(x) for x in self.alpha))
        d = self.op.dim
        if self.op.weight_n != self.weight_n:
            raise DimensionMismatchError("monodromy operator has a different weight")
        if self.Q.weight_k != self.weight_n:
            raise DimensionMismatchError("polarization weight must equal n")
        if self.Q.dim != d or len(self.alpha) != d:
            raise DimensionMismatchError(f"Q, N and alpha must all live in dimension {d}")
        if all(x == 0 for x in self.alpha):
            raise InvalidOrbitDataError("alpha must be nonzero")
        if self.F is not None:
            if self.F.dim != d:
                raise DimensionMismatchError("Hodge filtration has the wrong dimension")
            if not self.F[self.weight_n].contains(self.alpha):
                raise InvalidOrbitDataError("alpha does not lie in F^n")

    @property
    def N(self) -> Matrix:
        return self.op.N

    @property
    def dim(self) -> int:
        return self.op.dim

    def weight_filtration(self) -> WeightFiltration:
        return weight_filtration(self.op)

    def mixed_hodge(self) -> PolarizedMixedHodge:
        if self.F is None:
            raise ValueError("the Hodge filtration F was not supplied")
        return PolarizedMixedHodge(MixedHodge(self.weight_n, self.weight_filtration(), self.F), self.op, self.Q)


@dataclass(frozen=True)
class OrbitPolynomial:
    """``C_0..C_n`` and the real coefficients of ``p`` in ascending degree."""

    C: tuple
    coefficients: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        nz = [k for k, c in enumerate(self.coefficients) if c != 0]
        return nz[-1] if nz else -1

    @property
    def leading_sign(self) -> int:
        d = self.degree
        if d < 0:
            return 0
        return 1 if self.coefficients[d] > 0 else -1

    @property
    def oriented(self) -> tuple[Fraction, ...]:
        """Coefficients with the generator orientation chosen so ``p`` ends positive."""
        s = self.leading_sign or 1
        return tuple(s * c for c in self.coefficients[: self.degree + 1])

    def __call__(self, y) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * y + c
        return acc

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coefficients):
            if c == 0:
                continue
            mono = "" if k == 0 else ("y" if k == 1 else f"y^{k}")
            coef = str(c) if (k == 0 or c not in (1, -1)) else ("-" if c == -1 else "")
            terms.append(f"{coef}{'*' if mono and coef not in ('', '-') else ''}{mono}")
        return " + ".join(terms).replace("+ -", "- ") or "0"


def orbit_coefficients(Q: Matrix, N: Matrix, alpha: Sequence, n: int) -> tuple:
    """``C_k = Q(alpha, N^k conj(alpha))`` for ``k = 0..n``."""
    v = tuple(conj(x) for x in alpha)
    out = []
    for _ in range(n + 1):
        out.append(to_scalar(dot(alpha, Q.apply(v))))
        v = N.apply(v)
    return tuple(out)


def orbit_polynomial(prob: OrbitProblem) -> OrbitPolynomial:
    """Exact orbit polynomial; raises if it is not real.

    Raises:
        InvalidOrbitDataError: a coefficient has nonzero imaginary part, or
            ``p`` vanishes identically.
    """
    n = prob.weight_n
    C = orbit_coefficients(prob.Q.Q, prob.N, prob.alpha, n)
    coeffs = []
    base = I ** n
    step = Gauss(0, -2)
    for k, ck in enumerate(C):
        val = to_scalar(base * (step ** k) * ck / math.factorial(k))
        if isinstance(val, Gauss):
            raise InvalidOrbitDataError(
                f"orbit polynomial coefficient of y^{k} is not real ({val}); "
                "(Q, N, alpha) is not a polarized limit datum"
            )
        coeffs.append(val)
    if all(c == 0 for c in coeffs):
        raise InvalidOrbitDataError("orbit polynomial vanishes identically; Q(alpha, conj alpha) data is degenerate")
    return OrbitPolynomial(C, tuple(coeffs))


def alpha_weight(prob: OrbitProblem, wf: WeightFiltration | None = None) -> int:
    """Smallest ``l`` with ``alpha`` in the complexified ``W_l``."""
    wf = prob.weight_filtration() if wf is None else wf
    return wf.position(prob.alpha)


def classify(prob: OrbitProblem) -> Classification:
    """Finite iff ``C_1 = ... = C_n = 0``, cross-checked against ``alpha`` in ``Gr_n``.

    Raises:
        InternalConsistencyError: the two routes disagree.
    """
    n = prob.weight_n
    poly = orbit_polynomial(prob)
    first = next((k for k in range(1, n + 1) if poly.C[k] != 0), None)
    finite_c = first is None
    pos = alpha_weight(prob)
    finite_w = pos == n
    if finite_c != finite_w:
        raise InternalConsistencyError(
            f"orbit-coefficient route says {'finite' if finite_c else 'infinite'} but alpha has weight {pos}"
        )
    witness = {"alpha_weight": pos, "degree": poly.degree}
    if finite_c:
        witness["C"] = "C_i = 0 for all i > 0"
        return Classification(Verdict.FINITE, witness, "orbit")
    witness.update({"index": first, "value": poly.C[first]})
    return Classification(Verdict.INFINITE, witness, "orbit")


def recheck_witness(prob: OrbitProblem, cls: Classification) -> bool:
    """Re-verify a classification witness from the problem alone."""
    C = orbit_coefficients(prob.Q.Q, prob.N, prob.alpha, prob.weight_n)
    if cls.is_finite:
        return all(c == 0 for c in C[1:])
    k = cls.witness["index"]
    return C[k] == cls.witness["value"] and all(c == 0 for c in C[1:k])


def check_finite_nilpotency(prob: OrbitProblem, cls: Classification, pmhs: Report | None = None) -> Report:
    """At finite distance a polarized limit has ``N^(n-1) = 0``.

    For ``n = 1`` the exponent is read as 1 (``N = 0``): the pure weight-1
    case is the only one with ``alpha`` in ``Gr_1``.
    """
    name = "N^(n-1) = 0"
    if not cls.is_finite:
        return Report("finite-distance nilpotency", (Check(name, None, "not applicable: infinite distance"),))
    if pmhs is None:
        if prob.F is None:
            return Report("finite-distance nilpotency",
                          (Check(name, None, "not applicable: Hodge filtration not supplied"),))
        pmhs = check_polarized_mhs(prob.mixed_hodge())
    if not pmhs.passed:
        return Report("finite-distance nilpotency",
                      (Check(name, None, "not applicable: input is not a polarized mixed Hodge structure"),))
    e = max(prob.weight_n - 1, 1)
    P = prob.N ** e
    for j in range(prob.dim):
        col = P.col(j)
        if any(x != 0 for x in col):
            v = tuple(int(i == j) for i in range(prob.dim))
            return Report("finite-distance nilpotency",
                          (Check(name, False, f"N^{e} e_{j} != 0", {"vector": v, "image": col}),))
    return Report("finite-distance nilpotency", (Check(name, True, f"N^{e} = 0"),))


def quadrature_crosscheck(prob: OrbitProblem, y0=None, y_maxes=None, tol: float = 1e-9):
    """Numeric arc-length growth of the oriented orbit polynomial.

    The default window starts past every real root of ``p``.
    """
    from .quadrature import arc_length_growth, real_root_intervals

    poly = orbit_polynomial(prob)
    c = poly.oriented
    if y0 is None:
        roots = real_root_intervals(c)
        y0 = max([Fraction(1)] + [hi + 1 for _, hi in roots])
    rep = arc_length_growth(c, y0, y_maxes, tol)
    cls = classify(prob)
    if rep.verdict_finite != cls.is_finite:
        rep.notes.append("quadrature verdict disagrees with the exact classification")
    return rep
