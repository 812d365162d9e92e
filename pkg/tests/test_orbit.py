from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from wpdeg.construct import Piece, assemble, random_limit, random_rational_gl
from wpdeg.errors import DimensionMismatchError, InvalidOrbitDataError
from wpdeg.exactla import Gauss, I, Matrix, inverse, to_scalar
from wpdeg.hodge import Polarization, check_polarized_mhs
from wpdeg.monodromy import MonodromyOperator
from wpdeg.orbit import (
    OrbitProblem,
    alpha_weight,
    check_finite_nilpotency,
    classify,
    orbit_polynomial,
    quadrature_crosscheck,
    recheck_witness,
)
from wpdeg.report import Verdict

SKEW = Matrix([[0, 1], [-1, 0]])


def problem(n, N, Q, alpha, F=None) -> OrbitProblem:
    return OrbitProblem(n, MonodromyOperator.from_log(Matrix(N), n), Polarization(n, Matrix(Q)), alpha, F)


def oracle_finite(prob) -> bool:
    C = oracles.direct_C([list(r) for r in prob.Q.Q.rows], [list(r) for r in prob.N.rows], prob.alpha, prob.weight_n)
    return all(c == (0, 0) for c in C[1:])


# --- examples ------------------------------------------------------------


def test_zero_N_constant_polynomial():
    prob = problem(1, [[0, 0], [0, 0]], SKEW.rows, (1, I))
    poly = orbit_polynomial(prob)
    assert poly.degree == 0
    assert poly.coefficients[0] == to_scalar(I * prob.Q((1, I), (1, -I)))
    assert classify(prob).verdict is Verdict.FINITE


def test_elliptic_example():
    prob = problem(1, [[0, 1], [0, 0]], SKEW.rows, (0, 1))
    poly = orbit_polynomial(prob)
    assert poly.C == (0, -1)
    assert poly.coefficients == (0, -2)
    assert str(poly) == "-2*y"
    cls = classify(prob)
    assert cls.verdict is Verdict.INFINITE
    assert cls.witness["index"] == 1 and cls.witness["value"] == -1
    assert recheck_witness(prob, cls)


def test_maximal_unipotent_degree_three():
    lim = assemble(3, [Piece(3, 3, 3)])
    poly = orbit_polynomial(lim.problem())
    assert poly.degree == 3
    # independent expansion of i^3 Q(alpha, exp(-2iyN) conj alpha)
    C = oracles.direct_C([list(r) for r in lim.Q.Q.rows], [list(r) for r in lim.op.N.rows], lim.alpha, 3)
    fact = [1, 1, 2, 6]
    for k in range(4):
        coeff = to_scalar(I ** 3 * Gauss(0, -2) ** k * Gauss(*C[k]) / fact[k])
        assert coeff == poly.coefficients[k]


def six_dim_finite():
    return assemble(3, [Piece(3, 0, 0), Piece(2, 2, 1), Piece(2, 2, 1, 2)])


def test_six_dimensional_finite_example():
    lim = six_dim_finite()
    prob = lim.problem()
    assert prob.dim == 6
    cls = classify(prob)
    assert cls.verdict is Verdict.FINITE
    assert alpha_weight(prob) == 3
    assert not prob.N.is_zero() and (prob.N ** 2).is_zero()
    rep = check_finite_nilpotency(prob, cls)
    assert rep.passed and rep.checks[0].passed is True


def test_nilpotency_check_cases():
    prob = problem(1, [[0, 0], [0, 0]], SKEW.rows, (1, I))
    assert check_finite_nilpotency(prob, classify(prob)).checks[0].passed is None  # no F supplied
    inf = problem(1, [[0, 1], [0, 0]], SKEW.rows, (0, 1))
    rep = check_finite_nilpotency(inf, classify(inf))
    assert rep.checks[0].passed is None and "not applicable" in rep.checks[0].detail


def test_invalid_inputs():
    with pytest.raises(InvalidOrbitDataError):
        problem(1, [[0, 1], [0, 0]], SKEW.rows, (0, 0))
    with pytest.raises(DimensionMismatchError):
        problem(1, [[0, 1], [0, 0]], SKEW.rows, (0, 1, 0))
    # isotropic real alpha gives p = 0
    with pytest.raises(InvalidOrbitDataError):
        orbit_polynomial(problem(1, [[0, 0], [0, 0]], SKEW.rows, (1, 0)))


def test_non_real_polynomial_rejected():
    # N is not an infinitesimal isometry of Q, so the y-coefficient is 2 + 2i
    prob = problem(2, [[0, 1], [0, 0]], [[1, 0], [0, 1]], (1, 1 + I))
    with pytest.raises(InvalidOrbitDataError, match="not real"):
        orbit_polynomial(prob)


# --- properties ----------------------------------------------------------


@given(st.integers(0, 100_000))
@settings(max_examples=80, deadline=None)
def test_classification_matches_independent_products(seed):
    lim = random_limit(random.Random(seed))
    prob = lim.problem()
    cls = classify(prob)
    assert cls.is_finite == oracle_finite(prob) == lim.expected_finite
    assert (alpha_weight(prob) == prob.weight_n) == cls.is_finite
    assert recheck_witness(prob, cls)
    # realness on every input that passes the checker
    poly = orbit_polynomial(prob)
    assert all(isinstance(c, Fraction) for c in poly.coefficients)
    assert cls.is_finite == (poly.degree == 0)


@given(st.integers(0, 100_000))
@settings(max_examples=30, deadline=None)
def test_finite_limits_have_small_nilpotency(seed):
    lim = random_limit(random.Random(seed), finite=True, max_dim=8)
    prob = lim.problem()
    rep = check_finite_nilpotency(prob, classify(prob), check_polarized_mhs(prob.mixed_hodge()))
    assert rep.passed and rep.checks[0].passed is True


@given(st.integers(0, 100_000), st.integers(1, 5), st.integers(1, 4))
@settings(max_examples=30, deadline=None)
def test_verdict_invariance(seed, num, den):
    rng = random.Random(seed)
    prob = random_limit(rng, max_dim=7).problem()
    base = classify(prob).verdict
    g = random_rational_gl(prob.dim, rng)
    gi = inverse(g)
    lam = to_scalar(Gauss(Fraction(rng.randint(-3, 3)), Fraction(rng.randint(1, 3))))
    moved = OrbitProblem(
        prob.weight_n,
        MonodromyOperator.from_log(g @ prob.N @ gi, prob.weight_n),
        Polarization(prob.weight_n, (gi.T @ prob.Q.Q @ gi).scale(Fraction(num, den))),
        tuple(lam * x for x in g.apply(prob.alpha)),
    )
    assert classify(moved).verdict is base


def test_quadrature_agrees_with_classification():
    for seed in range(6):
        lim = random_limit(random.Random(seed), max_dim=6)
        rep = quadrature_crosscheck(lim.problem(), y_maxes=(1e3, 1e4, 1e5))
        assert rep.verdict_finite == lim.expected_finite
        assert not rep.notes
        if not lim.expected_finite:
            assert rep.relative_error < 0.05
