from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wpdeg.construct import Piece, allowed_pieces, assemble, random_limit, random_rational_gl
from wpdeg.errors import PolarizationError
from wpdeg.exactla import I, Matrix, Subspace
from wpdeg.hodge import (
    HodgeFiltration,
    MixedHodge,
    Polarization,
    PolarizedMixedHodge,
    check_hodge_riemann,
    check_polarized_mhs,
    definite_sign,
    hodge_components,
    weil_operator_pairing,
)
from wpdeg.monodromy import MonodromyOperator, weight_filtration

SKEW = Matrix([[0, 1], [-1, 0]])


def weight_one(vec) -> HodgeFiltration:
    return HodgeFiltration.from_bases(1, 2, {1: [vec]})


def pmhs(n, N, Q, F) -> PolarizedMixedHodge:
    op = MonodromyOperator.from_log(Matrix(N), n)
    return PolarizedMixedHodge(MixedHodge(n, weight_filtration(op), F), op, Polarization(n, Matrix(Q)))


# --- polarization --------------------------------------------------------


def test_parity_rule():
    Polarization(1, SKEW)
    Polarization(2, Matrix([[1, 0], [0, -1]]))
    with pytest.raises(PolarizationError, match="weight-parity"):
        Polarization(1, Matrix.identity(2))
    with pytest.raises(PolarizationError, match="weight-parity"):
        Polarization(2, SKEW)
    with pytest.raises(PolarizationError, match="degenerate"):
        Polarization(2, Matrix([[1, 0], [0, 0]]))


@given(st.integers(0, 6), st.integers(1, 4), st.integers(0, 1000))
def test_parity_matches_weight(k, d, seed):
    rng = random.Random(seed)
    A = [[Fraction(rng.randint(-3, 3)) for _ in range(d)] for _ in range(d)]
    sign = -1 if k % 2 else 1
    S = Matrix(A) + Matrix(A).T.scale(sign)
    try:
        Q = Polarization(k, S)
    except PolarizationError as exc:
        assert "degenerate" in str(exc)
        return
    assert Q.Q.T == Q.Q.scale(sign)
    assert Q.parity == ("skew" if k % 2 else "symmetric")


# --- Hodge-Riemann -------------------------------------------------------


def test_hr_pass_example():
    rep = check_hodge_riemann(weight_one((1, I)), Polarization(1, SKEW))
    assert rep.passed
    assert weil_operator_pairing((1, I), 1, 0, Polarization(1, SKEW)) == 2


def test_hr_fail_example_has_witness():
    rep = check_hodge_riemann(weight_one((1, -I)), Polarization(1, SKEW))
    assert not rep.passed
    w = rep["HR2"].witness
    assert w["pairing"] <= 0


def test_hr1_trivial_on_a_line():
    rep = check_hodge_riemann(weight_one((1, 0)), Polarization(1, SKEW))
    assert rep["HR1"].passed
    # a real line is not a Hodge structure, so the decomposition fails
    assert rep["hodge decomposition"].passed is False


def test_weil_pairing_scaling_and_zero():
    Q = Polarization(1, SKEW)
    assert weil_operator_pairing((0, 0), 1, 0, Q) == 0
    for lam in (Fraction(2), Fraction(-3, 4)):
        assert weil_operator_pairing((lam, lam * I), 1, 0, Q) == lam ** 2 * 2
    with pytest.raises(ValueError):
        weil_operator_pairing((1, I), 1, 1, Q)


def test_definite_sign():
    assert definite_sign([[2, 0], [0, 3]]) == (1, None)
    assert definite_sign([[-1, 0], [0, -5]]) == (-1, None)
    s, w = definite_sign([[1, 0], [0, -1]])
    assert s == 0 and w is not None


def pure_structure(rng: random.Random, n: int):
    """A pure polarized structure of weight n (all pieces with j = 0)."""
    pieces = [Piece(n, 0, 0, rng.randint(1, 3))]
    for _ in range(rng.randint(0, 2)):
        p, q, _ = rng.choice(allowed_pieces(n, 0) or [(n, 0, 0)])
        if p == n:
            continue
        pieces.append(Piece(p, q, 0, rng.randint(1, 3)))
    return assemble(n, pieces, 0, random_rational_gl(sum(pc.dim for pc in pieces), rng))


@given(st.integers(1, 4), st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_pure_structure_passes_both_checkers(n, seed):
    lim = pure_structure(random.Random(seed), n)
    rep = check_hodge_riemann(lim.F, lim.Q)
    assert rep.passed, rep
    # the pairing is real and positive on every component
    for (p, q), H in hodge_components(lim.F).items():
        for v in H.vectors:
            assert weil_operator_pairing(v, p, q, lim.Q) > 0
    # the same data as a mixed structure with N = 0
    mixed = PolarizedMixedHodge(MixedHodge(n, weight_filtration(lim.op), lim.F), lim.op, lim.Q)
    assert check_polarized_mhs(mixed).passed


def test_reports_are_reproducible():
    F, Q = weight_one((1, I)), Polarization(1, SKEW)
    assert check_hodge_riemann(F, Q) == check_hodge_riemann(F, Q)


# --- polarized mixed Hodge structures ------------------------------------


def test_pmhs_pure_embedding():
    F = HodgeFiltration.from_bases(1, 2, {1: [(1, I)]})
    rep = check_polarized_mhs(pmhs(1, [[0, 0], [0, 0]], SKEW.rows, F))
    assert rep.passed
    assert [c.status for c in rep.checks] == ["pass"] * 4


@pytest.mark.parametrize("c", [Fraction(1), Fraction(-2), Fraction(3, 5)])
def test_pmhs_elliptic_limit(c):
    F = HodgeFiltration.from_bases(1, 2, {1: [(1, c)]})
    rep = check_polarized_mhs(pmhs(1, [[0, 1], [0, 0]], SKEW.rows, F))
    assert rep.passed
    # with Q = [[0,1],[-1,0]] the primitive form is negative; the sign is reported
    assert rep.info["orientation"] == -1


def test_pmhs_elliptic_limit_positive_orientation():
    F = HodgeFiltration.from_bases(1, 2, {1: [(1, 2)]})
    rep = check_polarized_mhs(pmhs(1, [[0, 1], [0, 0]], [[0, -1], [1, 0]], F))
    assert rep.passed and rep.info["orientation"] == 1


def test_pmhs_fails_when_F_meets_ker_N():
    F = HodgeFiltration.from_bases(1, 2, {1: [(1, 0)]})
    rep = check_polarized_mhs(pmhs(1, [[0, 1], [0, 0]], SKEW.rows, F))
    assert rep["W = W(N)"].passed
    assert rep["mixed Hodge"].passed is False


def test_pmhs_detects_griffiths_failure():
    # F^2 = span(e0) for the n = 2 Jordan block with e0 at the bottom violates N F^p <= F^(p-1)
    lim = assemble(2, [Piece(2, 2, 2)])
    bad = HodgeFiltration.from_bases(2, 3, {1: [(0, 1, 0), (0, 0, 1)], 2: [(0, 0, 1)]})
    rep = check_polarized_mhs(PolarizedMixedHodge(MixedHodge(2, weight_filtration(lim.op), bad), lim.op, lim.Q))
    assert not rep.passed


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_generated_limits_pass(seed):
    lim = random_limit(random.Random(seed), max_dim=8)
    rep = check_polarized_mhs(lim.problem().mixed_hodge())
    assert rep.passed, [c for c in rep.checks if not c.passed]
    assert rep.info["orientation"] == 1


def test_pmhs_rejects_indefinite_primitive_form():
    lim = assemble(1, [Piece(1, 1, 1)])
    Qneg = Polarization(1, lim.Q.Q.scale(-1))
    rep = check_polarized_mhs(PolarizedMixedHodge(MixedHodge(1, weight_filtration(lim.op), lim.F), lim.op, Qneg))
    # a global sign flip is tolerated and reported
    assert rep.passed and rep.info["orientation"] == -1
    # mixing signs across two pieces is not
    two = assemble(2, [Piece(2, 0, 0), Piece(1, 1, 0)])
    Q = two.Q.Q.tolist()
    Q[2][2] = -Q[2][2]
    rep = check_polarized_mhs(PolarizedMixedHodge(MixedHodge(2, weight_filtration(two.op), two.F), two.op,
                                                  Polarization(2, Matrix(Q))))
    assert not rep.passed


def test_subspace_helpers_used_by_checker():
    F = HodgeFiltration.from_bases(1, 2, {1: [(1, I)]})
    assert F[0] == Subspace.full(2) and F[2] == Subspace.zero(2)
    g = Matrix([[2, 1], [0, 1]])
    assert F.transform(g)[1] == Subspace(2, [(2 + I, I)])
