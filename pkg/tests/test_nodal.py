from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wpdeg.centralfibre import classify_central
from wpdeg.errors import OutOfHypothesisError
from wpdeg.nodal import Divisor, Lin, NodalConfiguration, adjunction, blowup_model, classify_nodal, quadric_hodge
from wpdeg.report import Verdict


@pytest.mark.parametrize("n", [3, 4, 5, 6])
@pytest.mark.parametrize("k", [0, 1, 7])
def test_adjunction_values(n, k):
    res = adjunction(NodalConfiguration(n, 2, k))
    assert res.k_i == 2 * k + n
    assert set(res.K_Xprime_coeffs.values()) == {n}
    assert res.K_proper_transform_coeff == n - 2
    assert res.section_exists


def test_low_dimensions():
    assert adjunction(NodalConfiguration(1, 1)).K_proper_transform_coeff == -1
    assert not adjunction(NodalConfiguration(1, 1)).section_exists
    assert adjunction(NodalConfiguration(2, 1)).K_proper_transform_coeff == 0
    for n in (1, 2):
        with pytest.raises(OutOfHypothesisError, match="n >= 3"):
            classify_nodal(NodalConfiguration(n, 1))


def test_transcript_records_the_derivation():
    tr = adjunction(NodalConfiguration(3, 1)).transcript
    assert "claim: L_X0 = (-2)*L_D1" in tr
    assert any("k_i = 3" in line for line in tr)
    assert tr[-1] == "K_X0 = (1)*L_E1"


@given(st.integers(3, 8), st.integers(1, 50), st.integers(0, 20))
@settings(max_examples=60, deadline=None)
def test_verdict_independent_of_m_and_k(n, m, k):
    cls, model = classify_nodal(NodalConfiguration(n, m, k))
    assert cls.verdict is Verdict.FINITE
    assert cls.witness["canonical_class"] == f"{n - 2} * sum L_E"
    assert classify_central(model).verdict is cls.verdict
    assert len(model.components) == m + 1


def test_blowup_model_shape():
    model = blowup_model(NodalConfiguration(4, 3))
    assert [c.h(4, 0) for c in model.components] == [1, 0, 0, 0]
    assert model.strata(1)[0].hodge_numbers == quadric_hodge(3)
    assert quadric_hodge(2)[1][1] == 2


def test_divisor_arithmetic():
    a = Divisor.of("X'", L_D1=1, L_D2=2)
    b = Divisor.of("X'", L_D1=-1)
    assert (a + b).symbols() == ["L_D2"]
    assert (a - a).symbols() == []
    assert Lin(ki=2).at(3) == 6


def test_invalid_configuration():
    with pytest.raises(ValueError):
        NodalConfiguration(3, 0)
    with pytest.raises(ValueError):
        NodalConfiguration(0, 1)
