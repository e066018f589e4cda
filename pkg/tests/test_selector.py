import math

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fansub.pressure import Polytropic, PotentialContext
from fansub.selector import (
    SelectionExhausted,
    SelectorOptions,
    a_conditions,
    choose_a,
    choose_b,
    choose_epsilon,
    compute_q2,
    construct,
    entropy_remainder,
    epsilon_condition,
)
from fansub.states import SymmetricContactDatum, lambda_max, subsolution_matrix

import oracles

LAW = Polytropic(1.0, 2.0)
CTX = PotentialContext(1.0)
DATUM = SymmetricContactDatum(1.0, 1.0)
B = math.sqrt(3.0)


def test_choose_b():
    assert choose_b(LAW, 1.0) == pytest.approx(float(mp.sqrt(3)), rel=1e-15)
    for rho0 in (0.3, 1.0, 7.0):
        assert choose_b(Polytropic(1.0, 1.0), rho0) == pytest.approx(math.sqrt(2), rel=1e-15)


def test_epsilon_ladder_golden():
    eps = choose_epsilon(LAW, DATUM, CTX)
    assert eps.value == 0.0625
    assert eps.tried == (0.5, 0.25, 0.125, 0.0625)
    # for p = rho^2 and rho* = 1 the condition is 6 eps + eps^2 < 1/2
    for e in (0.5, 0.25, 0.125, 0.0625, 0.01):
        assert epsilon_condition(LAW, DATUM, CTX, e).lhs == pytest.approx(6 * e + e * e, rel=1e-13)
    assert eps.check.slack >= eps.check.margin(0.1)


def test_larger_u0_does_not_shrink_epsilon():
    assert choose_epsilon(LAW, SymmetricContactDatum(1.0, 5.0), CTX).value >= 0.0625


def test_compute_q2():
    assert compute_q2(LAW, DATUM, 0.0625) == 1.189453125
    assert compute_q2(LAW, SymmetricContactDatum(1.0, -1.0), 0.0625) == 1.189453125
    assert compute_q2(LAW, DATUM, 1e-14) == pytest.approx(LAW.p(1.0) + 0.25, rel=1e-12)


def test_a_ladder_golden():
    a = choose_a(LAW, DATUM, CTX, B, 0.0625)
    assert a == pytest.approx(float(mp.sqrt(3) / 8), rel=1e-15)
    assert choose_a(LAW, SymmetricContactDatum(1.0, -1.0), CTX, B, 0.0625) == a
    for k in (2, 4):
        a3 = a_conditions(LAW, DATUM, CTX, B, 0.0625, B / k)[2]
        assert not a3.holds(0.1)
    a3 = a_conditions(LAW, DATUM, CTX, B, 0.0625, B / 8)[2]
    assert a3.lhs == pytest.approx(0.0688782, abs=5e-8)
    ref_rhs = (mp.sqrt(3) / 8 * mp.mpf("0.9375")) ** 2
    assert a3.rhs == pytest.approx(float(ref_rhs), rel=1e-14)
    assert a3.rhs == pytest.approx(0.0411987, abs=5e-8)


def test_a_half_b_values():
    a3 = a_conditions(LAW, DATUM, CTX, B, 0.0625, B / 2)[2]
    assert a3.lhs == pytest.approx(0.0872803, abs=5e-8)
    assert a3.rhs == pytest.approx(0.6591797, abs=5e-8)


def test_golden_pipeline_against_mpmath():
    ref = oracles.pipeline(1, 2, 1, 1)
    c = construct(DATUM, LAW, CTX)
    sel = c.selection_dict()
    for key in ("b", "eps", "a", "rho1", "rho2", "q1", "q2"):
        assert sel[key] == pytest.approx(float(ref[key]), rel=1e-12), key
    assert sel["rho1"] == 113 / 112
    en = c.checks["en"]
    assert en.lhs == pytest.approx(float(ref["en_lhs"]), rel=1e-10)
    assert en.rhs == pytest.approx(float(ref["en_rhs"]), rel=1e-10)
    assert en.slack == pytest.approx(0.0198, abs=1e-4)
    assert c.report.all_pass and c.internal_error is None
    r1 = c.subsolution.interior[0]
    assert r1.U.u12 == pytest.approx(B * 1.0 * (113 / 112 - 1), rel=1e-12)
    assert r1.U.u12 != 0


@pytest.mark.parametrize("gamma,rho0,u0", [(1.4, 0.5, 0.3), (3.0, 2.0, -5.0), (1.0, 2.0, 1.0)])
def test_pipeline_against_mpmath(gamma, rho0, u0):
    ref = oracles.pipeline(1, gamma, rho0, u0)
    c = construct(SymmetricContactDatum(rho0, u0), Polytropic(1.0, gamma))
    sel = c.selection_dict()
    for key in ("b", "eps", "a", "rho1", "rho2", "q1", "q2"):
        assert sel[key] == pytest.approx(float(ref[key]), rel=1e-10), key


def test_det1_factors_sum_to_trace():
    c = construct(DATUM, LAW, CTX)
    p = c.params
    rho0, u0, b = 1.0, 1.0, p.b
    jump = p.rho1 - rho0
    p0, p1 = LAW.p(rho0), LAW.p(p.rho1)
    f1 = p.rho1 * u0 * u0 + b * b * jump + p0 + p1 - 2 * p.q1
    f2 = -b * b * jump * rho0 / p.rho1 - p0 + p1
    tr = p.rho1 * u0 * u0 + b * b * jump * jump / p.rho1 + 2 * (p1 - p.q1)
    assert f1 < 0 and f2 < 0
    assert f1 + f2 == pytest.approx(tr, rel=1e-12)
    M = subsolution_matrix(c.subsolution.interior[0], LAW)
    assert M.trace == pytest.approx(tr, rel=1e-12)


def test_interior_lambda_max_negative():
    c = construct(DATUM, LAW, CTX)
    for s in c.subsolution.interior:
        assert lambda_max(subsolution_matrix(s, LAW)) < 0


@settings(max_examples=40, deadline=None)
@given(
    gamma=st.sampled_from([1.0, 1.4, 2.0, 3.0]),
    rho0=st.floats(0.3, 3.0),
    u0=st.floats(0.1, 6.0),
    k=st.sampled_from([0.5, 2.0, 0.7]),
)
def test_rho_star_invariance(gamma, rho0, u0, k):
    law = Polytropic(1.0, gamma)
    datum = SymmetricContactDatum(rho0, u0)
    base = construct(datum, law, PotentialContext(rho0))
    other = construct(datum, law, PotentialContext(k * rho0))
    assert other.eps.value == base.eps.value
    assert other.a == base.a
    for name in ("epsilon", "a1", "en"):
        s0, s1 = base.checks[name].slack, other.checks[name].slack
        assert s1 == pytest.approx(s0, rel=1e-9, abs=1e-12), name


@settings(max_examples=40, deadline=None)
@given(gamma=st.sampled_from([1.0, 1.4, 2.0, 3.0]), rho0=st.floats(0.3, 3.0), u0=st.floats(0.1, 6.0))
def test_construct_always_verifies(gamma, rho0, u0):
    c = construct(SymmetricContactDatum(rho0, u0), Polytropic(1.0, gamma))
    assert c.report.all_pass, c.internal_error
    assert 0 < c.a < c.b


def test_exhaustion_is_raised():
    # a ladder that starts far too high and is not allowed to descend
    opts = SelectorOptions(eps_start=0.99, max_halvings=1)
    with pytest.raises(SelectionExhausted):
        choose_epsilon(LAW, DATUM, CTX, opts)


def test_options_validation():
    with pytest.raises(ValueError):
        SelectorOptions(theta=1.0)
    with pytest.raises(ValueError):
        choose_a(LAW, DATUM, CTX, B, 0.0625, SelectorOptions(a_start=B))


def test_entropy_remainder_matches_verifier():
    c = construct(DATUM, LAW, CTX)
    en = entropy_remainder(LAW, DATUM, CTX, c.params)
    assert en.slack > 0
    interior = [c.report[f"entropy.iface{i}"].slack for i in (1, 2)]
    assert interior[0] == pytest.approx(interior[1], rel=1e-12)
    assert interior[0] == pytest.approx(en.slack, rel=1e-9)
