import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fansub.pressure import Polytropic, PotentialContext
from fansub.states import (
    FanPartition,
    FanState,
    Sym2,
    SymmetricContactDatum,
    TracelessSym2,
    boundary_states,
    lambda_max,
    subsolution_matrix,
)
from fansub.verifier import sign_agreement

LAW = Polytropic(1.0, 2.0)
CTX = PotentialContext(1.0)


def test_boundary_states_golden():
    left, right = boundary_states(SymmetricContactDatum(1.0, 1.0), LAW, CTX)
    assert right.m == (1.0, 0.0) and left.m == (-1.0, 0.0)
    for s in (left, right):
        assert s.q == 1.5
        assert s.U == TracelessSym2(0.5, 0.0)
    assert right.F == (1.5, 0.0)
    assert left.F == (-1.5, 0.0)


@pytest.mark.parametrize("rho0,u0", [(1.0, 1.0), (0.5, -0.3), (2.0, 5.0)])
def test_boundary_states_mirror(rho0, u0):
    law = Polytropic(1.0, 1.4)
    ctx = PotentialContext(0.7)
    pos = boundary_states(SymmetricContactDatum(rho0, u0), law, ctx)
    neg = boundary_states(SymmetricContactDatum(rho0, -u0), law, ctx)
    for s, t in zip(pos, neg):
        assert t == s.reflect_x()


def test_boundary_state_is_marginal():
    left, right = boundary_states(SymmetricContactDatum(1.0, 1.0), LAW, CTX)
    for s in (left, right):
        M = subsolution_matrix(s, LAW)
        # U = m(x)m/rho + (p - q)I cancels every term of M
        assert (M.m11, M.m12, M.m22) == (0.0, 0.0, 0.0)
        assert lambda_max(M) == 0.0
        assert sign_agreement(M.m11, M.m12, M.m22).marginal


def test_subsolution_matrix_examples():
    s = FanState(1.3, (0.0, 0.0), TracelessSym2(0.0, 0.0), LAW.p(1.3) + 1.0, (0.0, 0.0))
    M = subsolution_matrix(s, LAW)
    assert (M.m11, M.m12, M.m22) == pytest.approx((-1.0, 0.0, -1.0), abs=1e-15)
    s = FanState(0.8, (0.3, -0.7), TracelessSym2(0.2, 0.4), 2.0, (0.0, 0.0))
    M = subsolution_matrix(s, LAW)
    assert M.trace == pytest.approx((0.3**2 + 0.7**2) / 0.8 + 2 * (LAW.p(0.8) - 2.0), rel=1e-14)


def test_lambda_max_examples():
    assert lambda_max(Sym2(1.0, 0.0, 1.0)) == 1.0
    assert lambda_max(Sym2(-2.0, 0.0, 3.0)) == 3.0
    assert lambda_max(Sym2(4.0, 0.0, -1.0)) == 4.0
    assert lambda_max(Sym2(0.0, 1.0, 0.0)) == 1.0
    assert lambda_max(Sym2(-1.0, 0.0, -1.0)) == -1.0


def _random_matrices(n, seed):
    rng = random.Random(seed)
    out = []
    for k in range(n):
        if k % 4 == 0:
            # near-degenerate: det within ~1e-11 of zero
            x, y = rng.uniform(-3, 3), rng.uniform(-3, 3)
            c = math.sqrt(abs(x * y)) if x * y > 0 else 0.0
            out.append(Sym2(x, c + rng.uniform(-1e-12, 1e-12), y))
        else:
            out.append(Sym2(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)))
    return out


def test_lambda_max_matches_numpy_and_sign_test():
    disagreements = 0
    for M in _random_matrices(1000, seed=1):
        ref = np.linalg.eigvalsh(np.array([[M.m11, M.m12], [M.m12, M.m22]]))[-1]
        assert lambda_max(M) == pytest.approx(ref, abs=1e-12)
        check = sign_agreement(M.m11, M.m12, M.m22)
        disagreements += not check.agrees
    assert disagreements == 0


@settings(max_examples=300, deadline=None)
@given(
    m11=st.floats(-1e3, 1e3),
    m12=st.floats(-1e3, 1e3),
    m22=st.floats(-1e3, 1e3),
)
def test_negative_definite_iff_trace_and_det(m11, m12, m22):
    M = Sym2(m11, m12, m22)
    lam = lambda_max(M)
    tr, det = M.trace, M.det
    scale = 1 + abs(m11) + abs(m12) + abs(m22)
    if min(abs(lam), abs(tr), abs(det)) > 1e-9 * scale * scale:
        assert (lam < 0) == (tr < 0 and det > 0)


@settings(max_examples=100, deadline=None)
@given(u11=st.floats(-10, 10), u12=st.floats(-10, 10))
def test_traceless_by_representation(u11, u12):
    U = TracelessSym2(u11, u12)
    (a, b), (c, d) = U.as_rows()
    assert a + d == 0 and b == c


def test_datum_and_partition_invariants():
    with pytest.raises(ValueError, match="rho0"):
        SymmetricContactDatum(0.0, 1.0)
    with pytest.raises(ValueError, match="u0"):
        SymmetricContactDatum(1.0, 0.0)
    assert FanPartition((-2.0, -1.0, 1.0, 2.0)).is_ordered()
    assert not FanPartition((-1.0, -2.0, 1.0, 2.0)).is_ordered()
