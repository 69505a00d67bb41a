import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kdvb import phase_plane as pp
from kdvb.model import WaveParameters, tail_decay_rate

from oracles import jacobian_eigenvalues

pos = st.floats(0.05, 10.0)
# alpha = 0 exactly or clearly positive; the eigenvalue test uses a 1e-12 relative tolerance
alphas = st.one_of(st.just(0.0), st.floats(1e-3, 10.0))


@pytest.mark.parametrize(
    "alpha,label,kind",
    [(3.0, pp.A_NODAL, pp.NODE), (2.0, pp.A_NODAL, pp.NODE), (1.0, pp.B_FOCAL, pp.FOCUS), (0.0, pp.C_CENTRAL, pp.CENTER)],
)
def test_trichotomy(alpha, label, kind):
    p = WaveParameters(alpha, 1.0, 1.0)
    assert pp.classify(p).case_label == label
    assert pp.label_from_eigenvalues(p) == label
    assert pp.singular_point(p, (2.0, 0.0)).kind == kind
    assert pp.singular_point(p, (0.0, 0.0)).kind == pp.SADDLE


def test_boundary_is_defective_double_root():
    p = WaveParameters(2.0, 1.0, 1.0)
    assert pp.classify(p).defective
    sp_ = pp.singular_point(p, (2.0, 0.0))
    assert sp_.defective and sp_.eigenvalues == (1.0, 1.0)
    assert not pp.classify(WaveParameters(3.0, 1.0, 1.0)).defective


def test_zero_speed_is_degenerate():
    c = pp.classify(WaveParameters(1.0, 1.0, 0.0))
    assert c.degenerate and c.case_label == pp.DEGENERATE


def test_linearize_rejects_non_equilibrium():
    with pytest.raises(ValueError):
        pp.linearize(WaveParameters(1.0, 1.0, 1.0), (1.0, 0.0))


@given(alphas, pos, pos)
def test_eigenvalues_match_numpy(alpha, beta, lam):
    p = WaveParameters(alpha, beta, lam)
    for u in (0.0, 2 * lam):
        mine = np.sort_complex(np.array(pp.linearize(p, (u, 0.0))))
        ref = jacobian_eigenvalues(alpha, beta, lam, u)
        assert np.allclose(mine, ref, rtol=1e-7, atol=1e-7 * (1 + abs(ref).max()))


@given(alphas, pos, pos)
def test_label_agrees_with_discriminant(alpha, beta, lam):
    p = WaveParameters(alpha, beta, lam)
    assert pp.classify(p).case_label == pp.label_from_eigenvalues(p)


@given(pos, pos, pos)
def test_stable_eigenvalue_is_tail_rate(alpha, beta, lam):
    p = WaveParameters(alpha, beta, lam)
    assert -pp.stable_saddle_eigenvalue(p) == pytest.approx(tail_decay_rate(p), rel=1e-12)
    mu = pp.unstable_saddle_eigenvalue(p)
    assert mu * mu - p.ratio * mu - lam / beta == pytest.approx(0.0, abs=1e-9 * (1 + mu * mu))
