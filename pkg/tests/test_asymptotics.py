import math
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kdvb import asymptotics as asy
from kdvb.errors import AsymptoticRegimeError, ParameterError
from kdvb.model import WaveParameters, emden_fowler_form, frame_jacobian, map_frame, ode_residual, reduce_coefficients

from oracles import k_sigma, symbolic_tail_coefficients

REF = WaveParameters(2.0, 1.0, 1.0)
# recurrence coefficients for alpha=2, beta=1, lambda=1, u_inf=1 (sympy oracle)
FROZEN_C = [1.0, 5.956166705643482, 31.45754784734044, 155.59352968469204, 738.3960491302133, 3405.753127931104]
# eval_tail(REF, 1, m, 10) for m = 0..3
FROZEN_U10 = [-0.2542221211250552, -0.2782808976371712, -0.2802998446193241, -0.2804585110079425]

pos = st.floats(0.1, 5.0)


def test_recurrence_matches_frozen_oracle():
    form = emden_fowler_form(REF)
    c = asy.exact_tail_coefficients(1.0, form.sigma, 5, epsilon=form.epsilon)
    assert c == pytest.approx(FROZEN_C, rel=1e-12)


@settings(max_examples=15)
@given(pos, pos, pos, st.floats(-2, 2).filter(lambda x: abs(x) > 1e-3))
def test_recurrence_matches_symbolic(alpha, beta, lam, u_inf):
    form = emden_fowler_form(WaveParameters(alpha, beta, lam))
    ref = symbolic_tail_coefficients(u_inf, form.epsilon, 3)
    got = asy.exact_tail_coefficients(u_inf, form.sigma, 3, epsilon=form.epsilon)
    assert got == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("m", range(4))
def test_eval_tail_frozen(m):
    u, _ = asy.eval_tail(REF, 1.0, m, 10.0)
    assert u == pytest.approx(FROZEN_U10[m], rel=1e-13)


def test_eval_tail_two_terms_printed_value():
    assert round(asy.eval_tail(REF, 1.0, 1, 10.0)[0], 4) == -0.2783


def test_regime_guard():
    with pytest.raises(AsymptoticRegimeError) as info:
        asy.eval_tail(REF, 1.0, 3, 3.0)
    assert info.value.min_zeta == pytest.approx(asy.min_admissible_zeta(REF, 1.0))
    assert 3.0 < info.value.min_zeta < 10.0


def test_closed_form_agrees_up_to_second_order():
    rows = asy.series_discrepancy(REF, 1.0, 5)
    for row in rows[:3]:
        assert row["ratio"] == pytest.approx(1.0, rel=1e-13)
    assert f"{rows[3]['closed_form']:.4g}" == "99.49"
    assert f"{rows[3]['recurrence']:.5g}" == "155.59"


@given(pos, pos, pos, st.integers(1, 5))
def test_printed_closed_form_scaling(alpha, beta, lam, i):
    p = WaveParameters(alpha, beta, lam)
    k = emden_fowler_form(p).k
    default, rate = asy.closed_form_series_term(p, 1.3, i)
    printed, rate2 = asy.closed_form_series_term(p, 1.3, i, printed=True)
    assert rate == rate2
    assert default == pytest.approx(printed * (4 * k * k) ** (i - 1), rel=1e-10)


@given(pos, pos, pos, st.floats(0.2, 3.0))
def test_first_two_zeta_coefficients(alpha, beta, lam, u_inf):
    k, _ = k_sigma(alpha, beta, lam)
    tail = asy.build_tail(WaveParameters(alpha, beta, lam), u_inf, 1)
    c0 = -2 * k * k * alpha * alpha * u_inf / beta
    c1 = -8 * k**4 * alpha**2 * u_inf**2 / ((k - 1) * (3 * k - 1) * beta)
    assert tail.zeta_coefficients[0] == pytest.approx(c0, rel=1e-12)
    assert tail.zeta_coefficients[1] == pytest.approx(c1, rel=1e-9)


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_residual_leading_order(m):
    """Truncated-series residual scales like xi^(sigma + m eps) (first surviving power n = m+1)."""
    form = emden_fowler_form(REF)
    eps = form.epsilon
    c = asy.exact_tail_coefficients(1.0, form.sigma, m, epsilon=eps)
    rc = asy.residual_coefficients(c, eps)
    assert np.all(np.abs(rc[1 : m + 1]) < 1e-9 * np.abs(rc).max())
    assert abs(rc[m + 1]) > 0
    # xi^eps = t small: residual / leading term -> 1 and the local power -> sigma + m eps
    xi = np.array([1e-3, 1e-4]) ** (1.0 / eps)
    res = asy.emden_fowler_residual(form.sigma, c, xi, epsilon=eps)
    lead = rc[m + 1] * xi ** ((m + 1) * eps - 2.0)
    assert res[1] / lead[1] == pytest.approx(1.0, rel=1e-2)
    slope = math.log(abs(res[1] / res[0])) / math.log(xi[1] / xi[0])
    assert slope == pytest.approx(form.sigma + m * eps, abs=1e-2)


@given(st.integers(0, 5), st.floats(1.5, 1e6))
def test_residual_is_finite_power_sum(m, xi):
    form = emden_fowler_form(REF)
    eps = form.epsilon
    c = asy.exact_tail_coefficients(0.7, form.sigma, m, epsilon=eps)
    rc = asy.residual_coefficients(c, eps)
    direct = asy.emden_fowler_residual(form.sigma, c, xi, epsilon=eps)
    powers = np.arange(len(rc)) * eps - 2.0
    assert direct == pytest.approx(float(np.sum(rc * xi**powers)), rel=1e-8, abs=1e-12 * xi**-2)


def test_zero_speed_tail():
    p = WaveParameters(1.5, 1.0, 0.0)
    assert asy.eval_tail_zero_speed(p, 30.0) == pytest.approx(-0.1)
    with pytest.raises(ParameterError):
        asy.build_tail(p, 1.0, 2)
    with pytest.raises(ParameterError):
        asy.eval_tail_zero_speed(REF, 10.0)


def test_sigma_outside_range():
    with pytest.raises(ParameterError):
        asy.exact_tail_coefficients(1.0, -2.6, 2)
    with pytest.raises(ParameterError):
        asy.exact_tail_coefficients(1.0, -2.0, 2)


def _profile(z, u, v=None):
    return SimpleNamespace(zeta=np.asarray(z), u=np.asarray(u), v=None if v is None else np.asarray(v))


def test_zero_count_sine():
    z = np.linspace(0.1, 10, 300)
    zc = asy.count_isolated_zeros(_profile(z, np.sin(z), np.cos(z)))
    assert zc.count == 3
    assert zc.locations == pytest.approx([math.pi, 2 * math.pi, 3 * math.pi], abs=1e-8)


def test_zero_count_intervals_and_order():
    z = np.linspace(0, 5, 6)[::-1]
    u = np.array([0.0, 0.0, 0.0, 1.0, -1.0, 2.0])
    zc = asy.count_isolated_zeros(_profile(z, u))
    assert zc.count == 2 and zc.zero_intervals == ((3.0, 5.0),)
    with pytest.raises(ValueError):
        asy.count_isolated_zeros(_profile([0, 1, 1], [1, 2, 3]))


@given(st.lists(st.floats(0.2, 9.8), min_size=1, max_size=4, unique=True))
def test_zero_count_polynomial(roots):
    roots = sorted(roots)
    if np.min(np.diff(roots), initial=1.0) < 0.1:
        return
    z = np.linspace(0, 10, 4001)
    u = np.prod([z - r for r in roots], axis=0)
    v = np.polyval(np.polyder(np.poly(roots)), z)
    zc = asy.count_isolated_zeros(_profile(z, u, v))
    assert zc.count == len(roots)
    assert zc.locations == pytest.approx(roots, abs=1e-7)


def test_jacobian_links_series_residuals():
    form = emden_fowler_form(REF)
    c = asy.exact_tail_coefficients(1.0, form.sigma, 2, epsilon=form.epsilon)
    co = reduce_coefficients(REF)
    z = 12.0
    u, du = asy.eval_tail(REF, 1.0, 2, z)
    d2u = asy.eval_tail_second_derivative(REF, 1.0, 2, z)
    xi, _ = map_frame(REF, z, 0.0)
    r7 = asy.emden_fowler_residual(form.sigma, c, xi, epsilon=form.epsilon)
    assert ode_residual(co, u, du, d2u) == pytest.approx(frame_jacobian(REF, z) * r7, rel=1e-6)
