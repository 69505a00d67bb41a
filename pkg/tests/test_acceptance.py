"""Acceptance gate: one test per criterion, each run at its stated tolerance.

The terminal summary (see conftest.py) prints one PASS/FAIL line per
criterion. Criteria that cannot be met are implemented as stated and left
failing.
"""

import math
from types import SimpleNamespace

import numpy as np
import pytest
from scipy.optimize import brentq

from kdvb import asymptotics as asy
from kdvb import cli, pde_sim
from kdvb import phase_plane as pp
from kdvb.model import WaveParameters, emden_fowler_form, hamiltonian, tail_decay_rate, travelling_wave_field
from kdvb.odeint import (
    IntegratorConfig,
    default_trace_span,
    detect_left_state,
    integrate,
    measure_decay_rate,
    seed_from_tail,
    shock_profile,
    trace_wave,
)

from oracles import jacobian_eigenvalues, soliton

crit = pytest.mark.criterion


def _random_params(seed, n=100):
    rng = np.random.default_rng(seed)
    return [WaveParameters(*rng.uniform(0.1, 5.0, 3)) for _ in range(n)]


def _report(cid, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] {cid}: {detail}")


@crit("C1", "regime trichotomy for alpha in {3, 2, 1, 0} with defective boundary")
def test_c1_trichotomy():
    labels = [pp.classify(WaveParameters(a, 1.0, 1.0)).case_label for a in (3.0, 2.0, 1.0, 0.0)]
    boundary = pp.singular_point(WaveParameters(2.0, 1.0, 1.0), (2.0, 0.0))
    kinds = [pp.singular_point(WaveParameters(a, 1.0, 1.0), (2.0, 0.0)).kind for a in (3.0, 1.0, 0.0)]
    ok = (
        labels == [pp.A_NODAL, pp.A_NODAL, pp.B_FOCAL, pp.C_CENTRAL]
        and kinds == [pp.NODE, pp.FOCUS, pp.CENTER]
        and pp.classify(WaveParameters(2.0, 1.0, 1.0)).defective
        and boundary.defective
        and boundary.eigenvalues == (1.0, 1.0)
    )
    _report("C1", ok, f"labels={labels} boundary mu={boundary.eigenvalues}")
    assert ok


@crit("C2", "first two tail coefficients match the closed forms to 1e-12 (100 sets)")
def test_c2_tail_coefficients():
    worst = 0.0
    for p in _random_params(2):
        u_inf = 1.0
        k = emden_fowler_form(p).k
        a, b = p.alpha, p.beta
        tail = asy.build_tail(p, u_inf, 1)
        ref0 = -2 * k * k * a * a * u_inf / b
        ref1 = -8 * k**4 * a * a * u_inf**2 / ((k - 1) * (3 * k - 1) * b)
        worst = max(worst, abs(tail.zeta_coefficients[0] / ref0 - 1), abs(tail.zeta_coefficients[1] / ref1 - 1))
    _report("C2", worst < 1e-12, f"max relative deviation {worst:.2e}")
    assert worst < 1e-12


P3 = WaveParameters(2.0, 1.0, 1.0)


@crit("C3a", "ODE from zeta0=12 tail seed vs series on [12, 17]: max rel err < 1e-6")
def test_c3a_series_vs_ode():
    seed = seed_from_tail(P3, 1.0, 12.0, 3)
    traj = integrate(travelling_wave_field(P3), seed, (12.0, 17.0), IntegratorConfig(rel_tol=1e-12, abs_tol=1e-18))
    z = np.linspace(12.0, 17.0, 501)
    u_ode = traj(z)[:, 0]
    u_ser = np.array([asy.eval_tail(P3, 1.0, 3, zz)[0] for zz in z])
    err = float(np.max(np.abs(u_ode - u_ser) / np.abs(u_ser)))
    _report("C3a", err < 1e-6, f"max relative error {err:.3g}")
    assert err < 1e-6


@crit("C3b", "fitted tail decay rate within 1% of (k-1) alpha/(2 beta) = 0.41421")
def test_c3b_decay_rate():
    # the solution through the tail, integrated in its stable (backward) direction
    prof = trace_wave(P3, 1.0, 40.0, 12.0, n_samples=2001)
    rate = measure_decay_rate(prof, (20.0, 40.0))
    expected = tail_decay_rate(P3)
    rel = abs(rate / expected - 1)
    _report("C3b", rel < 0.01 and abs(expected - 0.41421) < 1e-5, f"fitted {rate:.6f} vs {expected:.6f}")
    assert rel < 0.01 and abs(expected - 0.41421) < 1e-5


@crit("C4", "zero-speed tail: |zeta u + 2| < 0.04 on [50, 200]")
def test_c4_zero_speed_tail():
    p = WaveParameters(1.0, 1.0, 0.0)
    z0, ze = default_trace_span(p, -1.0)
    prof = trace_wave(p, -1.0, z0, ze, n_samples=4001)
    mask = (prof.zeta >= 50.0) & (prof.zeta <= 200.0)
    worst = float(np.max(np.abs(prof.zeta[mask] * prof.u[mask] + 2.0)))
    _report("C4", worst < 0.04, f"max |zeta u + 2| = {worst:.4f}")
    assert worst < 0.04


@crit("C5", "closed-form series converges; order-3 discrepancy 99.5 vs 156 reproduced")
def test_c5_convergence_and_discrepancy():
    zmin = asy.min_admissible_zeta(P3, 1.0)
    tail = asy.build_tail(P3, 1.0, 25)
    ratios = []
    for zeta in (zmin, zmin + 5, zmin + 20):
        terms = np.abs(tail.zeta_coefficients * np.exp(-tail.zeta_rates * zeta))
        ratios.append(float(np.max(terms[1:] / terms[:-1])))
    closed = []
    for i in range(1, 26):
        coef, rate = asy.closed_form_series_term(P3, 1.0, i)
        closed.append(abs(coef) * math.exp(-rate * zmin))
    closed_ratio = max(b / a for a, b in zip(closed, closed[1:]))
    row = asy.series_discrepancy(P3, 1.0, 3)[3]
    ok = (
        max(ratios) < 1
        and closed_ratio < 1
        and f"{row['closed_form']:.3g}" == "99.5"
        and f"{row['recurrence']:.3g}" == "156"
    )
    _report("C5", ok, f"max term ratio {max(ratios):.3f}/{closed_ratio:.3f}; c3 closed {row['closed_form']:.2f} recurrence {row['recurrence']:.2f}")
    assert ok


def _crossings(prof, level):
    shifted = SimpleNamespace(zeta=prof.zeta, u=prof.u - level, v=prof.v)
    return asy.count_isolated_zeros(shifted).count


@crit("C6", "zero counts finite and unchanged under 2x refinement (cases A and B)")
def test_c6_zero_counts():
    counts = {}
    for alpha in (3.0, 1.0):
        p = WaveParameters(alpha, 1.0, 1.0)
        for branch in (-1.0, 1.0):
            z0, ze = default_trace_span(p, branch)
            coarse = trace_wave(p, branch, z0, ze, IntegratorConfig(), n_samples=2001)
            fine = trace_wave(p, branch, z0, ze, IntegratorConfig().refined(0.5), n_samples=4001)
            for level in (0.0, 2.0):
                counts[(alpha, branch, level)] = (_crossings(coarse, level), _crossings(fine, level))
    ok = all(a == b for a, b in counts.values())
    _report("C6", ok, ", ".join(f"a={k[0]:g} u_inf={k[1]:g} level={k[2]:g}: {v}" for k, v in counts.items()))
    assert ok


@crit("C7", "soliton: max u = 3.000 +- 0.005, returns below 1e-3, sech^2 shape, H drift < 1e-8")
def test_c7_soliton():
    p = WaveParameters(0.0, 1.0, 1.0)
    z0, ze = default_trace_span(p, -1.0)
    prof = trace_wave(p, -1.0, z0, ze)
    tr = prof.trajectory
    zp = prof.zeta[np.argmax(prof.u)]
    peak = brentq(lambda z: tr(z)[1], zp - 0.5, zp + 0.5)
    shape = float(np.max(np.abs(prof.u - soliton(1.0, 1.0, prof.zeta - peak))))
    drift = float(np.ptp(hamiltonian(p, tr.y[:, 0], tr.y[:, 1])))
    umax = float(tr(peak)[0])
    ok = abs(umax - 3.0) <= 0.005 and prof.u[-1] < 1e-3 and shape < 5e-3 and drift < 1e-8
    _report("C7", ok, f"max u {umax:.6f}, end {prof.u[-1]:.2e}, sech^2 deviation {shape:.2e}, H drift {drift:.2e}")
    assert ok


@crit("C8", "stable saddle eigenvalue equals the tail decay rate to 1e-12 (100 sets)")
def test_c8_eigenvalue_identity():
    worst = 0.0
    for p in _random_params(8):
        stable = pp.stable_saddle_eigenvalue(p)
        ref = float(np.min(jacobian_eigenvalues(p.alpha, p.beta, p.lambda_speed, 0.0).real))
        assert stable == pytest.approx(ref, rel=1e-8)
        worst = max(worst, abs(-stable / tail_decay_rate(p) - 1))
    _report("C8", worst < 1e-12, f"max relative deviation {worst:.2e}")
    assert worst < 1e-12


@pytest.mark.slow
@crit("C9", "PDE: case-A shock speed within 2%, L2 shape drift < 1e-2, periodic mass to 1e-10")
def test_c9_pde(tmp_path):
    p = WaveParameters(3.0, 1.0, 1.0)
    prof = shock_profile(p, -1.0, -160.0, 160.0)
    grid = pde_sim.Grid1D.span(-40.0, 40.0, 2048, periodic=False, u_left=2.0, u_right=0.0)
    state = pde_sim.field_from_profile(prof, grid, center=-2.5, level=1.0)
    snaps = pde_sim.run(state, p, 5.0, snapshot_every=1.0)
    speed = pde_sim.measure_speed(snaps, level=1.0)
    drift, _ = pde_sim.shape_drift(snaps[0], snaps[-1], guess=5.0)

    pgrid = pde_sim.Grid1D.span(-40.0, 40.0, 2048)
    bump = pde_sim.FieldState(pgrid, 2.0 * np.exp(-(pgrid.x**2) / 16.0))
    psnaps = pde_sim.run(bump, p, 5.0, snapshot_every=1.0)
    m0 = psnaps[0].mass()
    mass_err = max(abs(s.mass() - m0) / abs(m0) for s in psnaps)
    ok = abs(speed - 1.0) < 0.02 and drift < 1e-2 and mass_err < 1e-10
    _report("C9", ok, f"speed {speed:.6f}, drift {drift:.2e}, mass error {mass_err:.2e}")
    assert ok


@crit("C10", "repeated CLI runs give byte-identical CSV and SVG")
def test_c10_determinism(tmp_path, capsys):
    runs = []
    for n in range(2):
        out = tmp_path / f"run{n}"
        for argv in (
            ["profile", "--alpha", "1", "--overlay"],
            ["compare"],
            ["series", "--zeta", "10"],
            ["pde-check", "--alpha", "3", "--grid-n", "256", "--x-min", "-20", "--x-max", "20", "--t-end", "1", "--snapshot-every", "0.25"],
            ["sweep", "--alpha-values", "1,3", "--jobs", "2"],
        ):
            assert cli.main(argv + ["--out", str(out)]) == 0
        runs.append({f.name: f.read_bytes() for f in sorted(out.iterdir())})
    capsys.readouterr()
    names = set(runs[0])
    ok = runs[0] == runs[1] and any(n.endswith(".svg") for n in names) and any(n.endswith(".csv") for n in names)
    _report("C10", ok, f"{len(names)} artifacts compared")
    assert ok
