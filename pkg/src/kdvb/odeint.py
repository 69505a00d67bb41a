"""Adaptive Runge-Kutta integration and travelling-wave shooting.

The integrator is the Dormand-Prince 5(4) pair with local extrapolation,
a PI step-size controller and cubic Hermite dense output.

Orientation of the travelling wave: the origin is a saddle whose stable
direction carries the exponential tail as zeta -> +inf, while (2 lambda, 0)
has eigenvalues with positive real part, so it is reached as zeta -> -inf.
Profiles are therefore reconstructed by integrating backward from a tail
seed. Forward integration away from the seed is unstable: any defect of the
seed grows like exp(mu_plus (zeta - zeta0)) with mu_plus the unstable saddle
eigenvalue.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import asymptotics
from .errors import InsufficientExtentError, IntegrationError, ParameterError
from .model import WaveParameters, reduce_coefficients, travelling_wave_field
from .phase_plane import stable_saddle_eigenvalue, unstable_saddle_eigenvalue

# Dormand-Prince 5(4)
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B = np.array(_A[6] + [0.0])
_E = np.array(
    [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)

_SAFETY = 0.9
_PI_ALPHA = 0.7 / 5
_PI_BETA = 0.4 / 5
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_step: float = 1.0
    min_step: float = 1e-12
    max_steps: int = 200_000

    def __post_init__(self):
        if not (0 < self.rel_tol < 1 and 0 < self.abs_tol < 1):
            raise ParameterError("rel_tol and abs_tol must lie in (0, 1)")
        if not (0 < self.min_step < self.max_step):
            raise ParameterError("need 0 < min_step < max_step")
        if self.max_steps < 1:
            raise ParameterError("max_steps must be positive")

    def refined(self, factor: float = 0.5) -> "IntegratorConfig":
        """Copy with both tolerances multiplied by ``factor``."""
        return IntegratorConfig(
            self.rel_tol * factor, self.abs_tol * factor, self.max_step, self.min_step, self.max_steps
        )


@dataclass
class Trajectory:
    """Accepted steps of an integration with cubic Hermite dense output."""

    t: np.ndarray
    y: np.ndarray
    f: np.ndarray
    terminated: bool = False
    nfev: int = 0

    @property
    def t_final(self) -> float:
        return float(self.t[-1])

    def __call__(self, tq):
        t, y, f = self.t, self.y, self.f
        if t[0] > t[-1]:
            t, y, f = t[::-1], y[::-1], f[::-1]
        tq_arr = np.atleast_1d(np.asarray(tq, dtype=float))
        lo, hi = t[0], t[-1]
        span = hi - lo
        if np.any(tq_arr < lo - 1e-12 * max(abs(span), 1.0)) or np.any(tq_arr > hi + 1e-12 * max(abs(span), 1.0)):
            raise ValueError(f"query outside integrated interval [{lo}, {hi}]")
        idx = np.clip(np.searchsorted(t, tq_arr, side="right") - 1, 0, len(t) - 2)
        t0, t1 = t[idx], t[idx + 1]
        h = (t1 - t0)[:, None]
        s = ((tq_arr - t0) / (t1 - t0))[:, None]
        s2, s3 = s * s, s * s * s
        out = (
            (2 * s3 - 3 * s2 + 1) * y[idx]
            + (s3 - 2 * s2 + s) * h * f[idx]
            + (-2 * s3 + 3 * s2) * y[idx + 1]
            + (s3 - s2) * h * f[idx + 1]
        )
        return out[0] if np.ndim(tq) == 0 else out


def _error_norm(err, y, y_new, cfg):
    scale = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
    return float(np.max(np.abs(err) / scale))


def _initial_step(field, t0, y0, f0, direction, cfg):
    scale = cfg.abs_tol + cfg.rel_tol * np.abs(y0)
    d0 = float(np.max(np.abs(y0) / scale))
    d1 = float(np.max(np.abs(f0) / scale))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, cfg.max_step)
    y1 = y0 + direction * h0 * f0
    f1 = field(t0 + direction * h0, y1)
    d2 = float(np.max(np.abs(f1 - f0) / scale)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1, cfg.max_step)


def integrate(
    field: Callable,
    y0,
    span: tuple[float, float],
    cfg: IntegratorConfig = IntegratorConfig(),
    stop: Optional[Callable[[float, np.ndarray], bool]] = None,
) -> Trajectory:
    """Integrate y' = field(t, y) over ``span`` (forward or backward).

    ``stop(t, y)`` is checked after each accepted step; returning True ends
    the integration there and sets ``Trajectory.terminated``.

    Raises:
        IntegrationError: on step-size underflow or when ``max_steps`` is
            exhausted; carries the last accepted state.
    """
    t0, t1 = map(float, span)
    if t0 == t1:
        raise ParameterError("degenerate integration span")
    direction = 1.0 if t1 > t0 else -1.0
    y = np.array(y0, dtype=float)
    f = np.asarray(field(t0, y), dtype=float)
    nfev = 1
    h = _initial_step(field, t0, y, f, direction, cfg)
    nfev += 1
    t = t0
    ts, ys, fs = [t], [y.copy()], [f.copy()]
    err_prev = 1e-4
    rejected = False
    terminated = False
    steps = 0
    k = np.empty((7, y.size))
    while direction * (t1 - t) > 0:
        steps += 1
        if steps > cfg.max_steps:
            raise IntegrationError("step budget exhausted", t, y)
        remaining = abs(t1 - t)
        last = h >= remaining
        if last:
            h = remaining
        if h < cfg.min_step and not last:
            raise IntegrationError(f"step-size underflow (h={h:.3g})", t, y)
        hs = direction * h
        k[0] = f
        for s in range(1, 7):
            k[s] = field(t + _C[s] * hs, y + hs * np.dot(_A[s], k[:s]))
        nfev += 6
        y_new = y + hs * np.dot(_B, k)
        f_new = k[6]
        err = hs * np.dot(_E, k)
        if np.all(np.isfinite(y_new)) and np.all(np.isfinite(err)):
            errn = _error_norm(err, y, y_new, cfg)
        else:
            errn = math.inf
        if errn <= 1.0:
            t = t1 if last else t + hs
            y, f = y_new, f_new
            ts.append(t)
            ys.append(y.copy())
            fs.append(f.copy())
            if errn == 0:
                factor = _MAX_FACTOR
            else:
                factor = _SAFETY * errn**-_PI_ALPHA * err_prev**_PI_BETA
                factor = min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
            if rejected:
                factor = min(factor, 1.0)
            rejected = False
            err_prev = max(errn, 1e-4)
            h = min(h * factor, cfg.max_step)
            if stop is not None and stop(t, y):
                terminated = True
                break
        else:
            rejected = True
            factor = _MIN_FACTOR if not math.isfinite(errn) else max(_MIN_FACTOR, _SAFETY * errn**-0.2)
            h *= factor
            if h < cfg.min_step:
                raise IntegrationError(f"step-size underflow (h={h:.3g})", t, y)
    return Trajectory(np.array(ts), np.array(ys), np.array(fs), terminated=terminated, nfev=nfev)


@dataclass
class WaveProfile:
    """Sampled travelling wave on an increasing zeta grid."""

    zeta: np.ndarray
    u: np.ndarray
    v: np.ndarray
    params: WaveParameters
    terminated: bool = False
    trajectory: Optional[Trajectory] = field(default=None, repr=False)

    def __post_init__(self):
        self.zeta = np.asarray(self.zeta, dtype=float)
        self.u = np.asarray(self.u, dtype=float)
        self.v = np.asarray(self.v, dtype=float)
        if not (len(self.zeta) == len(self.u) == len(self.v)):
            raise ValueError("zeta, u, v must have equal length")
        if len(self.zeta) > 1 and not np.all(np.diff(self.zeta) > 0):
            raise ValueError("zeta must be strictly increasing")

    def rows(self):
        return np.column_stack([self.zeta, self.u, self.v])


def seed_from_tail(params: WaveParameters, u_inf: float, zeta0: float, m: int) -> tuple[float, float]:
    """(u, du/dzeta) of the order-m tail series at ``zeta0``."""
    return asymptotics.eval_tail(params, u_inf, m, zeta0)


def seed_zero_speed(params: WaveParameters, zeta0: float) -> tuple[float, float]:
    """(u, du/dzeta) of the algebraic lambda = 0 tail -2 alpha / zeta."""
    u = asymptotics.eval_tail_zero_speed(params, zeta0)
    return u, -u / zeta0


def auto_seed_zeta(params: WaveParameters, u_inf: float, dominance: float = 1e-3) -> float:
    """Seed location where the first correction is ``dominance`` times the leading term."""
    return asymptotics.min_admissible_zeta(params, u_inf, dominance=dominance)


def default_trace_span(params: WaveParameters, u_inf: float) -> tuple[float, float]:
    """(zeta0, zeta_end) covering the tail seed, the front and the left state."""
    lam, alpha, beta = params.lambda_speed, params.alpha, params.beta
    if alpha == 0:
        kappa = math.sqrt(lam / beta)
        # peak of 3 lambda sech^2 sits ln(12 lambda / offset) / kappa past the seed
        half = math.log(12.0 / 2e-6) / kappa
        return 1.5 * half, -half
    if lam == 0:
        return 200.0, 20.0
    zeta0 = auto_seed_zeta(params, u_inf)
    tail = asymptotics.build_tail(params, u_inf, 0)
    front = math.log(tail.amplitude * abs(u_inf) / lam) / tail.decay_rate
    a = params.ratio
    disc = a * a - 4.0 * lam / beta
    slow = 0.5 * (a - math.sqrt(disc)) if disc >= 0 else 0.5 * a
    return zeta0, front - max(20.0, 25.0 / slow)


def _funnel_bound(params: WaveParameters) -> float:
    if params.lambda_speed > 0:
        return 10.0 * 2.0 * params.lambda_speed
    return 10.0 * 2.0 * params.alpha**2 / params.beta


def _sample(traj: Trajectory, params: WaveParameters, n_samples: int, terminated: bool) -> WaveProfile:
    lo, hi = sorted((float(traj.t[0]), traj.t_final))
    zeta = np.linspace(lo, hi, n_samples)
    states = traj(zeta)
    return WaveProfile(zeta, states[:, 0], states[:, 1], params, terminated=terminated, trajectory=traj)


def trace_wave(
    params: WaveParameters,
    u_inf: float,
    zeta0: float,
    zeta_end: float,
    cfg: IntegratorConfig = IntegratorConfig(),
    m: int = 3,
    n_samples: int = 2001,
) -> WaveProfile:
    """Reconstruct a travelling wave by shooting from its tail.

    For alpha > 0 and lambda > 0 the state at ``zeta0`` is the order-m tail
    series and the ODE is integrated backward to ``zeta_end``; u_inf < 0
    gives the physical shock that rises to 2 lambda. For lambda = 0 the seed
    is the algebraic tail -2 alpha / zeta. For alpha = 0 there is no
    exponential tail transform: the state starts on the unstable eigenvector
    of the saddle at ``zeta_end`` (offset 1e-6 * 2 lambda) and is integrated
    forward until the pulse has come back to that offset (or to its closest
    approach to the saddle) or ``zeta0`` is reached.

    The run stops early (``terminated=True``) if |u| leaves the funnel
    10 * 2 lambda (10 * 2 alpha^2 / beta when lambda = 0).
    """
    if zeta_end >= zeta0:
        raise ParameterError("zeta_end must be smaller than zeta0")
    field_ = travelling_wave_field(params)
    bound = _funnel_bound(params)

    if params.alpha == 0:
        if params.lambda_speed == 0:
            raise ParameterError("alpha = lambda = 0 has no non-trivial travelling wave")
        offset = 1e-6 * 2.0 * params.lambda_speed
        mu = unstable_saddle_eigenvalue(params)
        peaked = {"seen": False}

        def stop_soliton(_t, y):
            if y[1] < 0:
                peaked["seen"] = True
            # after the peak, stop at the offset or at the closest approach to the
            # saddle (H drift keeps the orbit from coming back exactly)
            return abs(y[0]) > bound or (peaked["seen"] and (y[0] < offset or y[1] >= 0))

        traj = integrate(field_, [offset, mu * offset], (zeta_end, zeta0), cfg, stop=stop_soliton)
        return _sample(traj, params, n_samples, bool(traj.terminated and abs(traj.y[-1, 0]) > bound))

    if params.lambda_speed == 0:
        seed = seed_zero_speed(params, zeta0)
    else:
        seed = seed_from_tail(params, u_inf, zeta0, m)
    traj = integrate(field_, seed, (zeta0, zeta_end), cfg, stop=lambda _t, y: abs(y[0]) > bound)
    return _sample(traj, params, n_samples, traj.terminated)


def shock_profile(
    params: WaveParameters,
    u_inf: float,
    zeta_min: float,
    zeta_max: float,
    cfg: IntegratorConfig = IntegratorConfig(),
    m: int = 3,
    n_samples: int = 4001,
) -> WaveProfile:
    """Shock profile on [zeta_min, zeta_max]: traced left of the seed, series right of it."""
    zeta0 = auto_seed_zeta(params, u_inf)
    traced = trace_wave(params, u_inf, zeta0, min(zeta_min, zeta0 - 1.0), cfg, m=m, n_samples=16)
    if traced.terminated:
        raise IntegrationError("trace left the heteroclinic funnel", traced.zeta[0], [traced.u[0], traced.v[0]])
    traj = traced.trajectory
    zeta = np.linspace(zeta_min, zeta_max, n_samples)
    u = np.empty_like(zeta)
    v = np.empty_like(zeta)
    inner = zeta <= zeta0
    states = traj(zeta[inner])
    u[inner], v[inner] = states[:, 0], states[:, 1]
    tail = asymptotics.build_tail(params, u_inf, m)
    coef, rates = tail.zeta_coefficients, tail.zeta_rates
    outer = zeta[~inner]
    e = np.exp(-np.outer(outer, rates))
    u[~inner] = e @ coef
    v[~inner] = e @ (-rates * coef)
    return WaveProfile(zeta, u, v, params)


def measure_decay_rate(profile: WaveProfile, tail_window: tuple[float, float], mode: str | None = None) -> float:
    """Decay measurement on a window of the tail.

    ``mode='exponential'`` (default for lambda > 0) returns minus the
    least-squares slope of ln|u| against zeta. ``mode='algebraic'`` (default
    for lambda = 0) returns the least-squares constant fitted to u * zeta.
    """
    lo, hi = sorted(tail_window)
    mask = (profile.zeta >= lo) & (profile.zeta <= hi)
    z, u = profile.zeta[mask], profile.u[mask]
    if len(z) < 3:
        raise InsufficientExtentError(f"fewer than 3 samples in window [{lo}, {hi}]")
    if not (np.all(u > 0) or np.all(u < 0)):
        raise ValueError("u changes sign (or vanishes) inside the fit window")
    if mode is None:
        mode = "algebraic" if profile.params.lambda_speed == 0 else "exponential"
    if mode == "algebraic":
        return float(np.mean(u * z))
    if mode != "exponential":
        raise ValueError(f"unknown mode {mode!r}")
    slope = np.polyfit(z, np.log(np.abs(u)), 1)[0]
    return float(-slope)


@dataclass(frozen=True)
class LeftState:
    limit: float
    uncertainty: float
    mode: str
    n_extrema: int


def count_extrema(profile: WaveProfile, rtol: float = 1e-9) -> int:
    """Number of sign changes of du/dzeta, ignoring |v| below rtol * max|v|."""
    v = profile.v
    vmax = float(np.max(np.abs(v))) if len(v) else 0.0
    if vmax == 0:
        return 0
    signs = np.sign(v[np.abs(v) > rtol * vmax])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def detect_left_state(profile: WaveProfile, window_fraction: float = 0.2, max_variation: float = 0.05) -> LeftState:
    """Limit of u as zeta -> -inf and whether it is approached monotonically.

    Mode is ``monotone`` for at most one extremum of u, ``oscillatory``
    otherwise.

    Raises:
        InsufficientExtentError: if the leftmost ``window_fraction`` of the
            profile varies by more than ``max_variation`` (relative).
    """
    z, u = profile.zeta, profile.u
    cut = z[0] + window_fraction * (z[-1] - z[0])
    window = u[z <= cut]
    if len(window) < 2:
        raise InsufficientExtentError("left window holds fewer than two samples")
    spread = float(np.max(window) - np.min(window))
    level = float(np.max(np.abs(window)))
    if spread > 0 and spread > max_variation * level:
        raise InsufficientExtentError(
            f"left {window_fraction:.0%} of the profile varies by {spread:.3g} "
            f"(> {max_variation:.0%} of {level:.3g}); extend zeta_end"
        )
    n_ext = count_extrema(profile)
    mode = "monotone" if n_ext <= 1 else "oscillatory"
    return LeftState(limit=float(u[0]), uncertainty=0.5 * spread, mode=mode, n_extrema=n_ext)


def ode_residual_at_seed(params: WaveParameters, u_inf: float, zeta0: float, m: int) -> float:
    """|u'' + c1 u' + c2 u^2 + c3 u| of the tail series at ``zeta0``, divided by |u|."""
    co = reduce_coefficients(params)
    u, du = asymptotics.eval_tail(params, u_inf, m, zeta0)
    d2u = asymptotics.eval_tail_second_derivative(params, u_inf, m, zeta0)
    res = d2u + co.c1 * du + co.c2 * u * u + co.c3 * u
    return abs(res) / abs(u)


def saddle_rates(params: WaveParameters) -> tuple[float, float]:
    """(stable, unstable) eigenvalues at the origin."""
    return stable_saddle_eigenvalue(params), unstable_saddle_eigenvalue(params)
