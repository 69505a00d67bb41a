"""Tail expansions of the travelling wave as zeta -> +infinity.

For lambda > 0 the reduced variable has the convergent expansion

    y(xi) = sum_i c_i xi^(i eps),   eps = sigma + 2 in (-1/2, 0),

whose coefficients follow from substituting into y'' = xi^sigma y^2:

    c_{i+1} (i+1) eps ((i+1) eps - 1) = sum_{a+b=i} c_a c_b,   c_0 = u_inf.

Because xi^eps = exp(-r zeta) with r = (k-1) alpha / (2 beta), the same
series in the travelling coordinate reads

    u(zeta) = -A sum_i c_i exp(-(i+1) r zeta),   A = 2 k^2 alpha^2 / beta.

The closed-form product coefficients obtained by Picard iteration agree
with the recurrence for i <= 2 only; both are available, the recurrence
being the one that actually solves the equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AsymptoticRegimeError, ParameterError
from .model import (
    WaveParameters,
    amplitude_factor,
    emden_fowler_form,
    tail_decay_rate,
)

# an eval point is accepted while |first correction| < DOMINANCE * |leading term|
DOMINANCE = 0.5
ZERO_RTOL = 1e-12
BISECT_TOL = 1e-10


@dataclass(frozen=True)
class TailExpansion:
    """Truncated tail series for given parameters.

    Attributes:
        u_inf: amplitude; u_inf > 0 gives u < 0 (the branch with the proven
            asymptotics), u_inf < 0 gives the positive shock tail.
        order_m: truncation order.
        coefficients: c_0..c_m of the xi-series.
        epsilon: sigma + 2.
        decay_rate: r = (k-1) alpha / (2 beta).
        amplitude: A = 2 k^2 alpha^2 / beta.
    """

    u_inf: float
    order_m: int
    coefficients: np.ndarray = field(repr=False)
    epsilon: float
    decay_rate: float
    amplitude: float

    @property
    def zeta_coefficients(self) -> np.ndarray:
        """Coefficients of exp(-(i+1) r zeta) in u."""
        return -self.amplitude * self.coefficients

    @property
    def zeta_rates(self) -> np.ndarray:
        return self.decay_rate * np.arange(1, self.order_m + 2)


def _check_epsilon(sigma: float, epsilon: float | None) -> float:
    eps = sigma + 2.0 if epsilon is None else epsilon
    if eps == 0:
        raise ParameterError(
            "sigma = -2 (lambda = 0): the power series degenerates; use eval_tail_zero_speed"
        )
    if not (-0.5 < eps < 0):
        raise ParameterError(f"sigma={sigma} outside (-5/2, -2)")
    return eps


def exact_tail_coefficients(u_inf: float, sigma: float, m: int, epsilon: float | None = None) -> np.ndarray:
    """Coefficients c_0..c_m of the xi-series from the convolution recurrence.

    ``epsilon`` may be given to avoid the cancellation in sigma + 2 when
    sigma is very close to -2.
    """
    if m < 0:
        raise ParameterError(f"order m must be >= 0, got {m}")
    eps = _check_epsilon(sigma, epsilon)
    c = np.zeros(m + 1)
    c[0] = u_inf
    for i in range(m):
        n = i + 1
        source = float(np.dot(c[: i + 1], c[i::-1]))
        c[n] = source / (n * eps * (n * eps - 1.0))
    return c


def closed_form_coefficient(sigma: float, u_inf: float, i: int, epsilon: float | None = None) -> float:
    """Product-form coefficient 2^(i-1) u_inf^(i+1) / prod_j [j eps - 1] j eps.

    Coincides with the recurrence for i <= 2 and drops cross products
    (c_1^2, ...) from i = 3 onward.
    """
    eps = _check_epsilon(sigma, epsilon)
    if i == 0:
        return u_inf
    prod = 1.0
    for j in range(1, i + 1):
        prod *= (j * eps - 1.0) * j * eps
    return 2.0 ** (i - 1) * u_inf ** (i + 1) / prod


def build_tail(params: WaveParameters, u_inf: float, m: int) -> TailExpansion:
    if params.lambda_speed <= 0:
        raise ParameterError("the exponential tail series needs lambda > 0")
    form = emden_fowler_form(params)
    coeffs = exact_tail_coefficients(u_inf, form.sigma, m, epsilon=form.epsilon)
    return TailExpansion(
        u_inf=u_inf,
        order_m=m,
        coefficients=coeffs,
        epsilon=form.epsilon,
        decay_rate=tail_decay_rate(params),
        amplitude=amplitude_factor(params),
    )


def closed_form_series_term(params: WaveParameters, u_inf: float, i: int, printed: bool = False) -> tuple[float, float]:
    """i-th correction of the closed-form tail series in the zeta variable.

    Returns ``(coefficient, rate)`` of the term coefficient * exp(-rate zeta),
    rate = (i+1)(k-1) alpha / (2 beta).

    With ``printed=False`` (default) the coefficient is -A times
    :func:`closed_form_coefficient`, the normalisation that reproduces the
    two-term expansion at i = 1. ``printed=True`` evaluates
    -(2 k^4 alpha^2 / beta) (2 u_inf)^(i+1) / prod_j [j(k-1) + 2k] j(k-1)
    literally; it equals the default at i = 1 and is smaller by the factor
    (4 k^2)^(i-1) beyond.
    """
    if i < 1:
        raise ParameterError(f"term index must be >= 1, got {i}")
    if params.lambda_speed <= 0:
        raise ParameterError("k = 1 (lambda = 0): the closed-form series is undefined")
    form = emden_fowler_form(params)
    k, km1 = form.k, form.k_minus_one
    rate = (i + 1) * tail_decay_rate(params)
    if printed:
        prod = 1.0
        for j in range(1, i + 1):
            prod *= (j * km1 + 2.0 * k) * j * km1
        coef = -(2.0 * k**4 * params.alpha**2 / params.beta) * (2.0 * u_inf) ** (i + 1) / prod
        return coef, rate
    c = closed_form_coefficient(form.sigma, u_inf, i, epsilon=form.epsilon)
    return -amplitude_factor(params) * c, rate


def series_discrepancy(params: WaveParameters, u_inf: float, m: int) -> list[dict]:
    """Compare recurrence and closed-form coefficients order by order (xi units)."""
    form = emden_fowler_form(params)
    exact = exact_tail_coefficients(u_inf, form.sigma, m, epsilon=form.epsilon)
    rows = []
    for i in range(m + 1):
        closed = closed_form_coefficient(form.sigma, u_inf, i, epsilon=form.epsilon)
        rows.append(
            {
                "i": i,
                "recurrence": float(exact[i]),
                "closed_form": closed,
                "ratio": closed / exact[i] if exact[i] != 0 else math.nan,
            }
        )
    return rows


def min_admissible_zeta(params: WaveParameters, u_inf: float, dominance: float = DOMINANCE) -> float:
    """Smallest zeta with |c_1 e^{-r zeta}| <= dominance * |c_0|."""
    if u_inf == 0:
        return -math.inf
    form = emden_fowler_form(params)
    ratio = abs(u_inf / (form.epsilon * (form.epsilon - 1.0)))
    return math.log(ratio / dominance) / tail_decay_rate(params)


def _tail_sums(tail: TailExpansion, zeta: float):
    coef = tail.zeta_coefficients
    rates = tail.zeta_rates
    e = np.exp(-rates * zeta)
    u = float(np.sum(coef * e))
    du = float(np.sum(-rates * coef * e))
    d2u = float(np.sum(rates * rates * coef * e))
    return u, du, d2u


def _guard(params: WaveParameters, u_inf: float, zeta: float):
    zmin = min_admissible_zeta(params, u_inf)
    if zeta < zmin:
        raise AsymptoticRegimeError(f"zeta={zeta:.6g} is outside the asymptotic regime", zmin)


def eval_tail(params: WaveParameters, u_inf: float, m: int, zeta: float) -> tuple[float, float]:
    """Value and zeta-derivative of the order-m tail series.

    Raises:
        AsymptoticRegimeError: when the first correction exceeds half the
            leading term at ``zeta``.
    """
    _guard(params, u_inf, zeta)
    u, du, _ = _tail_sums(build_tail(params, u_inf, m), zeta)
    return u, du


def eval_tail_second_derivative(params: WaveParameters, u_inf: float, m: int, zeta: float) -> float:
    _guard(params, u_inf, zeta)
    return _tail_sums(build_tail(params, u_inf, m), zeta)[2]


def eval_tail_zero_speed(params: WaveParameters, zeta: float) -> float:
    """Algebraic tail u ~ -2 alpha / zeta for lambda = 0."""
    if params.lambda_speed != 0:
        raise ParameterError("eval_tail_zero_speed requires lambda = 0")
    if params.alpha <= 0:
        raise ParameterError("eval_tail_zero_speed requires alpha > 0")
    if zeta <= 0:
        raise ValueError(f"zeta must be positive, got {zeta}")
    k = 1.0
    return -2.0 * k * params.alpha / zeta * math.exp(-(k - 1.0) * params.alpha * zeta / (2.0 * params.beta))


def residual_coefficients(coefficients, epsilon: float) -> np.ndarray:
    """Coefficients R_n of the residual y'' - xi^sigma y^2 = sum_n R_n xi^(n eps - 2).

    For a series truncated at order m, R_1..R_m vanish and the leading
    surviving power is n = m + 1, i.e. xi^(sigma + m eps).
    """
    c = np.asarray(coefficients, dtype=float)
    m = len(c) - 1
    square = np.convolve(c, c)  # orders 0..2m of y^2
    out = np.zeros(2 * m + 2)
    for n in range(1, 2 * m + 2):
        lin = c[n] * n * epsilon * (n * epsilon - 1.0) if n <= m else 0.0
        out[n] = lin - square[n - 1]
    return out


def emden_fowler_residual(sigma: float, coefficients, xi, epsilon: float | None = None):
    """y'' - xi^sigma y^2 for the truncated series y = sum c_i xi^(i eps)."""
    eps = sigma + 2.0 if epsilon is None else epsilon
    xi = np.asarray(xi, dtype=float)
    c = np.asarray(coefficients, dtype=float)
    powers = np.arange(len(c)) * eps
    y = sum(ci * xi**p for ci, p in zip(c, powers))
    d2y = sum(ci * p * (p - 1.0) * xi ** (p - 2.0) for ci, p in zip(c, powers))
    res = d2y - xi**sigma * y * y
    return float(res) if res.ndim == 0 else res


@dataclass(frozen=True)
class ZeroCount:
    count: int
    locations: tuple[float, ...]
    zero_intervals: tuple[tuple[float, float], ...] = ()


def _hermite(z0, z1, u0, u1, v0, v1, z):
    h = z1 - z0
    t = (z - z0) / h
    t2, t3 = t * t, t * t * t
    return (
        (2 * t3 - 3 * t2 + 1) * u0
        + (t3 - 2 * t2 + t) * h * v0
        + (-2 * t3 + 3 * t2) * u1
        + (t3 - t2) * h * v1
    )


def _bisect(f, a, b, fa, tol=BISECT_TOL):
    while abs(b - a) > tol:
        mid = 0.5 * (a + b)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)


def count_isolated_zeros(profile) -> ZeroCount:
    """Isolated zeros of u on a sampled profile.

    Sign changes between samples are refined by bisection on the cubic
    Hermite interpolant built from (u, v = du/dzeta). Runs of two or more
    numerically-zero samples are returned as intervals and not counted.
    """
    z = np.asarray(profile.zeta, dtype=float)
    u = np.asarray(profile.u, dtype=float)
    v = getattr(profile, "v", None)
    v = None if v is None else np.asarray(v, dtype=float)
    dz = np.diff(z)
    if len(z) < 2 or not (np.all(dz > 0) or np.all(dz < 0)):
        raise ValueError("profile zeta grid must be strictly monotone")
    if z[0] > z[-1]:
        z, u = z[::-1], u[::-1]
        v = None if v is None else v[::-1]
    scale = float(np.max(np.abs(u)))
    if scale == 0:
        return ZeroCount(0, (), ((float(z[0]), float(z[-1])),))
    is_zero = np.abs(u) < ZERO_RTOL * scale

    locations: list[float] = []
    intervals: list[tuple[float, float]] = []
    i, n = 0, len(z)
    while i < n:
        if is_zero[i]:
            j = i
            while j + 1 < n and is_zero[j + 1]:
                j += 1
            if j > i:
                intervals.append((float(z[i]), float(z[j])))
            else:
                locations.append(float(z[i]))
            i = j + 1
            continue
        if i + 1 < n and not is_zero[i + 1] and (u[i] > 0) != (u[i + 1] > 0):
            if v is None:
                root = z[i] - u[i] * (z[i + 1] - z[i]) / (u[i + 1] - u[i])
            else:
                args = (z[i], z[i + 1], u[i], u[i + 1], v[i], v[i + 1])
                root = _bisect(lambda s: _hermite(*args, s), z[i], z[i + 1], u[i])
            locations.append(float(root))
        i += 1
    return ZeroCount(len(locations), tuple(locations), tuple(intervals))
