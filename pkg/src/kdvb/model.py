"""Physical parameters and the exact changes of variables.

The KdVB equation

    u_t + u u_x - alpha u_xx + beta u_xxx = 0

is reduced, in the frame zeta = x - lambda t, to the second-order ODE

    u'' + c1 u' + c2 u^2 + c3 u = c0,
    c1 = -alpha/beta,  c2 = 1/(2 beta),  c3 = -lambda/beta,

and for c0 = 0 and alpha > 0 the substitution

    u = -(2 k^2 alpha^2 / beta) exp(-(k-1) alpha zeta / (2 beta)) y(xi),
    xi = exp(k alpha zeta / beta),   k = sqrt(1 + 4 beta lambda / alpha^2),

turns it into the Emden-Fowler equation y'' = xi^sigma y^2 with
sigma = (1 - 5k) / (2k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ComplexEquilibriaError, ParameterError, TransformUndefinedError


@dataclass(frozen=True)
class WaveParameters:
    """Coefficients of the KdVB equation and the travelling-wave speed.

    Attributes:
        alpha: dissipation coefficient, alpha >= 0.
        beta: dispersion coefficient, beta > 0.
        lambda_speed: wave speed, lambda_speed >= 0. Negative speeds are
            handled by the caller through lambda -> -lambda.
    """

    alpha: float
    beta: float
    lambda_speed: float

    def __post_init__(self):
        for name in ("alpha", "beta", "lambda_speed"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value!r}")
        if self.beta <= 0:
            raise ParameterError(f"beta must be > 0, got {self.beta}")
        if self.alpha < 0:
            raise ParameterError(f"alpha must be >= 0, got {self.alpha}")
        if self.lambda_speed < 0:
            raise ParameterError(
                f"lambda_speed must be >= 0, got {self.lambda_speed} "
                "(normalise with lambda -> -lambda first)"
            )

    @property
    def ratio(self) -> float:
        """alpha / beta, the inverse dissipation length."""
        return self.alpha / self.beta


@dataclass(frozen=True)
class ReducedCoefficients:
    """Coefficients of u'' + c1 u' + c2 u^2 + c3 u = c0."""

    c1: float
    c2: float
    c3: float
    c0: float = 0.0

    def __post_init__(self):
        if self.discriminant < 0:
            raise ComplexEquilibriaError(
                f"c3^2 + 4 c0 c2 = {self.discriminant:.6g} < 0: equilibria are complex"
            )

    @property
    def discriminant(self) -> float:
        return self.c3 * self.c3 + 4.0 * self.c0 * self.c2


@dataclass(frozen=True)
class EmdenFowlerForm:
    """Constants of the reduced equation y'' = xi^sigma y^2.

    ``epsilon`` = sigma + 2 = (1 - k)/(2k) is stored separately because it is
    tiny for small lambda and cannot be recovered accurately from sigma.
    """

    k: float
    sigma: float
    epsilon: float = float("nan")

    def __post_init__(self):
        if math.isnan(self.epsilon):
            object.__setattr__(self, "epsilon", self.sigma + 2.0)

    @property
    def k_minus_one(self) -> float:
        return -2.0 * self.k * self.epsilon


@dataclass(frozen=True)
class DiagnosticFrame:
    """Logarithmic variables used to study the lambda = 0 tail.

    s = ln xi, p = dy/ds, v_recip = 1/y, w = d(1/y)/ds = -p / y^2.
    """

    s: float
    y: float
    p: float
    v_recip: float
    w: float


def reduce_coefficients(params: WaveParameters, c0: float = 0.0) -> ReducedCoefficients:
    """Coefficients of the travelling-wave ODE obtained by integrating once in zeta.

    Raises:
        ParameterError: if c0 <= -lambda^2 / (2 beta). For lambda = 0 the
            value c0 = 0 is accepted since it is the case used throughout.
    """
    threshold = -params.lambda_speed**2 / (2.0 * params.beta)
    if c0 < threshold or (c0 == threshold and params.lambda_speed > 0):
        raise ParameterError(
            f"integration constant c0={c0} must exceed -lambda^2/(2 beta) = {threshold:.6g}"
        )
    return ReducedCoefficients(
        c1=-params.alpha / params.beta,
        c2=1.0 / (2.0 * params.beta),
        c3=-params.lambda_speed / params.beta,
        c0=c0,
    )


def shift_equilibrium(coeffs: ReducedCoefficients) -> tuple[tuple[float, float], tuple[float, float]]:
    """Equilibria of the reduced ODE and the linear coefficient after shifting to each.

    With u = u_shift + c_hat the equation becomes
    u_shift'' + c1 u_shift' + c2 u_shift^2 + (c3 + 2 c2 c_hat) u_shift = 0.

    Returns:
        ``((root_minus, root_plus), (c3_minus, c3_plus))``.
    """
    disc = coeffs.discriminant
    if disc < 0:
        raise ComplexEquilibriaError(f"negative discriminant {disc:.6g}")
    sq = math.sqrt(disc)
    roots = ((-coeffs.c3 - sq) / (2.0 * coeffs.c2), (-coeffs.c3 + sq) / (2.0 * coeffs.c2))
    shifted = tuple(coeffs.c3 + 2.0 * coeffs.c2 * r for r in roots)
    return roots, shifted


def emden_fowler_form(params: WaveParameters) -> EmdenFowlerForm:
    if params.alpha <= 0:
        raise TransformUndefinedError(
            "the exponential change of variables requires alpha > 0; "
            "use the conservative (alpha = 0) shooting path instead"
        )
    if params.lambda_speed == 0:
        return EmdenFowlerForm(k=1.0, sigma=-2.0, epsilon=0.0)
    x = 4.0 * params.beta * params.lambda_speed / params.alpha**2
    k = math.sqrt(1.0 + x)
    # (1 - k)/(2k) without cancellation
    eps = -x / ((1.0 + k) * 2.0 * k)
    return EmdenFowlerForm(k=k, sigma=eps - 2.0, epsilon=eps)


def tail_decay_rate(params: WaveParameters) -> float:
    """Leading exponential decay rate (k - 1) alpha / (2 beta) of the tail."""
    k = emden_fowler_form(params).k
    return 2.0 * params.lambda_speed / (params.alpha * (1.0 + k))


def amplitude_factor(params: WaveParameters) -> float:
    """2 k^2 alpha^2 / beta, the magnitude of u per unit y at zeta = 0."""
    k = emden_fowler_form(params).k
    return 2.0 * k * k * params.alpha**2 / params.beta


def map_frame(params: WaveParameters, zeta: float, y: float) -> tuple[float, float]:
    """Map (zeta, y) to (xi, u)."""
    k = emden_fowler_form(params).k
    xi = math.exp(params.ratio * k * zeta)
    u = -amplitude_factor(params) * math.exp(-tail_decay_rate(params) * zeta) * y
    return xi, u


def unmap_frame(params: WaveParameters, xi: float, u: float) -> tuple[float, float]:
    """Inverse of :func:`map_frame`: (xi, u) -> (zeta, y)."""
    if xi <= 0:
        raise ValueError(f"xi must be positive, got {xi}")
    k = emden_fowler_form(params).k
    zeta = math.log(xi) / (params.ratio * k)
    y = -u * math.exp(tail_decay_rate(params) * zeta) / amplitude_factor(params)
    return zeta, y


def frame_jacobian(params: WaveParameters, zeta: float) -> float:
    """Factor J with  R4(zeta) = J * R7(xi)  for functions related by :func:`map_frame`.

    R4 is the residual of the c0 = 0 travelling ODE and R7 = y'' - xi^sigma y^2.
    J = -(2 k^2 alpha^2 / beta) e^{-r zeta} (k alpha / beta)^2 xi^2.
    """
    k = emden_fowler_form(params).k
    ka = k * params.ratio
    xi2 = math.exp(2.0 * ka * zeta)
    return -amplitude_factor(params) * math.exp(-tail_decay_rate(params) * zeta) * ka * ka * xi2


def ode_residual(coeffs: ReducedCoefficients, u, du, d2u):
    """Residual u'' + c1 u' + c2 u^2 + c3 u - c0 (works on arrays)."""
    return d2u + coeffs.c1 * du + coeffs.c2 * u * u + coeffs.c3 * u - coeffs.c0


def emden_fowler_pointwise_residual(sigma: float, xi, y, d2y):
    """Residual y'' - xi^sigma y^2 (works on arrays)."""
    return d2y - np.power(xi, sigma) * y * y


def travelling_wave_field(params: WaveParameters, c0: float = 0.0) -> Callable:
    """First-order system (u, v)' = (v, c0 - c2 u^2 - c3 u - c1 v)."""
    co = reduce_coefficients(params, c0)
    c1, c2, c3, cc = co.c1, co.c2, co.c3, co.c0

    def field(_zeta, state):
        u, v = state
        return np.array([v, cc - c2 * u * u - c3 * u - c1 * v])

    return field


def emden_fowler_field(sigma: float) -> Callable:
    """First-order form of y'' = xi^sigma y^2 in the variable xi."""

    def field(xi, state):
        y, dy = state
        return np.array([dy, xi**sigma * y * y])

    return field


def hamiltonian(params: WaveParameters, u, v):
    """H = v^2/2 + c2 (u^3/3 - lambda u^2); conserved along the flow when alpha = 0."""
    c2 = 1.0 / (2.0 * params.beta)
    return 0.5 * v * v + c2 * (u**3 / 3.0 - params.lambda_speed * u * u)


def diagnostic_frame(xi_samples: Iterable[Sequence[float]]) -> list[DiagnosticFrame]:
    """Convert (xi, y, dy/dxi) samples into logarithmic diagnostic variables.

    Raises:
        ValueError: for xi <= 0.
        ZeroDivisionError: listing every sample index where y == 0.
    """
    out: list[DiagnosticFrame] = []
    bad: list[int] = []
    for idx, (xi, y, dy) in enumerate(xi_samples):
        if xi <= 0:
            raise ValueError(f"sample {idx}: xi must be positive, got {xi}")
        if y == 0:
            bad.append(idx)
            continue
        p = xi * dy
        out.append(DiagnosticFrame(s=math.log(xi), y=y, p=p, v_recip=1.0 / y, w=-p / (y * y)))
    if bad:
        raise ZeroDivisionError(f"y = 0 at sample indices {bad}")
    return out
