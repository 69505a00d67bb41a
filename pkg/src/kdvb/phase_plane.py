"""Equilibria of the travelling-wave system and their local type.

The system u' = v, v' = -c2 u (u - 2 lambda) - c1 v has equilibria at the
origin and at (2 lambda, 0). The Jacobian there is [[0, 1], [J21, alpha/beta]]
with J21 = lambda/beta at the origin and -lambda/beta at (2 lambda, 0), so
the eigenvalues solve mu^2 - (alpha/beta) mu - J21 = 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .model import WaveParameters

SADDLE = "saddle"
NODE = "node"
FOCUS = "focus"
CENTER = "center"

A_NODAL = "A_nodal"
B_FOCAL = "B_focal"
C_CENTRAL = "C_central"
DEGENERATE = "degenerate"


@dataclass(frozen=True)
class SingularPoint:
    location: tuple[float, float]
    kind: str
    eigenvalues: tuple[complex, complex]
    defective: bool = False


@dataclass(frozen=True)
class RegimeClassification:
    """Regime of the travelling wave.

    ``case_label`` is one of A_nodal, B_focal, C_central, or ``degenerate``
    when lambda = 0 and the two equilibria coincide. ``defective`` marks the
    A/B boundary alpha^2 = 4 beta lambda, where (2 lambda, 0) has a double
    eigenvalue.
    """

    case_label: str
    discriminant: float
    defective: bool = False
    degenerate: bool = False


def singular_points(params: WaveParameters) -> tuple[tuple[float, float], tuple[float, float]]:
    return (0.0, 0.0), (2.0 * params.lambda_speed, 0.0)


def _off_diagonal(params: WaveParameters, point) -> float:
    u, v = point
    lam = params.lambda_speed
    if v != 0 or not (u == 0 or math.isclose(u, 2 * lam, rel_tol=1e-12, abs_tol=1e-300)):
        raise ValueError(f"{point} is not an equilibrium for lambda={lam}")
    # d/du of -c2 u (u - 2 lambda) = -(2u - 2 lambda)/(2 beta)
    return -(u - lam) / params.beta


def linearize(params: WaveParameters, point) -> tuple[complex, complex]:
    """Eigenvalues (mu_plus, mu_minus) of the linearisation at an equilibrium."""
    j21 = _off_diagonal(params, point)
    a = params.ratio
    disc = a * a + 4.0 * j21
    if disc >= 0:
        sq = math.sqrt(disc)
        return complex(0.5 * (a + sq)), complex(0.5 * (a - sq))
    sq = cmath.sqrt(disc)
    return 0.5 * (a + sq), 0.5 * (a - sq)


def kind_from_eigenvalues(mu: tuple[complex, complex], tol: float = 1e-12) -> str:
    m1, m2 = mu
    scale = max(abs(m1), abs(m2), 1e-300)
    if abs(m1.imag) <= tol * scale and abs(m2.imag) <= tol * scale:
        if m1.real * m2.real < 0:
            return SADDLE
        return NODE
    if abs(m1.real) <= tol * scale:
        return CENTER
    return FOCUS


def singular_point(params: WaveParameters, point) -> SingularPoint:
    mu = linearize(params, point)
    kind = kind_from_eigenvalues(mu)
    defective = kind == NODE and mu[0] == mu[1] and point != (0.0, 0.0)
    return SingularPoint(location=tuple(point), kind=kind, eigenvalues=mu, defective=defective)


def classify(params: WaveParameters) -> RegimeClassification:
    """Case A (node), B (focus) or C (centre) for the equilibrium (2 lambda, 0)."""
    alpha, beta, lam = params.alpha, params.beta, params.lambda_speed
    disc = alpha * alpha - 4.0 * beta * lam
    if lam == 0:
        return RegimeClassification(DEGENERATE, disc, degenerate=True)
    if alpha == 0:
        return RegimeClassification(C_CENTRAL, disc)
    if disc >= 0:
        return RegimeClassification(A_NODAL, disc, defective=disc == 0)
    return RegimeClassification(B_FOCAL, disc)


def label_from_eigenvalues(params: WaveParameters) -> str:
    """Regime label recomputed from the eigenvalue structure alone."""
    if params.lambda_speed == 0:
        return DEGENERATE
    kind = kind_from_eigenvalues(linearize(params, (2.0 * params.lambda_speed, 0.0)))
    return {NODE: A_NODAL, FOCUS: B_FOCAL, CENTER: C_CENTRAL}[kind]


def stable_saddle_eigenvalue(params: WaveParameters) -> float:
    """Negative eigenvalue at the origin, equal to -(k-1) alpha / (2 beta)."""
    # alpha(1 - k)/(2 beta) written without cancellation
    a = params.ratio
    root = math.sqrt(a * a + 4.0 * params.lambda_speed / params.beta)
    return -2.0 * params.lambda_speed / params.beta / (a + root) if root > 0 else 0.0


def unstable_saddle_eigenvalue(params: WaveParameters) -> float:
    a = params.ratio
    return 0.5 * (a + math.sqrt(a * a + 4.0 * params.lambda_speed / params.beta))
