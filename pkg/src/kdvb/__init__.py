"""Travelling waves of the KdV-Burgers equation u_t + u u_x = alpha u_xx - beta u_xxx.

Modules: ``model`` (reduced ODE and frame maps), ``phase_plane``
(singular points and regime labels), ``asymptotics`` (tail series),
``odeint`` (adaptive integrator and wave tracing), ``pde_sim``
(method-of-lines solver) and ``cli``.
"""

from .model import WaveParameters, reduce_coefficients, emden_fowler_form
from .phase_plane import classify
from .asymptotics import build_tail, eval_tail
from .odeint import IntegratorConfig, trace_wave

__all__ = [
    "WaveParameters",
    "reduce_coefficients",
    "emden_fowler_form",
    "classify",
    "build_tail",
    "eval_tail",
    "IntegratorConfig",
    "trace_wave",
]
