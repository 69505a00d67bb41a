"""Exception hierarchy shared by all kdvb modules."""

from __future__ import annotations


class KdVBError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(KdVBError, ValueError):
    """Invalid physical parameters or integration constants."""


class ComplexEquilibriaError(ParameterError):
    """The equilibrium quadratic has a negative discriminant."""


class TransformUndefinedError(KdVBError):
    """The exponential change of variables needs alpha > 0."""


class AsymptoticRegimeError(KdVBError):
    """Evaluation point lies outside the region where the tail series is usable.

    Attributes:
        min_zeta: smallest admissible travelling coordinate.
    """

    def __init__(self, message: str, min_zeta: float):
        super().__init__(f"{message} (minimal admissible zeta = {min_zeta:.6g})")
        self.min_zeta = min_zeta


class IntegrationError(KdVBError):
    """Step-size underflow or step budget exhaustion.

    Attributes:
        t: independent variable of the last accepted step.
        y: state at the last accepted step.
    """

    def __init__(self, message: str, t: float, y):
        super().__init__(f"{message}; last good state t={t:.12g}, y={list(map(float, y))}")
        self.t = t
        self.y = y


class InsufficientExtentError(KdVBError):
    """Profile does not extend far enough to estimate a limiting state."""


class SimulationAborted(KdVBError):
    """The PDE run produced NaN/Inf or grew beyond the instability threshold."""

    def __init__(self, message: str, time: float):
        super().__init__(f"{message} at t={time:.6g}")
        self.time = time
