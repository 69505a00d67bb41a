"""Method-of-lines solver for u_t + u u_x - alpha u_xx + beta u_xxx = 0.

Space: second-order central differences. The nonlinear term uses the
conservative flux F_{i+1/2} = (u_i^2 + u_i u_{i+1} + u_{i+1}^2) / 6, which
telescopes (mass is conserved) and is skew-symmetric (it does not change
sum u^2). D2 and D3 are the standard 3- and 5-point central stencils.

Time: classical RK4. The default step is a fixed fraction of the largest
step for which every grid mode of the linearised operator lies inside the
RK4 stability region (see :func:`rk4_stable_dt`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import KdVBError, SimulationAborted
from .model import WaveParameters

SPONGE_CELLS = 10
SPONGE_RATE = 1.0
DT_SAFETY = 0.8


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid x_i = x0 + i dx, i = 0..n-1.

    Non-periodic grids are padded with the constant boundary values
    ``u_left`` / ``u_right``.
    """

    x0: float
    dx: float
    n: int
    periodic: bool = True
    u_left: float = 0.0
    u_right: float = 0.0

    def __post_init__(self):
        if self.n < 8:
            raise ValueError(f"grid needs n >= 8 points, got {self.n}")
        if not self.dx > 0:
            raise ValueError(f"dx must be positive, got {self.dx}")

    @classmethod
    def span(cls, x_min: float, x_max: float, n: int, **kwargs) -> "Grid1D":
        return cls(x_min, (x_max - x_min) / n, n, **kwargs)

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    @property
    def length(self) -> float:
        return self.n * self.dx


@dataclass
class FieldState:
    grid: Grid1D
    u: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        if self.u.shape != (self.grid.n,):
            raise ValueError(f"u has shape {self.u.shape}, grid has {self.grid.n} points")
        if self.time < 0:
            raise ValueError("time must be >= 0")

    def mass(self) -> float:
        return float(np.sum(self.u) * self.grid.dx)

    def energy(self) -> float:
        return float(np.sum(self.u * self.u) * self.grid.dx)


def _sponge(grid: Grid1D):
    if grid.periodic:
        return None
    w = np.zeros(grid.n)
    target = np.zeros(grid.n)
    ramp = ((SPONGE_CELLS - np.arange(SPONGE_CELLS)) / SPONGE_CELLS) ** 2 * SPONGE_RATE
    w[:SPONGE_CELLS] = ramp
    w[-SPONGE_CELLS:] = ramp[::-1]
    target[: grid.n // 2] = grid.u_left
    target[grid.n // 2 :] = grid.u_right
    return w, target


class _Operator:
    """Right-hand side with preallocated padding for repeated evaluation."""

    def __init__(self, grid: Grid1D, params: WaveParameters):
        self.grid = grid
        self.alpha = params.alpha
        self.beta = params.beta
        self.buf = np.empty(grid.n + 4)
        if not grid.periodic:
            self.buf[:2] = grid.u_left
            self.buf[-2:] = grid.u_right
        self.sponge = _sponge(grid)

    def __call__(self, u: np.ndarray) -> np.ndarray:
        g = self.grid
        b = self.buf
        b[2:-2] = u
        if g.periodic:
            b[:2] = u[-2:]
            b[-2:] = u[:2]
        dx = g.dx
        left, right = b[1:-2], b[2:-1]
        flux = (left * left + left * right + right * right) / 6.0
        out = -(flux[1:] - flux[:-1]) / dx
        if self.alpha:
            out += self.alpha / (dx * dx) * (b[3:-1] - 2.0 * u + b[1:-3])
        if self.beta:
            out -= self.beta / (2.0 * dx**3) * (b[4:] - 2.0 * b[3:-1] + 2.0 * b[1:-3] - b[:-4])
        if self.sponge is not None:
            w, target = self.sponge
            out -= w * (u - target)
        return out


def semidiscretize(state: FieldState, params: WaveParameters) -> np.ndarray:
    """du/dt = -d/dx(u^2/2) + alpha D2 u - beta D3 u on the grid."""
    if not np.all(np.isfinite(state.u)):
        raise ValueError("field contains NaN or Inf")
    return _Operator(state.grid, params)(state.u)


def discrete_symbols(theta, dx: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Fourier symbols of the central D1, D2 and D3 stencils at theta = kappa dx.

    D1 -> i sin(theta)/dx, D2 -> -4 sin^2(theta/2)/dx^2,
    D3 -> i (sin 2theta - 2 sin theta)/dx^3.
    """
    theta = np.asarray(theta, dtype=float)
    d1 = 1j * np.sin(theta) / dx
    d2 = -4.0 * np.sin(theta / 2.0) ** 2 / dx**2
    d3 = 1j * (np.sin(2.0 * theta) - 2.0 * np.sin(theta)) / dx**3
    return d1, d2, d3


def rk4_amplification(z):
    return 1.0 + z + z * z / 2.0 + z**3 / 6.0 + z**4 / 24.0


def rk4_stable_dt(grid: Grid1D, params: WaveParameters, u_max: float = 0.0) -> float:
    """Largest dt keeping every linearised grid mode inside the RK4 region.

    Modes: z = -U D1 + alpha D2 - beta D3 (- sponge rate), U = u_max.
    """
    theta = 2.0 * np.pi * np.arange(grid.n) / grid.n
    d1, d2, d3 = discrete_symbols(theta, grid.dx)
    z = -u_max * d1 + params.alpha * d2 - params.beta * d3
    if not grid.periodic:
        z = np.concatenate([z, z - SPONGE_RATE])
    zmax = float(np.max(np.abs(z)))
    if zmax == 0:
        return math.inf

    def stable(dt):
        return bool(np.all(np.abs(rk4_amplification(dt * z)) <= 1.0 + 1e-12))

    lo, hi = 0.0, 3.0 / zmax
    while stable(hi):
        hi *= 2.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if stable(mid):
            lo = mid
        else:
            hi = mid
    return lo


def legacy_dt(grid: Grid1D, params: WaveParameters) -> float:
    """0.4 min(dx^2/(2 alpha + 1e-12), dx^3/(2.8 beta)); conservative fallback."""
    dx = grid.dx
    return 0.4 * min(dx * dx / (2.0 * params.alpha + 1e-12), dx**3 / (2.8 * params.beta))


def default_dt(grid: Grid1D, params: WaveParameters, u_max: float) -> float:
    return DT_SAFETY * rk4_stable_dt(grid, params, u_max)


def run(
    state: FieldState,
    params: WaveParameters,
    t_end: float,
    dt: float | None = None,
    snapshot_every: float | None = None,
    growth_limit: float = 10.0,
) -> list[FieldState]:
    """Advance ``state`` to ``t_end`` with RK4.

    Returns snapshots including the initial and final state; intermediate
    snapshots every ``snapshot_every`` time units (rounded to whole steps).

    Raises:
        SimulationAborted: NaN/Inf, or max|u| above ``growth_limit`` times
            its initial value.
    """
    if t_end <= 0:
        raise ValueError("t_end must be positive")
    u = state.u.copy()
    if not np.all(np.isfinite(u)):
        raise ValueError("initial field contains NaN or Inf")
    u0max = float(np.max(np.abs(u)))
    if dt is None:
        dt = default_dt(state.grid, params, u0max)
    n_steps = max(1, math.ceil(t_end / dt - 1e-9))
    dt = t_end / n_steps
    every = n_steps if snapshot_every is None else max(1, round(snapshot_every / dt))
    op = _Operator(state.grid, params)
    t0 = state.time
    snaps = [replace(state, u=u.copy())]
    limit = growth_limit * u0max if u0max > 0 else math.inf
    for step in range(1, n_steps + 1):
        k1 = op(u)
        k2 = op(u + 0.5 * dt * k1)
        k3 = op(u + 0.5 * dt * k2)
        k4 = op(u + dt * k3)
        u = u + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        t = t0 + step * dt
        if not np.all(np.isfinite(u)):
            raise SimulationAborted("non-finite values in the field", t)
        if np.max(np.abs(u)) > limit:
            raise SimulationAborted(f"max|u| exceeded {growth_limit}x its initial value", t)
        if step % every == 0 or step == n_steps:
            snaps.append(FieldState(state.grid, u.copy(), t))
    return snaps


def level_crossing(x: np.ndarray, u: np.ndarray, level: float) -> float:
    """Position of the unique crossing u = level, by linear interpolation."""
    d = u - level
    idx = np.nonzero((d[:-1] > 0) != (d[1:] > 0))[0]
    if len(idx) == 0:
        raise KdVBError(f"level {level} is not crossed inside the domain")
    if len(idx) > 1:
        raise KdVBError(f"level {level} is crossed {len(idx)} times; speed tracking needs a unique crossing")
    i = idx[0]
    return float(x[i] - d[i] * (x[i + 1] - x[i]) / (d[i + 1] - d[i]))


def measure_speed(snapshots: list[FieldState], level: float | None = None) -> float:
    """Slope of a least-squares line through the tracked level-crossing position."""
    if len(snapshots) < 3:
        raise ValueError("need at least 3 snapshots")
    if level is None:
        first = snapshots[0].u
        level = 0.5 * (float(np.max(first)) + float(np.min(first)))
    x = snapshots[0].grid.x
    t = np.array([s.time for s in snapshots])
    pos = np.array([level_crossing(x, s.u, level) for s in snapshots])
    return float(np.polyfit(t, pos, 1)[0])


def shifted(state: FieldState, s: float) -> np.ndarray:
    """u(x - s) by linear interpolation (periodic wrap or constant extension)."""
    g = state.grid
    x = g.x
    if g.periodic:
        return np.interp(x - s, x, state.u, period=g.length)
    return np.interp(x - s, x, state.u, left=g.u_left, right=g.u_right)


def shape_drift(initial: FieldState, later: FieldState, guess: float = 0.0, search: float | None = None) -> tuple[float, float]:
    """min over s of ||later - initial(x - s)||_2 / ||initial||_2.

    Returns ``(drift, best_shift)``.
    """
    norm = float(np.linalg.norm(initial.u))
    if search is None:
        search = 20.0 * initial.grid.dx

    def err(s):
        return float(np.linalg.norm(later.u - shifted(initial, s))) / norm

    grid_s = np.linspace(guess - search, guess + search, 81)
    errs = [err(s) for s in grid_s]
    j = int(np.argmin(errs))
    a = grid_s[max(j - 1, 0)]
    b = grid_s[min(j + 1, len(grid_s) - 1)]
    res = minimize_scalar(err, bounds=(a, b), method="bounded", options={"xatol": 1e-8})
    return float(res.fun), float(res.x)


def _hermite_sample(z, u, v, zq):
    idx = np.clip(np.searchsorted(z, zq, side="right") - 1, 0, len(z) - 2)
    z0, z1 = z[idx], z[idx + 1]
    h = z1 - z0
    s = (zq - z0) / h
    s2, s3 = s * s, s * s * s
    return (
        (2 * s3 - 3 * s2 + 1) * u[idx]
        + (s3 - 2 * s2 + s) * h * v[idx]
        + (-2 * s3 + 3 * s2) * u[idx + 1]
        + (s3 - s2) * h * v[idx + 1]
    )


def field_from_profile(profile, grid: Grid1D, center: float, level: float | None = None, offset: float = 0.0) -> FieldState:
    """Place a travelling profile on ``grid`` with its level crossing at ``center``.

    Values come from cubic Hermite interpolation of (u, du/dzeta); linear
    interpolation leaves kinks that D3 amplifies by 1/dx^3. Outside the
    sampled zeta range the grid boundary values are used. ``offset`` is
    added to u (shift of the equilibrium).
    """
    z, u, v = profile.zeta, profile.u, profile.v
    if level is None:
        level = 0.5 * (float(np.max(u)) + float(np.min(u)))
    zeta = grid.x - center + level_crossing(z, u, level)
    vals = _hermite_sample(z, u, v, np.clip(zeta, z[0], z[-1])) + offset
    vals = np.where(zeta < z[0], grid.u_left, vals)
    vals = np.where(zeta > z[-1], grid.u_right, vals)
    return FieldState(grid, vals, 0.0)


def snapshot_rows(state: FieldState) -> tuple[list[str], np.ndarray]:
    return ["x", "u"], np.column_stack([state.grid.x, state.u])
