"""Command-line front end.

    kdvb classify  --alpha 0 --beta 1 --lambda 1
    kdvb series    --alpha 2 --beta 1 --lambda 1 --zeta 10 --order 1
    kdvb profile   --alpha 3 --beta 1 --lambda 1
    kdvb compare   --alpha 2 --beta 1 --lambda 1 --u-inf 1 --order 3
    kdvb pde-check --alpha 3 --beta 1 --lambda 1
    kdvb zeros     --alpha 1 --beta 1 --lambda 1
    kdvb sweep     --alpha-values 1,1.5,2,3 --lambda-values 1

Settings come from built-in defaults, then an optional JSON file
(``--config``), then flags. Exit codes: 0 success, 1 invalid input,
2 numerical failure, 3 output I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import asymptotics, odeint, pde_sim, phase_plane
from .errors import AsymptoticRegimeError, KdVBError, ParameterError
from .export import emit_csv, emit_svg_plot, fmt
from .model import WaveParameters, hamiltonian, travelling_wave_field

COMMANDS = ("classify", "series", "profile", "compare", "pde-check", "zeros", "sweep")

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3


class ConfigError(ParameterError):
    def __init__(self, key: str, message: str):
        super().__init__(f"invalid '{key}': {message}")
        self.key = key


@dataclass
class RunConfig:
    alpha: float = 2.0
    beta: float = 1.0
    lambda_speed: float = 1.0
    u_inf: Optional[float] = None
    order_m: int = 3
    zeta: float = 10.0
    zeta0: Optional[float] = None
    zeta_end: Optional[float] = None
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_step: float = 1.0
    min_step: float = 1e-12
    max_steps: int = 200_000
    n_samples: int = 2001
    x_min: float = -40.0
    x_max: float = 40.0
    grid_n: int = 2048
    t_end: float = 5.0
    dt: Optional[float] = None
    snapshot_every: float = 1.0
    alpha_values: list = field(default_factory=lambda: [1.0, 1.5, 2.0, 3.0])
    lambda_values: list = field(default_factory=lambda: [1.0])
    jobs: int = 1
    overlay: bool = False
    out_dir: str = "out"
    json: bool = False

    @property
    def params(self) -> WaveParameters:
        return WaveParameters(self.alpha, self.beta, self.lambda_speed)

    @property
    def integrator(self) -> odeint.IntegratorConfig:
        return odeint.IntegratorConfig(self.rel_tol, self.abs_tol, self.max_step, self.min_step, self.max_steps)


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}

# flag -> (field, type, help)
_FLAGS = [
    ("--alpha", "alpha", float, "dissipation alpha >= 0 (default 2)"),
    ("--beta", "beta", float, "dispersion beta > 0 (default 1)"),
    ("--lambda", "lambda_speed", float, "wave speed lambda >= 0 (default 1)"),
    ("--u-inf", "u_inf", float, "tail amplitude; default +1 for series/compare, -1 (shock branch) otherwise"),
    ("--order", "order_m", int, "series truncation order m (default 3)"),
    ("--zeta", "zeta", float, "evaluation point for `series` (default 10)"),
    ("--zeta0", "zeta0", float, "tail seed location (default: automatic; 12 for compare)"),
    ("--zeta-end", "zeta_end", float, "end of the integration (default: automatic; zeta0+5 for compare)"),
    ("--rel-tol", "rel_tol", float, "integrator relative tolerance (default 1e-9)"),
    ("--abs-tol", "abs_tol", float, "integrator absolute tolerance (default 1e-12)"),
    ("--max-step", "max_step", float, "largest integrator step (default 1)"),
    ("--min-step", "min_step", float, "smallest integrator step (default 1e-12)"),
    ("--max-steps", "max_steps", int, "integrator step budget (default 200000)"),
    ("--samples", "n_samples", int, "profile samples (default 2001)"),
    ("--x-min", "x_min", float, "PDE domain left end (default -40)"),
    ("--x-max", "x_max", float, "PDE domain right end (default 40)"),
    ("--grid-n", "grid_n", int, "PDE grid points (default 2048)"),
    ("--t-end", "t_end", float, "PDE final time (default 5)"),
    ("--dt", "dt", float, "PDE time step (default: 0.8 x RK4 stability limit)"),
    ("--snapshot-every", "snapshot_every", float, "PDE snapshot cadence (default 1)"),
    ("--alpha-values", "alpha_values", "list", "comma-separated alphas for `sweep`"),
    ("--lambda-values", "lambda_values", "list", "comma-separated lambdas for `sweep`"),
    ("--jobs", "jobs", int, "worker processes for `sweep` (default 1)"),
    ("--out", "out_dir", str, "output directory (default ./out)"),
]


def _float_list(text: str) -> list:
    return [float(t) for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig keys (flags override it)")
    for flag, dest, typ, help_ in _FLAGS:
        kwargs = dict(dest=dest, default=argparse.SUPPRESS, help=help_)
        common.add_argument(flag, type=_float_list if typ == "list" else typ, **kwargs)
    common.add_argument("--overlay", dest="overlay", action="store_true", default=argparse.SUPPRESS,
                        help="`profile`: also draw the A/B/C regimes in one SVG")
    common.add_argument("--json", dest="json", action="store_true", default=argparse.SUPPRESS,
                        help="print the summary as JSON")
    parser = argparse.ArgumentParser(prog="kdvb", description="KdV-Burgers travelling-wave toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _coerce(key: str, value):
    f = _FIELDS[key]
    default = f.default if f.default is not dataclasses.MISSING else f.default_factory()
    if key in ("alpha_values", "lambda_values"):
        if not isinstance(value, list) or not value:
            raise ConfigError(key, "expected a non-empty list of numbers")
        try:
            return [float(v) for v in value]
        except (TypeError, ValueError):
            raise ConfigError(key, "expected a non-empty list of numbers") from None
    if value is None:
        if default is None:
            return None
        raise ConfigError(key, "must not be null")
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ConfigError(key, "expected true/false")
        return value
    if isinstance(default, int) and not isinstance(default, bool):
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not float(value).is_integer():
            raise ConfigError(key, f"expected an integer, got {value!r}")
        return int(value)
    if isinstance(default, str):
        if not isinstance(value, str):
            raise ConfigError(key, "expected a string")
        return value
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ConfigError(key, f"expected a number, got {value!r}") from None
    if not math.isfinite(out):
        raise ConfigError(key, "must be finite")
    return out


def validate(cfg: RunConfig) -> RunConfig:
    if cfg.beta <= 0:
        raise ConfigError("beta", f"beta > 0 required, got {cfg.beta}")
    if cfg.alpha < 0:
        raise ConfigError("alpha", f"alpha >= 0 required, got {cfg.alpha}")
    if cfg.lambda_speed < 0:
        raise ConfigError("lambda_speed", f"lambda >= 0 required (use lambda -> -lambda), got {cfg.lambda_speed}")
    if cfg.order_m < 0:
        raise ConfigError("order_m", "must be >= 0")
    for key in ("rel_tol", "abs_tol"):
        if not 0 < getattr(cfg, key) < 1:
            raise ConfigError(key, "must lie in (0, 1)")
    if not 0 < cfg.min_step < cfg.max_step:
        raise ConfigError("min_step", "need 0 < min_step < max_step")
    if cfg.max_steps < 1:
        raise ConfigError("max_steps", "must be positive")
    if cfg.n_samples < 16:
        raise ConfigError("n_samples", "must be >= 16")
    if cfg.grid_n < 8:
        raise ConfigError("grid_n", "must be >= 8")
    if not cfg.x_min < cfg.x_max:
        raise ConfigError("x_min", "need x_min < x_max")
    if cfg.t_end <= 0:
        raise ConfigError("t_end", "must be positive")
    if cfg.dt is not None and cfg.dt <= 0:
        raise ConfigError("dt", "must be positive")
    if cfg.snapshot_every <= 0:
        raise ConfigError("snapshot_every", "must be positive")
    if cfg.jobs < 1:
        raise ConfigError("jobs", "must be >= 1")
    for key in ("alpha_values", "lambda_values"):
        vals = getattr(cfg, key)
        if any(v < 0 for v in vals):
            raise ConfigError(key, "values must be >= 0")
    return cfg


def parse_config(argv: Optional[list] = None) -> tuple[str, RunConfig]:
    """Parse flags (and an optional JSON file) into a validated RunConfig."""
    ns = vars(build_parser().parse_args(argv))
    command = ns.pop("command")
    config_path = ns.pop("config", None)
    merged: dict = {}
    if config_path:
        try:
            with open(config_path, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError("config", f"cannot read {config_path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"{config_path} is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config", "top level must be an object")
        for key, value in data.items():
            if key not in _FIELDS:
                raise ConfigError(key, "unknown key")
            merged[key] = _coerce(key, value)
    for key, value in ns.items():
        merged[key] = _coerce(key, value)
    return command, validate(RunConfig(**merged))


# ---------------------------------------------------------------- commands


def _u_inf(cfg: RunConfig, default: float) -> float:
    return default if cfg.u_inf is None else cfg.u_inf


def _trace(cfg: RunConfig, u_inf: float) -> odeint.WaveProfile:
    params = cfg.params
    z0_auto, ze_auto = odeint.default_trace_span(params, u_inf)
    zeta0 = z0_auto if cfg.zeta0 is None else cfg.zeta0
    zeta_end = ze_auto if cfg.zeta_end is None else cfg.zeta_end
    return odeint.trace_wave(params, u_inf, zeta0, zeta_end, cfg.integrator, m=cfg.order_m, n_samples=cfg.n_samples)


def cmd_classify(cfg: RunConfig, out: Path):
    params = cfg.params
    reg = phase_plane.classify(params)
    rows = []
    points = {}
    for pt in phase_plane.singular_points(params):
        sp = phase_plane.singular_point(params, pt)
        points[f"({fmt(pt[0])},{fmt(pt[1])})"] = sp
        rows.append([fmt(pt[0]), fmt(pt[1]), sp.kind,
                     sp.eigenvalues[0].real, sp.eigenvalues[0].imag,
                     sp.eigenvalues[1].real, sp.eigenvalues[1].imag])
        if params.lambda_speed == 0:
            break
    emit_csv(out / "classify.csv", ["u", "v", "kind", "mu1_re", "mu1_im", "mu2_re", "mu2_im"], rows)
    line = f"case={reg.case_label} saddle=(0,0)"
    data = {
        "case": reg.case_label,
        "saddle": [0.0, 0.0],
        "discriminant": reg.discriminant,
        "defective": reg.defective,
        "degenerate": reg.degenerate,
        "points": {k: {"kind": v.kind, "eigenvalues": [[e.real, e.imag] for e in v.eigenvalues]}
                   for k, v in points.items()},
    }
    return line, data


def cmd_series(cfg: RunConfig, out: Path):
    params = cfg.params
    if params.lambda_speed == 0:
        u = asymptotics.eval_tail_zero_speed(params, cfg.zeta)
        emit_csv(out / "series.csv", ["zeta", "u"], [[cfg.zeta, u]])
        return f"u={fmt(u)} zeta={fmt(cfg.zeta)} branch=zero_speed", {"u": u, "zeta": cfg.zeta}
    u_inf = _u_inf(cfg, 1.0)
    u, du = asymptotics.eval_tail(params, u_inf, cfg.order_m, cfg.zeta)
    tail = asymptotics.build_tail(params, u_inf, cfg.order_m)
    form_sigma = tail.epsilon - 2.0
    rows = []
    for i in range(cfg.order_m + 1):
        closed = asymptotics.closed_form_coefficient(form_sigma, u_inf, i, epsilon=tail.epsilon)
        rows.append([i, tail.coefficients[i], closed, tail.zeta_coefficients[i], tail.zeta_rates[i]])
    emit_csv(out / "series.csv", ["i", "c_xi", "closed_form_xi", "coef_zeta", "rate"], rows)
    line = f"u={fmt(u)} du_dzeta={fmt(du)} zeta={fmt(cfg.zeta)} order={cfg.order_m}"
    return line, {"u": u, "du_dzeta": du, "zeta": cfg.zeta, "order": cfg.order_m}


def _overlay(cfg: RunConfig, out: Path):
    series = []
    lam, beta = cfg.lambda_speed, cfg.beta
    crit = 2.0 * math.sqrt(beta * lam)
    for label, alpha in (("A", 1.5 * crit), ("B", 0.5 * crit), ("C", 0.0)):
        sub = dataclasses.replace(cfg, alpha=alpha, zeta0=None, zeta_end=None)
        prof = _trace(sub, -1.0)
        zc = prof.zeta[int(np.argmax(prof.u))] if alpha == 0 else pde_sim.level_crossing(prof.zeta, prof.u, lam)
        keep = np.abs(prof.zeta - zc) <= 30
        series.append((f"{label} alpha={alpha:g}", prof.zeta[keep] - zc, prof.u[keep]))
    emit_svg_plot(out / "regimes.svg", series, title=f"beta={beta:g} lambda={lam:g}")


def cmd_profile(cfg: RunConfig, out: Path):
    params = cfg.params
    prof = _trace(cfg, _u_inf(cfg, -1.0))
    emit_csv(out / "profile.csv", ["zeta", "u", "v"], prof.rows())
    emit_svg_plot(out / "profile.svg", [("u", prof.zeta, prof.u)],
                  title=f"alpha={cfg.alpha:g} beta={cfg.beta:g} lambda={cfg.lambda_speed:g}")
    if cfg.overlay:
        _overlay(cfg, out)
    reg = phase_plane.classify(params)
    data = {"case": reg.case_label, "samples": len(prof.zeta), "terminated": prof.terminated,
            "u_left": float(prof.u[0]), "u_max": float(np.max(prof.u)), "extrema": odeint.count_extrema(prof)}
    if params.alpha == 0:
        h = hamiltonian(params, prof.trajectory.y[:, 0], prof.trajectory.y[:, 1])
        data["hamiltonian_drift"] = float(np.max(h) - np.min(h))
    line = " ".join(f"{k}={fmt(v) if isinstance(v, float) else v}" for k, v in data.items())
    return line, data


def cmd_compare(cfg: RunConfig, out: Path):
    params = cfg.params
    if params.lambda_speed == 0 or params.alpha == 0:
        raise ParameterError("compare needs alpha > 0 and lambda > 0")
    u_inf = _u_inf(cfg, 1.0)
    zeta0 = 12.0 if cfg.zeta0 is None else cfg.zeta0
    zeta_end = zeta0 + 5.0 if cfg.zeta_end is None else cfg.zeta_end
    seed = odeint.seed_from_tail(params, u_inf, zeta0, cfg.order_m)
    traj = odeint.integrate(travelling_wave_field(params), seed, (zeta0, zeta_end), cfg.integrator)
    zz = np.linspace(min(zeta0, zeta_end), max(zeta0, zeta_end), cfg.n_samples)
    u_ode = traj(zz)[:, 0]
    u_ser = np.array([asymptotics.eval_tail(params, u_inf, cfg.order_m, z)[0] for z in zz])
    rel = np.abs(u_ode - u_ser) / np.abs(u_ser)
    emit_csv(out / "compare.csv", ["zeta", "u_series", "u_ode", "rel_err"], np.column_stack([zz, u_ser, u_ode, rel]))
    emit_svg_plot(out / "compare.svg", [("series", zz, u_ser), ("ode", zz, u_ode)])
    data = {"max_rel_err": float(np.max(rel)), "zeta0": zeta0, "zeta_end": zeta_end, "order": cfg.order_m,
            "expected_decay_rate": asymptotics.build_tail(params, u_inf, 0).decay_rate}
    line = " ".join(f"{k}={fmt(v)}" for k, v in data.items())
    return line, data


def cmd_pde_check(cfg: RunConfig, out: Path):
    params = cfg.params
    if params.alpha == 0 or params.lambda_speed == 0:
        raise ParameterError("pde-check needs alpha > 0 and lambda > 0 (shock profile)")
    if cfg.t_end / cfg.snapshot_every < 2 - 1e-9:
        raise ConfigError("snapshot_every", "speed fitting needs at least 3 snapshots (t_end >= 2 * snapshot_every)")
    lam = params.lambda_speed
    width = cfg.x_max - cfg.x_min
    prof = odeint.shock_profile(params, _u_inf(cfg, -1.0), -2 * width, 2 * width, cfg.integrator)
    grid = pde_sim.Grid1D.span(cfg.x_min, cfg.x_max, cfg.grid_n, periodic=False, u_left=2 * lam, u_right=0.0)
    travel = lam * cfg.t_end
    start = cfg.x_min + 0.5 * width - 0.5 * travel
    state = pde_sim.field_from_profile(prof, grid, center=start, level=lam)
    snaps = pde_sim.run(state, params, cfg.t_end, dt=cfg.dt, snapshot_every=cfg.snapshot_every)
    for n, snap in enumerate(snaps):
        header, rows = pde_sim.snapshot_rows(snap)
        emit_csv(out / f"snapshot_{n:04d}.csv", header, rows)
    speed = pde_sim.measure_speed(snaps, level=lam)
    drift, _ = pde_sim.shape_drift(snaps[0], snaps[-1], guess=travel)
    emit_svg_plot(out / "pde.svg", [(f"t={s.time:g}", grid.x, s.u) for s in (snaps[0], snaps[-1])], xlabel="x")
    data = {"speed": speed, "expected": lam, "speed_rel_err": abs(speed - lam) / lam, "shape_drift": drift,
            "snapshots": len(snaps)}
    line = " ".join(f"{k}={fmt(v) if isinstance(v, float) else v}" for k, v in data.items())
    return line, data


def cmd_zeros(cfg: RunConfig, out: Path):
    prof = _trace(cfg, _u_inf(cfg, -1.0))
    zc = asymptotics.count_isolated_zeros(prof)
    emit_csv(out / "zeros.csv", ["zeta"], [[z] for z in zc.locations])
    data = {"count": zc.count, "intervals": len(zc.zero_intervals), "locations": list(zc.locations)}
    return f"count={zc.count} intervals={len(zc.zero_intervals)}", data


def param_hash(alpha: float, beta: float, lam: float) -> str:
    key = json.dumps({"alpha": alpha, "beta": beta, "lambda": lam}, sort_keys=True)
    return hashlib.sha1(key.encode()).hexdigest()[:12]


def sweep_point(cfg: RunConfig, alpha: float, lam: float) -> dict:
    """Classification and traced left state for one grid point (pure)."""
    sub = dataclasses.replace(cfg, alpha=alpha, lambda_speed=lam, zeta0=None, zeta_end=None)
    params = sub.params
    reg = phase_plane.classify(params)
    row = {"alpha": alpha, "beta": cfg.beta, "lambda": lam, "case": reg.case_label,
           "hash": param_hash(alpha, cfg.beta, lam), "mode": "", "left_state": math.nan, "extrema": -1}
    if reg.case_label in (phase_plane.A_NODAL, phase_plane.B_FOCAL):
        prof = _trace(sub, _u_inf(cfg, -1.0))
        left = odeint.detect_left_state(prof)
        row.update(mode=left.mode, left_state=left.limit, extrema=left.n_extrema, profile=prof.rows())
    return row


def cmd_sweep(cfg: RunConfig, out: Path):
    points = [(a, l) for l in cfg.lambda_values for a in cfg.alpha_values]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(sweep_point, [cfg] * len(points), *zip(*points)))
    else:
        results = [sweep_point(cfg, a, l) for a, l in points]
    rows = []
    agree = 0
    for r in results:
        prof = r.pop("profile", None)
        if prof is not None:
            emit_csv(out / f"profile_{r['hash']}.csv", ["zeta", "u", "v"], prof)
        expected = {phase_plane.A_NODAL: "monotone", phase_plane.B_FOCAL: "oscillatory"}.get(r["case"])
        agree += expected is not None and expected == r["mode"]
        rows.append([r["alpha"], r["beta"], r["lambda"], r["case"], r["mode"] or "-", r["left_state"], r["extrema"], r["hash"]])
    emit_csv(out / "sweep.csv", ["alpha", "beta", "lambda", "case", "mode", "left_state", "extrema", "hash"], rows)
    traced = sum(1 for r in results if r["mode"])
    return f"points={len(points)} traced={traced} agree={agree}", {"points": len(points), "traced": traced, "agree": agree}


_DISPATCH = {
    "classify": cmd_classify,
    "series": cmd_series,
    "profile": cmd_profile,
    "compare": cmd_compare,
    "pde-check": cmd_pde_check,
    "zeros": cmd_zeros,
    "sweep": cmd_sweep,
}


def run_command(name: str, cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create output directory {cfg.out_dir}: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        line, data = _DISPATCH[name](cfg, out)
    except (ParameterError, AsymptoticRegimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except KdVBError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    if cfg.json:
        print(json.dumps({"command": name, **data}, sort_keys=True), file=stdout)
    else:
        print(line, file=stdout)
    return EXIT_OK


def main(argv: Optional[list] = None) -> int:
    try:
        command, cfg = parse_config(argv)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as exc:  # argparse usage errors
        return EXIT_INPUT if exc.code else EXIT_OK
    return run_command(command, cfg)


if __name__ == "__main__":
    sys.exit(main())
