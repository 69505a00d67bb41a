"""RK4 time-step limits of the semi-discrete KdVB operator.

Compares the step from the discrete-symbol stability analysis with the
closed-form rule 0.4 min(dx^2/(2 alpha), dx^3/(2.8 beta)) over grid sizes,
and confirms the analysed limit empirically by running just below and
just above it.
"""

import argparse
from pathlib import Path

import numpy as np

from kdvb.errors import SimulationAborted
from kdvb.export import emit_csv
from kdvb.model import WaveParameters
from kdvb.pde_sim import FieldState, Grid1D, legacy_dt, rk4_stable_dt, run


def empirically_stable(grid, params, dt, steps=400):
    rng = np.random.default_rng(1)
    u0 = 1e-6 * rng.standard_normal(grid.n)
    try:
        run(FieldState(grid, u0), params, steps * dt, dt=dt, growth_limit=1e3)
    except SimulationAborted:
        return False
    return True


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=3.0)
    ap.add_argument("--beta", type=float, default=1.0)
    ap.add_argument("--length", type=float, default=80.0)
    ap.add_argument("--out", default="out/stability_scan.csv")
    args = ap.parse_args()
    p = WaveParameters(args.alpha, args.beta, 1.0)
    rows = []
    for n in (128, 256, 512, 1024, 2048):
        g = Grid1D.span(0.0, args.length, n)
        dt = rk4_stable_dt(g, p)
        rule = legacy_dt(g, p)
        below, above = empirically_stable(g, p, 0.98 * dt), empirically_stable(g, p, 1.05 * dt)
        rows.append([n, g.dx, dt, rule, dt / rule, int(below), int(above)])
        print(f"n={n:5d} dx={g.dx:.4f} dt_stable={dt:.3e} rule={rule:.3e} ratio={dt / rule:.2f} "
              f"stable@0.98={below} stable@1.05={above}")
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    emit_csv(args.out, ["n", "dx", "dt_stable", "dt_rule", "ratio", "stable_below", "stable_above"], rows)


if __name__ == "__main__":
    main()
