"""Monotone shock, oscillatory shock and solitary wave on one set of axes."""

import argparse
import math
from pathlib import Path

import numpy as np

from kdvb.export import emit_csv, emit_svg_plot
from kdvb.model import WaveParameters
from kdvb.odeint import default_trace_span, trace_wave
from kdvb.pde_sim import level_crossing
from kdvb.phase_plane import classify


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--beta", type=float, default=1.0)
    ap.add_argument("--lambda", dest="lam", type=float, default=1.0)
    ap.add_argument("--out", default="out")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    crit = 2.0 * math.sqrt(args.beta * args.lam)
    series = []
    for alpha in (1.5 * crit, 0.5 * crit, 0.0):
        p = WaveParameters(alpha, args.beta, args.lam)
        z0, ze = default_trace_span(p, -1.0)
        prof = trace_wave(p, -1.0, z0, ze)
        # centre shocks on u = lambda, the soliton on its peak
        zc = prof.zeta[np.argmax(prof.u)] if alpha == 0 else level_crossing(prof.zeta, prof.u, args.lam)
        keep = np.abs(prof.zeta - zc) <= 30
        label = classify(p).case_label
        series.append((f"{label} alpha={alpha:.3g}", prof.zeta[keep] - zc, prof.u[keep]))
        emit_csv(out / f"regime_{label}.csv", ["zeta", "u", "v"], prof.rows()[keep])
        print(f"{label:10s} alpha={alpha:.4g}  max u={prof.u.max():.6f}")
    emit_svg_plot(out / "regimes.svg", series, title=f"beta={args.beta:g} lambda={args.lam:g}")


if __name__ == "__main__":
    main()
