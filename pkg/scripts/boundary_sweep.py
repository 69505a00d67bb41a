"""Scan alpha across the node/focus boundary alpha^2 = 4 beta lambda.

For each alpha the regime predicted from the linearisation is compared with
the way the traced profile approaches its left state.
"""

import argparse
import math
from pathlib import Path

import numpy as np

from kdvb.export import emit_csv
from kdvb.model import WaveParameters
from kdvb.odeint import default_trace_span, detect_left_state, trace_wave
from kdvb.phase_plane import A_NODAL, classify


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--beta", type=float, default=1.0)
    ap.add_argument("--lambda", dest="lam", type=float, default=1.0)
    ap.add_argument("--points", type=int, default=21)
    ap.add_argument("--out", default="out/boundary_sweep.csv")
    args = ap.parse_args()

    crit = 2.0 * math.sqrt(args.beta * args.lam)
    rows = []
    for alpha in np.linspace(0.5 * crit, 1.5 * crit, args.points):
        p = WaveParameters(float(alpha), args.beta, args.lam)
        label = classify(p).case_label
        z0, ze = default_trace_span(p, -1.0)
        left = detect_left_state(trace_wave(p, -1.0, z0, ze))
        expected = "monotone" if label == A_NODAL else "oscillatory"
        rows.append([alpha, label, left.mode, left.n_extrema, left.limit, "yes" if left.mode == expected else "no"])
        print(f"alpha={alpha:.4f} {label:8s} {left.mode:12s} extrema={left.n_extrema:3d} u_left={left.limit:.8f}")
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    emit_csv(args.out, ["alpha", "case", "mode", "extrema", "left_state", "agree"], rows)


if __name__ == "__main__":
    main()
