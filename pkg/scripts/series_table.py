"""Tail-series coefficients: recurrence vs closed product form, order by order."""

import argparse
from pathlib import Path

from kdvb.asymptotics import series_discrepancy
from kdvb.export import emit_csv
from kdvb.model import WaveParameters


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=2.0)
    ap.add_argument("--beta", type=float, default=1.0)
    ap.add_argument("--lambda", dest="lam", type=float, default=1.0)
    ap.add_argument("--u-inf", type=float, default=1.0)
    ap.add_argument("--order", type=int, default=8)
    ap.add_argument("--out", default="out/series_table.csv")
    args = ap.parse_args()

    rows = series_discrepancy(WaveParameters(args.alpha, args.beta, args.lam), args.u_inf, args.order)
    print(f"{'i':>3} {'recurrence':>16} {'closed form':>16} {'ratio':>10}")
    for r in rows:
        print(f"{r['i']:>3} {r['recurrence']:>16.6g} {r['closed_form']:>16.6g} {r['ratio']:>10.4f}")
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    emit_csv(args.out, ["i", "recurrence", "closed_form", "ratio"],
             [[r["i"], r["recurrence"], r["closed_form"], r["ratio"]] for r in rows])


if __name__ == "__main__":
    main()
