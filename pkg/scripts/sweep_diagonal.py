"""Sweep all (theta, chi) pairs over the ramified quadratic extensions of Q_p.

Prints a summary of the minimal-vector diagonal check, the newform closed
form, the support scan and the cross-term rules, with record counts.

Usage: python scripts/sweep_diagonal.py --p 3 5 [--conductors 2 4] [--theta-limit N] [--json out.json]
"""

import argparse
import json
import time

from waldperiods.sweep import SweepConfig, run_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, nargs="+", default=[3])
    ap.add_argument("--conductors", type=int, nargs="+", default=[2, 4])
    ap.add_argument("--theta-limit", type=int, default=None)
    ap.add_argument("--precision", type=int, default=14)
    ap.add_argument("--json", default=None, help="write the summary to this file")
    args = ap.parse_args()
    summary = {}
    for p in args.p:
        t = time.perf_counter()
        rep = run_sweep(SweepConfig(p, tuple(args.conductors), args.precision, theta_limit=args.theta_limit))
        row = {
            "diagonal_ok": rep.diagonal_ok,
            "closed_form_ok": rep.closed_form_ok,
            "support_ok": rep.support_ok,
            "cross_ok": rep.cross_ok,
            "counts": rep.counts(),
            "seconds": round(time.perf_counter() - t, 1),
        }
        summary[p] = row
        print(f"p={p}: " + ", ".join(f"{k}={v}" for k, v in row.items()))
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(summary, fh, indent=1, sort_keys=True)


if __name__ == "__main__":
    main()
