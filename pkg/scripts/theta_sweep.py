#!/usr/bin/env python3
"""Optimal alpha and minimum outage against the primary outage tolerance.

Runs the closed-form optimizer for several primary-pair counts over a
log-spaced tolerance grid, and reports where the two-pair and four-pair
minimum-outage curves swap order.
"""
import argparse
import csv
import sys

import numpy as np

from ehrelay import default_scenario, optimize_alpha, secondary_outage_analytic
from ehrelay.power import capped_powers


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--L", type=int, nargs="+", default=[2, 4])
    p.add_argument("--theta-min", type=float, default=1e-3)
    p.add_argument("--theta-max", type=float, default=0.3)
    p.add_argument("--points", type=int, default=10)
    args = p.parse_args()

    thetas = np.logspace(np.log10(args.theta_min), np.log10(args.theta_max), args.points)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["L", "theta_p", "alpha_star", "p_out_min", "p_sm_capped", "p_r_capped"])
    best = {}
    for L in args.L:
        for th in thetas:
            s = default_scenario(L=L, theta_p=float(th))
            opt = optimize_alpha(lambda a: secondary_outage_analytic(s, a))
            b = capped_powers(s)
            best[L, th] = opt.p_out_min
            out.writerow([L, repr(float(th)), repr(opt.alpha_star), repr(opt.p_out_min),
                          int(b.p_sm == s.p_peak), int(b.p_r == s.p_peak)])
    if len(args.L) >= 2:
        l1, l2 = args.L[:2]
        diff = np.array([best[l1, th] - best[l2, th] for th in thetas])
        flips = np.nonzero(np.diff(np.sign(diff)))[0]
        for k in flips:
            print(f"# L={l1} vs L={l2}: order swaps between theta_p={thetas[k]:.4g} and {thetas[k + 1]:.4g}",
                  file=sys.stderr)


if __name__ == "__main__":
    main()
