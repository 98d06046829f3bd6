"""Lipschitz approximations F_k of a superlinear integrand.

Each level caps the slope of the bipolar at k, lifts it to the minorant
theta, continues linearly past r_k and mollifies.  The invariants are
checked on a grid.  With cosh and theta = t^2 the level rises above cosh
where t^2 > cosh t; theta = t^2/2 keeps every level below.
"""

import argparse

import numpy as np

from obstacle_duality import convex_core as cc
from obstacle_duality.ladder import build_ladder, ladder_report


def show(name, minorant, ks):
    L = cc.from_name(name, minorant)
    C = cc.ConjugateTable(L)
    levels = build_ladder(L, C, ks, validate=False)
    print(f"\n{name} with minorant {minorant}")
    print(f"{'k':>4} {'r_k':>12} {'m_k':>12} {'delta_k':>12} {'mu_k':>10}")
    for lv in levels:
        print(f"{lv.k:4d} {lv.r_k:12.6f} {lv.m_k:12.6f} {lv.delta_k:12.3e} {lv.mu_k:10.4f}")
    t = np.arange(0.0, 3 * levels[-1].r_k, 0.01)
    for check, (ok, worst, where) in ladder_report(levels, t).items():
        print(f"  {'PASS' if ok else 'FAIL'}  {check:22s} worst {worst:10.3e} at {where}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--kmax", type=int, default=20)
    args = parser.parse_args()
    ks = range(2, args.kmax + 1)
    show("power:2", "quadratic:1", ks)
    show("cosh", "quadratic:1", ks)
    show("cosh", "quadratic:0.5", ks)


if __name__ == "__main__":
    main()
