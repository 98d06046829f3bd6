"""Legendre conjugates of the radial catalog, checked against brute force.

For each integrand the slope inversion ``f'(t) = s`` gives ``f*(s)``; a dense
grid maximum of ``s t - f(t)`` is printed next to it.  The Fenchel gap is
then sampled on random pairs and at ``z = F'(xi)``.
"""

import argparse
import math

import numpy as np

from obstacle_duality import convex_core as cc
from obstacle_duality.verify import oracle_conjugate


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--names", nargs="+",
                        default=["power:1.5", "power:2", "power:3", "cosh", "xlogx_shifted"])
    parser.add_argument("--slopes", type=float, nargs="+", default=[0.0, 0.5, 1.0, 2.0, 5.0])
    parser.add_argument("--pairs", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    for name in args.names:
        L = cc.from_name(name)
        C = cc.ConjugateTable(L)
        print(f"\n{name}")
        print(f"{'s':>6} {'f*(s)':>18} {'grid max':>18} {'diff':>10}")
        for s in args.slopes:
            t_max = max(100.0, 1.5 * math.expm1(s)) if name == "xlogx_shifted" else 100.0
            exact = float(C(s))
            brute = oracle_conjugate(L.f, s, t_max=t_max, step=1e-3)
            print(f"{s:6.2f} {exact:18.12f} {brute:18.12f} {exact - brute:10.2e}")

        xi = rng.normal(size=(args.pairs, 2))
        z = rng.normal(size=(args.pairs, 2)) * 2
        gaps = cc.fenchel_gap(L, C, xi, z)
        eq = cc.fenchel_gap(L, C, xi, cc.eval_gradient(L, xi))
        print(f"random pairs: min gap {gaps.min():.3e}   at z = F'(xi): max |gap| {np.abs(eq).max():.3e}")


if __name__ == "__main__":
    main()
