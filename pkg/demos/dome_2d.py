"""Membrane over a paraboloid cap on the unit square.

Prints the contact region size, the certificate table and a coarse text
rendering of the contact set.
"""

import argparse

import numpy as np

from obstacle_duality import convex_core as cc
from obstacle_duality.mesh import Grid
from obstacle_duality.solver import ObstacleInstance, solve_and_report
from obstacle_duality.verify import run_certificates


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--cells", type=int, default=64)
    parser.add_argument("--height", type=float, default=0.25)
    parser.add_argument("--lagrangian", default="power:2")
    args = parser.parse_args()

    grid = Grid.rectangle((0, 1), (0, 1), args.cells)
    inst = ObstacleInstance(
        grid, cc.from_name(args.lagrangian),
        grid.nodal(lambda x, y: args.height - (x - 0.5) ** 2 - (y - 0.5) ** 2),
        grid.nodal(lambda x, y: 0.0 * x),
    )
    rep = solve_and_report(inst)
    print(f"iterations {rep.iterations}, primal {rep.primal:.10f}, gap {rep.gap:.2e}")
    print(f"contact nodes {rep.contact_nodes} of {grid.num_nodes}")
    for c in run_certificates(inst, rep.u, rep.sigma).values():
        print(f"  {'PASS' if c.passed else 'FAIL'}  {c.name:24s} {c.residual:9.2e} <= {c.tolerance:.2e}")

    touch = rep.u.values - inst.psi.values <= 1e-10
    step = max(1, args.cells // 32)
    print()
    for row in touch[::step, ::step]:
        print("".join("#" if v else "." for v in row))


if __name__ == "__main__":
    main()
