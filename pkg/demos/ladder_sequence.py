"""Obstacle problems for the ladder levels converging to the full problem.

Energies I_k increase with k.  They stay below the limit energy I* by
roughly mu_k |Omega|, since every level is shifted down by mu_k.
"""

import argparse

from obstacle_duality import convex_core as cc
from obstacle_duality.mesh import Grid
from obstacle_duality.solver import ObstacleInstance, ladder_solve_sequence


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--cells", type=int, default=512)
    parser.add_argument("--k", type=int, nargs="+", default=[2, 4, 8, 16, 32])
    args = parser.parse_args()

    grid = Grid.interval(-1.0, 1.0, args.cells)
    inst = ObstacleInstance(grid, cc.power(2), grid.nodal(lambda x: 0.5 - x**2),
                            grid.nodal(lambda x: 0.0 * x))
    seq = ladder_solve_sequence(inst, args.k)
    size = 2.0
    print(f"I* = {seq.reference_energy:.10f}")
    print(f"{'k':>4} {'I_k':>14} {'I* - I_k':>12} {'mu_k |Omega|':>14} {'max|sigma_k - sigma*|':>22}")
    for lv in seq.levels:
        print(f"{lv.k:4d} {lv.energy:14.10f} {seq.reference_energy - lv.energy:12.6f} "
              f"{size / (lv.k - 1):14.6f} {lv.sigma_error:22.3e}")
    print(f"nondecreasing: {seq.diagnostics['energy_nondecreasing']}")


if __name__ == "__main__":
    main()
