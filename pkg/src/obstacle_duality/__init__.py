"""Convex obstacle problems with certified primal/dual solutions."""

from .convex_core import (
    ConjugateTable,
    RadialLagrangian,
    conjugate_eval,
    eval_gradient,
    eval_lagrangian,
    fenchel_gap,
    from_name,
)
from .errors import ObstacleDualityError
from .ladder import LadderLevel, build_ladder, find_rk, make_level
from .mesh import Grid, ScalarField, VectorField, divergence_weights, gradient, pairing
from .solver import ObstacleInstance, duality_gap, extract_dual, solve_and_report, solve_primal
from .verify import analytic_membrane_1d, oracle_conjugate, run_certificates

__version__ = "0.1.0"

__all__ = [
    "ConjugateTable",
    "Grid",
    "LadderLevel",
    "ObstacleDualityError",
    "ObstacleInstance",
    "RadialLagrangian",
    "ScalarField",
    "VectorField",
    "analytic_membrane_1d",
    "build_ladder",
    "conjugate_eval",
    "divergence_weights",
    "duality_gap",
    "eval_gradient",
    "eval_lagrangian",
    "extract_dual",
    "fenchel_gap",
    "find_rk",
    "from_name",
    "gradient",
    "make_level",
    "oracle_conjugate",
    "pairing",
    "run_certificates",
    "solve_and_report",
    "solve_primal",
]
