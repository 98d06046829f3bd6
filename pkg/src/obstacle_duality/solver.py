"""Discrete obstacle problem: primal solve, dual field, duality gap.

The primal problem is

    min  sum_cells F(grad u) * vol   over   u >= psi,  u = u0 on the boundary,

solved by accelerated projected gradient descent with backtracking and
restarts.  The dual objective at a field ``sigma`` is
``pairing(sigma, psi, u0) - sum_cells F*(sigma) * vol``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .convex_core import ConjugateTable, RadialLagrangian, eval_gradient
from .errors import InfeasibleInstance, MaxIterExceeded, SMinusViolation
from .ladder import build_ladder
from .mesh import (
    DivergenceWeights,
    Grid,
    ScalarField,
    VectorField,
    adjoint_array,
    divergence_weights,
    grad_array,
    pairing,
)

__all__ = [
    "ObstacleInstance",
    "SolveResult",
    "PrimalDualReport",
    "primal_energy",
    "solve_primal",
    "extract_dual",
    "dual_objective",
    "duality_gap",
    "solve_and_report",
    "LevelSolve",
    "ladder_solve_sequence",
]

TOL_KKT = 1e-12
TOL_GAP = 1e-6
TOL_DIV = 1e-9


@dataclass(frozen=True)
class ObstacleInstance:
    """Grid, integrand, obstacle and boundary datum of one problem."""

    grid: Grid
    lagrangian: RadialLagrangian
    psi: ScalarField
    u0: ScalarField
    conjugate: ConjugateTable | None = None
    t_stretch: float = 2.0

    def __post_init__(self):
        if self.conjugate is None:
            object.__setattr__(self, "conjugate", ConjugateTable(self.lagrangian))
        if self.t_stretch <= 1.0:
            raise ValueError("t_stretch must exceed 1")
        bnd = self.grid.boundary_mask
        excess = self.psi.values[bnd] - self.u0.values[bnd]
        if np.any(excess > 0):
            raise InfeasibleInstance(
                f"obstacle exceeds the boundary datum by {float(np.max(excess)):.3g}"
            )
        g0 = grad_array(self.grid, self.u0.values)
        r0 = np.linalg.norm(g0, axis=-1)
        with np.errstate(over="ignore"):
            ok = np.all(np.isfinite(self.lagrangian.f(r0))) and np.all(
                np.isfinite(self.lagrangian.f(self.t_stretch * r0))
            )
        if not ok:
            raise InfeasibleInstance("F(Du0) or F(t Du0) is not finite")

    def with_lagrangian(self, L: RadialLagrangian) -> "ObstacleInstance":
        return replace(self, lagrangian=L, conjugate=ConjugateTable(L))

    def initial_guess(self) -> ScalarField:
        v = np.maximum(self.u0.values, self.psi.values)
        v[self.grid.boundary_mask] = self.u0.values[self.grid.boundary_mask]
        return ScalarField(self.grid, v)


def primal_energy(inst: ObstacleInstance, u: ScalarField) -> float:
    """``sum_cells F(grad u) * vol``."""
    r = np.linalg.norm(grad_array(inst.grid, u.values), axis=-1)
    return float(np.sum(inst.lagrangian.f(r))) * inst.grid.cell_volume


@dataclass
class SolveResult:
    u: ScalarField
    iterations: int
    converged: bool
    residual: float
    energies: list = field(default_factory=list, repr=False)
    residuals: list = field(default_factory=list, repr=False)


def _energy_and_gradient(grid, L, v):
    g = grad_array(grid, v)
    r = np.linalg.norm(g, axis=-1)
    energy = float(np.sum(L.f(r))) * grid.cell_volume
    scale = np.divide(L.df(r), r, out=np.zeros_like(r), where=r > 0)
    sigma = scale[..., None] * g
    return energy, adjoint_array(grid, sigma), float(np.max(np.abs(sigma), initial=0.0))


def solve_primal(inst: ObstacleInstance, step=None, max_iter=200_000, tol_kkt=TOL_KKT,
                 u_init: ScalarField | None = None, backtrack=0.5, expand=1.05,
                 raise_on_maxiter=True) -> SolveResult:
    """Accelerated projected gradient descent on the discrete energy.

    Each step is ``x+ = max(y - a grad E(y), psi)`` with Dirichlet values
    reset.  The step ``a`` is halved until the secant curvature along the step
    satisfies ``<grad E(x+) - grad E(y), x+ - y> <= |x+ - y|^2 / a`` and grows
    by `expand` after accepted steps.  Momentum restarts whenever the energy
    increases.

    Stops when the natural residual ``|x - P(x - a grad E(x))|_inf / a`` drops
    below ``tol_kkt`` times the nodal flux scale ``max|sigma| vol / h``.

    Raises `MaxIterExceeded` (carrying the best iterate) when
    `raise_on_maxiter` is set and `max_iter` is reached.
    """
    grid, L = inst.grid, inst.lagrangian
    bnd = grid.boundary_mask
    psi = inst.psi.values
    u0b = inst.u0.values[bnd]
    flux_factor = grid.cell_volume / min(grid.spacing)

    def project(v):
        v = np.maximum(v, psi)
        v[bnd] = u0b
        return v

    x = project((u_init or inst.initial_guess()).values.copy())
    ex, gx, smax = _energy_and_gradient(grid, L, x)
    alpha = 1.0 if step is None else float(step)
    y, ey, gy = x, ex, gx
    t = 1.0
    energies, residuals = [ex], []
    best = (ex, x)
    converged, resid = False, math.inf
    it = 0
    for it in range(1, max_iter + 1):
        while True:
            xn = project(y - alpha * gy)
            d = xn - y
            dd = float(np.vdot(d, d))
            en, gn, smax = _energy_and_gradient(grid, L, xn)
            if dd == 0.0 or not math.isfinite(en):
                if not math.isfinite(en):
                    alpha *= backtrack
                    continue
                break
            if float(np.vdot(gn - gy, d)) <= dd / alpha:
                break
            alpha *= backtrack
        if en > ex and y is not x:
            # momentum overshoot: restart from the last accepted iterate
            y, ey, gy, t = x, ex, gx, 1.0
            continue
        resid = float(np.max(np.abs(xn - project(xn - alpha * gn)))) / alpha
        energies.append(en)
        residuals.append(resid)
        if en < best[0]:
            best = (en, xn)
        tn = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))
        yn = xn + ((t - 1.0) / tn) * (xn - x)
        if float(np.vdot(y - xn, xn - x)) > 0.0:
            yn, tn = xn, 1.0
        x, ex, gx = xn, en, gn
        if resid <= tol_kkt * max(smax * flux_factor, 1e-300):
            converged = True
            break
        y, t = yn, tn
        if y is x:
            ey, gy = ex, gx
        else:
            ey, gy, _ = _energy_and_gradient(grid, L, y)
        alpha *= expand
    result = SolveResult(ScalarField(grid, x if converged else best[1]), it,
                         converged, resid, energies, residuals)
    if not converged and raise_on_maxiter:
        raise MaxIterExceeded(
            f"no convergence after {it} iterations (residual {resid:.3g})", result
        )
    return result


def extract_dual(inst: ObstacleInstance, u: ScalarField) -> VectorField:
    """Cellwise ``sigma = F'(grad u)``."""
    return VectorField(inst.grid, eval_gradient(inst.lagrangian, grad_array(inst.grid, u.values)))


def dual_objective(inst: ObstacleInstance, sigma: VectorField) -> float:
    """``[[sigma, psi]]_{u0} - sum_cells F*(sigma) vol``; ``-inf`` off the domain."""
    fstar = inst.conjugate(np.linalg.norm(sigma.values, axis=-1))
    if not np.all(np.isfinite(fstar)):
        return -math.inf
    return pairing(sigma, inst.psi, inst.u0) - float(np.sum(fstar)) * inst.grid.cell_volume


def _s_minus_ok(weights: DivergenceWeights, tol_div=TOL_DIV) -> bool:
    return weights.min_interior() >= -tol_div * max(weights.scale(), 1e-300)


def duality_gap(inst: ObstacleInstance, u: ScalarField, sigma: VectorField,
                tol_div=TOL_DIV) -> float:
    """``primal_energy(u) - dual_objective(sigma)``.

    Raises `SMinusViolation` if ``sigma`` has an interior weight below
    ``-tol_div * max|w|``; weak duality is only asserted on that set.
    """
    w = divergence_weights(sigma)
    if not _s_minus_ok(w, tol_div):
        raise SMinusViolation(
            f"min interior weight {w.min_interior():.3g} (scale {w.scale():.3g})"
        )
    return primal_energy(inst, u) - dual_objective(inst, sigma)


@dataclass
class PrimalDualReport:
    u: ScalarField
    sigma: VectorField
    weights: DivergenceWeights
    primal: float
    dual: float
    gap: float
    iterations: int
    converged: bool
    residuals: list = field(repr=False, default_factory=list)
    contact_nodes: int = 0
    free_boundary_nodes: int = 0


def solve_and_report(inst: ObstacleInstance, **solver_kw) -> PrimalDualReport:
    """Solve, extract the dual field and assemble the primal/dual summary.

    A `MaxIterExceeded` from the solver is re-raised with a report for the
    best iterate attached as ``.result``.
    """
    try:
        res = solve_primal(inst, **solver_kw)
    except MaxIterExceeded as exc:
        exc.result = _report(inst, exc.result)
        raise
    return _report(inst, res)


def _report(inst, res: SolveResult) -> PrimalDualReport:
    sigma = extract_dual(inst, res.u)
    w = divergence_weights(sigma)
    primal = primal_energy(inst, res.u)
    dual = dual_objective(inst, sigma)
    scale = max(w.scale(), 1e-300)
    contact = (res.u.values - inst.psi.values <= 1e-12) & inst.grid.interior_mask
    # contact without measure: degenerate, reported for diagnostics only
    touching = contact & (w.weights <= TOL_DIV * scale)
    return PrimalDualReport(
        u=res.u, sigma=sigma, weights=w, primal=primal, dual=dual,
        gap=primal - dual, iterations=res.iterations, converged=res.converged,
        residuals=res.residuals, contact_nodes=int(np.sum(contact)),
        free_boundary_nodes=int(np.sum(touching)),
    )


@dataclass
class LevelSolve:
    k: int
    u: ScalarField
    sigma: VectorField
    energy: float
    sigma_error: float


@dataclass
class LadderSequence:
    levels: list
    reference_energy: float
    diagnostics: dict


def ladder_solve_sequence(inst: ObstacleInstance, k_list, reference: ScalarField | None = None,
                          tol=1e-9, level_tol_kkt=1e-10, warm_start=True,
                          **solver_kw) -> LadderSequence:
    """Solve the obstacle problem for each ladder level ``F_k``.

    Returns per level the minimiser ``u_k``, ``sigma_k = F_k'(grad u_k)``, the
    energy ``I_k`` and ``max_cells |sigma_k - sigma*|`` against the ``F``
    solution `reference` (solved here if not given).  ``diagnostics`` holds
    the booleans ``energy_nondecreasing`` and ``below_reference``.

    Levels are solved to ``level_tol_kkt``: quadrature round-off in ``F_k'``
    keeps the natural residual near ``1e-11`` relative.  With `warm_start`
    every level starts from `reference`.
    """
    L = inst.lagrangian
    if reference is None:
        reference = solve_primal(inst, **solver_kw).u
    ref_energy = primal_energy(inst, reference)
    sigma_star = extract_dual(inst, reference).values
    levels = build_ladder(L, inst.conjugate, k_list, validate=False)
    level_kw = dict(solver_kw, tol_kkt=level_tol_kkt)
    if warm_start:
        level_kw["u_init"] = reference
    out = []
    for level in levels:
        sub = inst.with_lagrangian(level.lagrangian())
        try:
            res = solve_primal(sub, **level_kw)
        except MaxIterExceeded as exc:
            raise MaxIterExceeded(f"ladder level k = {level.k}: {exc}", exc.result) from exc
        sigma = extract_dual(sub, res.u)
        err = float(np.max(np.linalg.norm(sigma.values - sigma_star, axis=-1)))
        out.append(LevelSolve(level.k, res.u, sigma, primal_energy(sub, res.u), err))
    energies = [lv.energy for lv in out]
    diag = {
        "energy_nondecreasing": all(b >= a - tol for a, b in zip(energies, energies[1:])),
        "below_reference": all(e <= ref_energy + tol for e in energies),
        "sigma_errors": [lv.sigma_error for lv in out],
    }
    return LadderSequence(out, ref_energy, diag)
