"""Certificates for computed primal/dual pairs, plus independent oracles.

Each ``check_*`` returns a `CertificateResult`; ``passed`` is exactly
``residual <= tolerance``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import HeightOutOfRange, InfeasibleTrial, TMaxTooSmall
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
from .solver import TOL_DIV, TOL_GAP, ObstacleInstance, dual_objective, primal_energy

__all__ = [
    "CertificateResult",
    "check_feasibility",
    "check_div_nonpositive",
    "check_integrability",
    "check_extremality_identity",
    "check_complementarity",
    "check_variational_inequality",
    "check_duality_gap",
    "default_trials",
    "run_certificates",
    "oracle_conjugate",
    "MembraneSolution",
    "analytic_membrane_1d",
    "brute_force_membrane_1d",
]

TOL_VI = 1e-9
FEAS_TOL = 1e-12


@dataclass(frozen=True)
class CertificateResult:
    name: str
    passed: bool
    residual: float
    tolerance: float
    detail: str = ""

    @classmethod
    def make(cls, name, residual, tolerance, detail=""):
        residual = float(residual)
        return cls(name, bool(residual <= tolerance), residual, float(tolerance), detail)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "residual": self.residual,
                "tolerance": self.tolerance, "detail": self.detail}


def _node_label(grid, flat_index):
    idx = np.unravel_index(int(flat_index), grid.node_shape)
    xyz = tuple(float(c[idx]) for c in grid.coords)
    return f"node {tuple(int(i) for i in idx)} at {xyz}"


def check_feasibility(inst: ObstacleInstance, u: ScalarField, tol=FEAS_TOL) -> CertificateResult:
    """``u >= psi`` everywhere and ``u = u0`` on boundary nodes."""
    below = inst.psi.values - u.values
    bnd = inst.grid.boundary_mask
    off = np.where(bnd, np.abs(u.values - inst.u0.values), 0.0)
    viol = np.maximum(below, off)
    i = int(np.argmax(viol))
    return CertificateResult.make("feasibility", max(0.0, viol.flat[i]), tol,
                                  _node_label(inst.grid, i))


def check_div_nonpositive(weights: DivergenceWeights, tol_rel=TOL_DIV) -> CertificateResult:
    """All interior weights of ``-div sigma`` are ``>= -tol_rel * max|w|``."""
    grid = weights.grid
    masked = np.where(grid.interior_mask, weights.weights, np.inf)
    i = int(np.argmin(masked))
    residual = max(0.0, -float(masked.flat[i])) if np.isfinite(masked.flat[i]) else 0.0
    return CertificateResult.make("div_nonpositive", residual,
                                  tol_rel * max(weights.scale(), 1e-300),
                                  _node_label(grid, i))


def check_integrability(inst: ObstacleInstance, u: ScalarField, sigma: VectorField) -> CertificateResult:
    """``F*(sigma)`` and ``<sigma, grad u>`` are finite with finite integrals.

    For lipschitz integrands cells with ``|sigma|`` on the slope cap are
    listed in the detail without failing the check.
    """
    vol = inst.grid.cell_volume
    s = np.linalg.norm(sigma.values, axis=-1)
    fstar = inst.conjugate(s)
    inner = np.sum(sigma.values * grad_array(inst.grid, u.values), axis=-1)
    int_fstar = float(np.sum(np.abs(fstar))) * vol
    int_inner = float(np.sum(np.abs(inner))) * vol
    finite = np.isfinite(int_fstar) and np.isfinite(int_inner)
    detail = f"int|F*(sigma)| = {int_fstar:.15g}; int|<sigma,Du>| = {int_inner:.15g}"
    cap = inst.lagrangian.cap
    if math.isfinite(cap):
        on_cap = int(np.sum(s >= cap * (1 - 1e-12)))
        detail += f"; cells at slope cap = {on_cap}"
    return CertificateResult.make("integrability", 0.0 if finite else math.inf, 0.0, detail)


def check_extremality_identity(inst: ObstacleInstance, u: ScalarField, sigma: VectorField,
                               tol=TOL_GAP) -> CertificateResult:
    """``int F(Du) + int F*(sigma) = [[sigma, psi]]_{u0}``, relative to ``max(1, primal)``."""
    primal = primal_energy(inst, u)
    fstar = float(np.sum(inst.conjugate(np.linalg.norm(sigma.values, axis=-1))))
    fstar *= inst.grid.cell_volume
    lhs = primal + fstar
    rhs = pairing(sigma, inst.psi, inst.u0)
    residual = abs(lhs - rhs) / max(1.0, abs(primal)) if math.isfinite(lhs) else math.inf
    return CertificateResult.make(
        "extremality_identity", residual, tol,
        f"int F = {primal:.15g}; int F* = {fstar:.15g}; pairing = {rhs:.15g}",
    )


def check_complementarity(inst: ObstacleInstance, u: ScalarField, weights: DivergenceWeights,
                          tol=TOL_GAP) -> CertificateResult:
    """``|sum_i w_i (u_i - psi_i)| / max(1, primal)``; requires ``u >= psi``."""
    feas = check_feasibility(inst, u)
    if not feas.passed:
        return CertificateResult("complementarity", False, math.inf, tol,
                                 f"InfeasiblePair: {feas.detail}")
    primal = primal_energy(inst, u)
    terms = weights.weights * (u.values - inst.psi.values)
    residual = abs(float(np.sum(terms))) / max(1.0, abs(primal))
    i = int(np.argmax(np.abs(terms)))
    return CertificateResult.make("complementarity", residual, tol,
                                  f"largest term at {_node_label(inst.grid, i)}")


def check_variational_inequality(inst: ObstacleInstance, u: ScalarField, sigma: VectorField,
                                 trial_directions, tol=TOL_VI) -> CertificateResult:
    """``sum_cells <sigma, grad(eta - u)> vol >= -tol * scale`` for every trial.

    ``scale`` is the nodal flux scale ``max|sigma| vol / h``.  Raises
    `InfeasibleTrial` if some ``eta`` is not admissible.
    """
    grid = inst.grid
    vol = grid.cell_volume
    worst, where = math.inf, None
    for i, eta in enumerate(trial_directions):
        if not check_feasibility(inst, eta).passed:
            raise InfeasibleTrial(f"trial {i} is not admissible", index=i)
        val = float(np.sum(sigma.values * grad_array(grid, eta.values - u.values))) * vol
        if val < worst:
            worst, where = val, i
    scale = float(np.max(np.abs(sigma.values), initial=0.0)) * vol / min(grid.spacing)
    residual = max(0.0, -worst) if where is not None else 0.0
    return CertificateResult.make("variational_inequality", residual,
                                  tol * max(scale, 1e-300), f"worst trial {where}")


def check_duality_gap(inst: ObstacleInstance, u: ScalarField, sigma: VectorField,
                      weights: DivergenceWeights | None = None, tol_rel=TOL_GAP) -> CertificateResult:
    """``primal - dual <= tol_rel * primal``; the sign of ``-div sigma`` is checked first."""
    weights = divergence_weights(sigma) if weights is None else weights
    primal = primal_energy(inst, u)
    dual = dual_objective(inst, sigma)
    gap = primal - dual
    detail = f"primal = {primal:.15g}; dual = {dual:.15g}"
    if not check_div_nonpositive(weights).passed:
        detail += "; -div sigma has negative weights, weak duality not asserted"
        return CertificateResult("duality_gap", False, abs(gap), tol_rel * abs(primal), detail)
    return CertificateResult.make("duality_gap", abs(gap), tol_rel * max(abs(primal), 1e-300),
                                  detail)


def default_trials(inst: ObstacleInstance, u: ScalarField, seed=0, count=12) -> list:
    """Catalog of admissible comparison fields.

    ``max(u0, psi)``, convex combinations of it with ``u``, ``u`` plus
    nonnegative bumps of several widths, and ``u`` plus random nonnegative
    interior perturbations; `count` fields in total.
    """
    grid = inst.grid
    rng = np.random.default_rng(seed)
    bnd = grid.boundary_mask
    base = inst.u0.values.copy()
    base = np.maximum(base, inst.psi.values)
    base[bnd] = inst.u0.values[bnd]
    trials = [base]
    for lam in (0.25, 0.5, 0.75):
        trials.append(lam * base + (1 - lam) * u.values)
    centers = [[lo + f * (hi - lo) for (lo, hi) in grid.extents] for f in (0.3, 0.5, 0.7)]
    widths = [0.1, 0.25, 0.5]
    for c, wd in zip(centers, widths):
        r2 = sum((x - ci) ** 2 for x, ci in zip(grid.coords, c))
        diam = max(hi - lo for lo, hi in grid.extents)
        bump = np.maximum(0.0, 1.0 - r2 / (wd * diam) ** 2) ** 2
        bump[bnd] = 0.0
        trials.append(u.values + 0.05 * bump)
    while len(trials) < count:
        pert = rng.random(grid.node_shape) * 0.05
        pert[bnd] = 0.0
        trials.append(u.values + pert)
    return [ScalarField(grid, t) for t in trials[:count]]


def run_certificates(inst: ObstacleInstance, u: ScalarField, sigma: VectorField,
                     trials=None, seed=0) -> dict:
    """Every certificate on ``(u, sigma)``; returns ``{name: CertificateResult}``."""
    weights = divergence_weights(sigma)
    if trials is None:
        trials = default_trials(inst, u, seed=seed)
    out = [
        check_feasibility(inst, u),
        check_div_nonpositive(weights),
        check_integrability(inst, u, sigma),
        check_extremality_identity(inst, u, sigma),
        check_complementarity(inst, u, weights),
    ]
    try:
        out.append(check_variational_inequality(inst, u, sigma, trials))
    except InfeasibleTrial as exc:
        out.append(CertificateResult("variational_inequality", False, math.inf, TOL_VI,
                                     f"InfeasibleTrial: {exc}"))
    out.append(check_duality_gap(inst, u, sigma, weights))
    return {c.name: c for c in out}


# -- oracles -------------------------------------------------------------------


def oracle_conjugate(profile, s: float, t_max=100.0, step=1e-4, chunk=1_000_000) -> float:
    """Brute-force ``max_t (s t - f(t))`` over ``t = 0, step, ..., t_max``.

    Raises `TMaxTooSmall` if the maximiser is the last grid point.
    """
    n = int(round(t_max / step)) + 1
    best, arg = -math.inf, -1
    for start in range(0, n, chunk):
        t = np.arange(start, min(n, start + chunk)) * step
        v = s * t - np.asarray(profile(t), dtype=float)
        i = int(np.argmax(v))
        if v[i] > best:
            best, arg = float(v[i]), start + i
    if arg == n - 1:
        raise TMaxTooSmall(f"maximiser at t_max = {t_max} for s = {s}")
    return best


@dataclass(frozen=True)
class MembraneSolution:
    """``u = psi`` on ``[-a, a]``, tangent lines to ``(+-1, 0)`` outside."""

    height: float
    a: float

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        h, a = self.height, self.a
        inner = h - x * x
        outer = (h - a * a) * (1.0 - np.abs(x)) / (1.0 - a)
        return np.where(np.abs(x) <= a, inner, outer)


def analytic_membrane_1d(obstacle_height: float) -> MembraneSolution:
    """Exact solution on ``[-1, 1]`` for ``psi = height - x**2``, ``u0 = 0``.

    Tangency of the line through ``(1, 0)`` gives ``a**2 - 2a + height = 0``.
    """
    h = float(obstacle_height)
    if not 0.0 < h < 1.0:
        raise HeightOutOfRange(f"height must lie in (0, 1), got {h}")
    return MembraneSolution(h, 1.0 - math.sqrt(1.0 - h))


def _lbfgsb(inst: ObstacleInstance, v0: np.ndarray):
    grid, L = inst.grid, inst.lagrangian
    inn = grid.interior_mask
    lower = inst.psi.values[inn]

    def fun(x):
        v = v0.copy()
        v[inn] = x
        g = grad_array(grid, v)
        r = np.linalg.norm(g, axis=-1)
        scale = np.divide(L.df(r), r, out=np.zeros_like(r), where=r > 0)
        energy = float(np.sum(L.f(r))) * grid.cell_volume
        return energy, adjoint_array(grid, scale[..., None] * g)[inn]

    res = minimize(fun, np.maximum(v0[inn], lower), jac=True, method="L-BFGS-B",
                   bounds=[(lo, None) for lo in lower],
                   options={"maxiter": 100_000, "maxfun": 200_000, "ftol": 1e-15,
                            "gtol": 1e-13, "maxcor": 30})
    v = v0.copy()
    v[inn] = res.x
    return v


def brute_force_membrane_1d(lagrangian, cells=4096, height=0.5, coarse=64) -> ScalarField:
    """Reference solve of the membrane instance with scipy's L-BFGS-B.

    Independent of `solve_primal`: bound-constrained quasi-Newton on the
    interior nodes, started on `coarse` cells and interpolated upward through
    grid doublings to avoid overflow in fast-growing integrands.
    """
    v, prev = None, None
    n = coarse
    while True:
        grid = Grid.interval(-1.0, 1.0, n)
        x = grid.coords[0]
        inst = ObstacleInstance(grid, lagrangian, ScalarField(grid, height - x * x),
                                ScalarField(grid, np.zeros_like(x)))
        v0 = inst.initial_guess().values if v is None else np.interp(x, prev, v)
        with np.errstate(over="ignore"):
            v = _lbfgsb(inst, v0)
        if n >= cells:
            return ScalarField(grid, v)
        prev, n = x, min(2 * n, cells)
