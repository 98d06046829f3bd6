import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from obstacle_duality import convex_core as cc
from obstacle_duality import solver as sv
from obstacle_duality.errors import InfeasibleInstance, MaxIterExceeded, SMinusViolation
from obstacle_duality.mesh import Grid, ScalarField, VectorField
from obstacle_duality.verify import analytic_membrane_1d

from conftest import membrane_instance


@pytest.fixture(scope="module")
def solved():
    inst = membrane_instance(64)
    return inst, sv.solve_and_report(inst)


def test_membrane_matches_analytic(solved):
    inst, rep = solved
    exact = analytic_membrane_1d(0.5)(inst.grid.coords[0])
    assert rep.converged
    assert np.max(np.abs(rep.u.values - exact)) < 5e-4
    assert abs(rep.gap) <= 1e-9 * rep.primal
    assert rep.contact_nodes > 0


def test_cosh_has_same_minimiser_in_1d(solved):
    # in 1D the constrained minimiser is the same for every strictly convex F
    inst, rep = solved
    rc = sv.solve_and_report(inst.with_lagrangian(cc.cosh()))
    np.testing.assert_allclose(rc.u.values, rep.u.values, atol=1e-8)


def test_infeasible_instance():
    grid = Grid.interval(-1, 1, 8)
    with pytest.raises(InfeasibleInstance):
        sv.ObstacleInstance(grid, cc.power(2), grid.nodal(lambda x: 1 - 0 * x),
                            grid.nodal(lambda x: 0 * x))


def test_max_iter_carries_best_iterate():
    inst = membrane_instance(64)
    with pytest.raises(MaxIterExceeded) as info:
        sv.solve_and_report(inst, max_iter=3)
    rep = info.value.result
    assert isinstance(rep, sv.PrimalDualReport) and not rep.converged
    assert np.all(rep.u.values >= inst.psi.values)


def test_duality_gap_requires_nonpositive_divergence(solved):
    inst, rep = solved
    assert sv.duality_gap(inst, rep.u, rep.sigma) == pytest.approx(rep.gap)
    with pytest.raises(SMinusViolation):
        sv.duality_gap(inst, rep.u, -rep.sigma)


def test_dual_objective_off_domain():
    inst = membrane_instance(16, cc.area(1.0))
    sigma = VectorField(inst.grid, np.full((16, 1), 2.0))
    assert sv.dual_objective(inst, sigma) == -math.inf


@given(seed=st.integers(0, 2**31), scale=st.floats(1e-3, 0.3))
def test_minimiser_beats_feasible_competitors(solved, seed, scale):
    inst, rep = solved
    rng = np.random.default_rng(seed)
    bump = rng.random(inst.grid.node_shape) * scale
    bump[inst.grid.boundary_mask] = 0.0
    v = ScalarField(inst.grid, rep.u.values + bump)
    assert sv.primal_energy(inst, v) >= rep.primal - 1e-12


@given(seed=st.integers(0, 2**31))
def test_weak_duality_on_admissible_fields(solved, seed):
    # sigma* scaled by any c in [0, 1] keeps -div sigma >= 0
    inst, rep = solved
    c = np.random.default_rng(seed).random()
    sigma = VectorField(inst.grid, c * rep.sigma.values)
    assert sv.duality_gap(inst, rep.u, sigma) >= -1e-10


def test_ladder_sequence_energies_increase():
    inst = membrane_instance(64)
    seq = sv.ladder_solve_sequence(inst, [2, 4, 8])
    energies = [lv.energy for lv in seq.levels]
    assert seq.diagnostics["energy_nondecreasing"]
    assert seq.diagnostics["below_reference"]
    assert energies == sorted(energies)


def test_two_dimensional_smoke():
    grid = Grid.rectangle((0, 1), (0, 1), 16)
    inst = sv.ObstacleInstance(
        grid, cc.power(2), grid.nodal(lambda x, y: 0.25 - (x - .5) ** 2 - (y - .5) ** 2),
        grid.nodal(lambda x, y: 0 * x),
    )
    rep = sv.solve_and_report(inst)
    assert rep.converged and abs(rep.gap) <= 1e-8 * rep.primal
    assert rep.weights.min_interior() >= -1e-9 * rep.weights.scale()


def test_affine_boundary_without_contact():
    grid = Grid.rectangle((0, 1), (0, 1), 8)
    u0 = grid.nodal(lambda x, y: 0.3 * x - 0.2 * y)
    inst = sv.ObstacleInstance(grid, cc.power(2), grid.nodal(lambda x, y: -1 + 0 * x), u0)
    rep = sv.solve_and_report(inst)
    np.testing.assert_allclose(rep.u.values, u0.values, atol=1e-10)
