import math

import numpy as np
import pytest

from obstacle_duality import convex_core as cc
from obstacle_duality import verify as vf
from obstacle_duality.errors import HeightOutOfRange, InfeasibleTrial, TMaxTooSmall
from obstacle_duality.mesh import ScalarField, VectorField, divergence_weights
from obstacle_duality.solver import solve_and_report

from conftest import membrane_instance


@pytest.fixture(scope="module")
def solved():
    inst = membrane_instance(128)
    return inst, solve_and_report(inst)


def test_all_certificates_pass(solved):
    inst, rep = solved
    certs = vf.run_certificates(inst, rep.u, rep.sigma)
    assert set(certs) == {"feasibility", "div_nonpositive", "integrability",
                          "extremality_identity", "complementarity",
                          "variational_inequality", "duality_gap"}
    assert all(c.passed for c in certs.values()), certs


def test_lowered_node_fails_feasibility(solved):
    inst, rep = solved
    v = rep.u.values.copy()
    v[64] -= 0.05
    u = ScalarField(inst.grid, v)
    assert not vf.check_feasibility(inst, u).passed
    comp = vf.check_complementarity(inst, u, rep.weights)
    assert not comp.passed and "InfeasiblePair" in comp.detail


def test_negated_sigma_fails_sign_check(solved):
    inst, rep = solved
    neg = -rep.sigma
    assert not vf.check_div_nonpositive(divergence_weights(neg)).passed
    assert not vf.check_duality_gap(inst, rep.u, neg).passed


def test_perturbed_u_fails_complementarity(solved):
    inst, rep = solved
    u = ScalarField(inst.grid, rep.u.values + 0.05 * inst.grid.interior_mask)
    assert not vf.check_complementarity(inst, u, rep.weights).passed
    assert not vf.check_extremality_identity(inst, u, rep.sigma).passed


def test_infeasible_trial_is_reported(solved):
    inst, rep = solved
    trials = vf.default_trials(inst, rep.u)
    assert len(trials) == 12
    bad = ScalarField(inst.grid, inst.psi.values - 0.1)
    with pytest.raises(InfeasibleTrial) as info:
        vf.check_variational_inequality(inst, rep.u, rep.sigma, trials[:3] + [bad])
    assert info.value.index == 3


def test_zero_flux_breaks_extremality(solved):
    inst, rep = solved
    zero = VectorField(inst.grid, np.zeros_like(rep.sigma.values))
    assert not vf.check_extremality_identity(inst, rep.u, zero).passed


def test_oracle_conjugate():
    assert vf.oracle_conjugate(lambda t: t * t, 2.0, t_max=5.0) == pytest.approx(1.0)
    with pytest.raises(TMaxTooSmall):
        vf.oracle_conjugate(lambda t: t * t, 20.0, t_max=5.0)


def test_analytic_membrane():
    sol = vf.analytic_membrane_1d(0.5)
    assert sol.a == pytest.approx(1 - math.sqrt(0.5))
    a = sol.a
    # continuous with matching slope at the contact edge
    eps = 1e-7
    assert float(sol(a - eps)) == pytest.approx(float(sol(a + eps)), abs=1e-6)
    slope = (float(sol(a + eps)) - float(sol(a + 2 * eps))) / eps
    assert slope == pytest.approx(2 * a, rel=1e-4)
    assert float(sol(1.0)) == pytest.approx(0.0)
    for h in (0.0, 1.0, -0.2):
        with pytest.raises(HeightOutOfRange):
            vf.analytic_membrane_1d(h)


def test_brute_force_oracle_agrees_with_analytic():
    u = vf.brute_force_membrane_1d(cc.cosh(), cells=512)
    exact = vf.analytic_membrane_1d(0.5)(u.grid.coords[0])
    assert np.max(np.abs(u.values - exact)) < 1e-6


def test_integrability_reports_cap_cells():
    inst = membrane_instance(32, cc.area(1.0), height=0.2)
    rep = solve_and_report(inst)
    c = vf.check_integrability(inst, rep.u, rep.sigma)
    assert c.passed and "slope cap" in c.detail
