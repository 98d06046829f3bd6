import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from obstacle_duality.mesh import (
    DivergenceWeights,
    Grid,
    ScalarField,
    VectorField,
    divergence_weights,
    gradient,
    pairing,
    read_field_csv,
    write_field_csv,
)

GRIDS = [Grid.interval(-1, 1, 7), Grid.rectangle((0, 1), (0, 2), (5, 4))]


@pytest.mark.parametrize("grid", GRIDS)
def test_gradient_exact_for_affine(grid):
    a = np.array([0.7, -1.3])[: grid.dim]
    u = grid.nodal(lambda *x: 2.0 + sum(ai * xi for ai, xi in zip(a, x)))
    g = gradient(u).values
    np.testing.assert_allclose(g, np.broadcast_to(a, g.shape), atol=1e-12)


@pytest.mark.parametrize("grid", GRIDS)
@given(seed=st.integers(0, 2**31))
def test_divergence_is_adjoint(grid, seed):
    rng = np.random.default_rng(seed)
    sigma = VectorField(grid, rng.normal(size=grid.cells + (grid.dim,)))
    phi = rng.normal(size=grid.node_shape)
    phi[grid.boundary_mask] = 0.0
    w = divergence_weights(sigma)
    lhs = float(np.sum(w.weights * phi))
    rhs = float(np.sum(sigma.values * gradient(ScalarField(grid, phi)).values)) * grid.cell_volume
    assert lhs == pytest.approx(rhs, abs=1e-10)
    assert np.all(w.weights[grid.boundary_mask] == 0.0)


@given(arrays(float, (6, 1), elements=st.floats(-5, 5)))
def test_pairing_reduces_to_flux_term(vals):
    grid = Grid.interval(0, 1, 6)
    sigma = VectorField(grid, vals)
    u0 = grid.nodal(lambda x: 1.0 + x)
    assert pairing(sigma, u0, u0) == pytest.approx(float(np.sum(vals)) / 6.0, abs=1e-12)


def test_pairing_is_integration_by_parts():
    grid = Grid.rectangle((0, 1), (0, 1), 8)
    rng = np.random.default_rng(1)
    sigma = VectorField(grid, rng.normal(size=(8, 8, 2)))
    u0 = grid.nodal(lambda x, y: x - 2 * y)
    U = ScalarField(grid, u0.values + np.where(grid.boundary_mask, 0.0, rng.random((9, 9))))
    expected = float(np.sum(sigma.values * gradient(U).values)) * grid.cell_volume
    assert pairing(sigma, U, u0) == pytest.approx(expected, abs=1e-12)


def test_grid_properties():
    g = Grid.rectangle((0, 2), (0, 1), (4, 2))
    assert g.dim == 2 and g.node_shape == (5, 3) and g.num_nodes == 15
    assert g.spacing == (0.5, 0.5) and g.cell_volume == 0.25
    assert g.boundary_mask.sum() == 12
    assert Grid.from_dict(g.to_dict()) == g
    with pytest.raises(ValueError):
        Grid.interval(1, 0, 4)
    with pytest.raises(ValueError):
        Grid(((0, 1),), (3, 3))


@pytest.mark.parametrize("grid", GRIDS)
def test_csv_round_trip(tmp_path, grid):
    rng = np.random.default_rng(0)
    u = ScalarField(grid, rng.normal(size=grid.node_shape))
    s = VectorField(grid, rng.normal(size=grid.cells + (grid.dim,)))
    w = divergence_weights(s)
    for name, fld in (("u", u), ("s", s), ("w", w)):
        write_field_csv(tmp_path / f"{name}.csv", fld)
        back = read_field_csv(tmp_path / f"{name}.csv")
        assert type(back) is type(fld) and back.grid == grid
        got = back.weights if isinstance(back, DivergenceWeights) else back.values
        ref = fld.weights if isinstance(fld, DivergenceWeights) else fld.values
        np.testing.assert_allclose(got, ref, rtol=1e-14)


def test_shape_validation():
    g = Grid.interval(0, 1, 4)
    with pytest.raises(ValueError):
        ScalarField(g, np.zeros(4))
    with pytest.raises(ValueError):
        VectorField(g, np.zeros((5, 1)))
