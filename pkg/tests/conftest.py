import numpy as np
import pytest
from hypothesis import settings

from obstacle_duality import convex_core as cc
from obstacle_duality.mesh import Grid
from obstacle_duality.solver import ObstacleInstance

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

ACCEPTANCE = {}


def membrane_instance(cells=64, lagrangian=None, height=0.5):
    grid = Grid.interval(-1.0, 1.0, cells)
    L = cc.power(2) if lagrangian is None else lagrangian
    return ObstacleInstance(grid, L, grid.nodal(lambda x: height - x**2),
                            grid.nodal(lambda x: 0.0 * x))


@pytest.fixture
def membrane():
    return membrane_instance


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
