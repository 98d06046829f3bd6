import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from obstacle_duality import convex_core as cc
from obstacle_duality import ladder as ld
from obstacle_duality.errors import MissingMinorant, MonotonicityViolation, SearchHorizonExceeded


def _table(L):
    return L, cc.ConjugateTable(L)


def test_kernel_unit_mass():
    mass, _ = quad(ld.bump_kernel, -1, 1, epsabs=1e-13)
    assert mass == pytest.approx(1.0, abs=1e-12)
    assert ld.bump_kernel(np.array([-1.0, 1.0, 2.0])).tolist() == [0.0, 0.0, 0.0]


@pytest.mark.parametrize("k", [2, 3, 4, 7, 10])
def test_rk_power2(k):
    # k t - k^2/4 - t^2 = -(t - k/2)^2 touches at t_k = k/2
    L, C = _table(cc.power(2))
    assert ld.find_rk(L, C, k) == pytest.approx(k / 2, rel=1e-7)


@pytest.mark.parametrize("k", [2, 3, 4, 10, 20])
def test_rk_cosh_quadratic_minorant(k):
    # larger root of t^2 - k t + f*(k) = 0 if real, floored at asinh k
    L, C = _table(cc.cosh())
    fstar = k * math.asinh(k) - math.sqrt(1 + k * k)
    disc = k * k - 4 * fstar
    expected = math.asinh(k)
    if disc >= 0:
        expected = max(expected, 0.5 * (k + math.sqrt(disc)))
    assert ld.find_rk(L, C, k) == pytest.approx(expected, rel=1e-10)


def test_rk_cosh_k2_value():
    L, C = _table(cc.cosh())
    assert ld.find_rk(L, C, 2) == pytest.approx(1.5905904055618, rel=1e-10)


def test_rk_search_horizon():
    L = cc.cosh().with_minorant(lambda t: t, lambda t: np.ones_like(t))
    with pytest.raises(SearchHorizonExceeded):
        ld.find_rk(L, cc.ConjugateTable(L), 3, max_radius=1e4)


def test_level_constants_and_tangent_extension():
    L, C = _table(cc.power(2))
    lv = ld.make_level(L, C, 4)
    assert lv.r_k == pytest.approx(2.0)
    assert lv.m_k == pytest.approx(4.0)
    assert lv.delta_k == pytest.approx(1 / 64)
    assert lv.mu_k == pytest.approx(1 / 3)
    assert ld.h_level(L, C, lv, 3.0) == pytest.approx(8.0)
    assert ld.h_level(L, C, lv, 1.0) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        ld.make_level(L, C, 1)


def test_truncated_bipolar():
    L, C = _table(cc.power(2))
    t = np.array([0.5, 1.0, 3.0])
    np.testing.assert_allclose(ld.truncated_bipolar(L, C, 2.0, t), [0.25, 1.0, 5.0])
    with pytest.raises(MissingMinorant):
        ld.g_level(cc.area(1.0), cc.ConjugateTable(cc.area(1.0)), 0.5, t)


def test_mollify_sandwich():
    L, C = _table(cc.cosh())
    lv = ld.make_level(L, C, 5)
    t = np.linspace(0, 3 * lv.r_k, 500)
    vals = ld.mollify_level(lv, t)
    assert vals.shape == t.shape


@pytest.mark.parametrize("name,minorant", [("power:2", None), ("cosh", "quadratic:0.5")])
def test_ladder_report_passes(name, minorant):
    L, C = _table(cc.from_name(name, minorant))
    levels = ld.build_ladder(L, C, range(2, 21))
    t = np.arange(0, 3 * levels[-1].r_k, 0.01)
    rep = ld.ladder_report(levels, t)
    assert all(ok for ok, _, _ in rep.values()), rep


def test_cosh_with_quadratic_minorant_exceeds_profile():
    # t^2 > cosh t on roughly (1.6, 2.6), so G_k >= theta can climb over F
    L, C = _table(cc.cosh())
    with pytest.raises(MonotonicityViolation) as info:
        ld.build_ladder(L, C, range(2, 21))
    assert info.value.k is not None and 1.5 < info.value.t < 2.7


@given(k=st.integers(2, 30), t=st.floats(0, 20))
def test_level_is_even_and_lipschitz(k, t):
    L, C = _table(cc.power(2))
    lv = ld.make_level(L, C, k)
    assert lv.fk(t) == pytest.approx(lv.fk(-t), abs=1e-12)
    assert abs(float(lv.dfk(t))) <= lv.m_k * (1 + 1e-12)


@given(k=st.integers(2, 20), a=st.floats(0, 10), b=st.floats(0, 10))
def test_level_convex_midpoint(k, a, b):
    L, C = _table(cc.from_name("cosh", "quadratic:0.5"))
    lv = ld.make_level(L, C, k)
    mid = lv.fk(0.5 * (a + b))
    assert mid <= 0.5 * (lv.fk(a) + lv.fk(b)) + 1e-9 * (1 + abs(mid))


def test_level_lagrangian_is_lipschitz():
    L, C = _table(cc.power(2))
    Lk = ld.make_level(L, C, 6).lagrangian()
    assert Lk.growth == "lipschitz" and Lk.cap == pytest.approx(6.0)
    assert cc.ConjugateTable(Lk)(7.0) == math.inf
