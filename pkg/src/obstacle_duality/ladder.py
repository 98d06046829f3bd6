"""Increasing ladder of Lipschitz, mollified approximations ``F_k`` of ``F``.

Level ``k`` is assembled from

* the truncated bipolar ``sup_{s <= k} (s t - f*(s))``,
* its maximum with the minorant ``theta``,
* a linear extension beyond ``r_k`` (tangent to ``theta`` at ``r_k``),
* a 1D mollification of the even profile at width ``delta_k``, shifted
  down by ``mu_k = 1/(k-1)``.

The linear piece is the tangent of ``theta``, with slope ``m_k = theta'(r_k)``.
Extending by the chord ``theta(r_k)/r_k`` instead would break convexity at
``r_k`` whenever the profile is steeper than the chord there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .convex_core import ConjugateTable, RadialLagrangian
from .errors import (
    DiscontinuityAtJoin,
    DomainExceeded,
    MissingMinorant,
    MonotonicityViolation,
    QuadratureFailure,
    SearchHorizonExceeded,
)

__all__ = [
    "KERNEL_CONSTANT",
    "bump_kernel",
    "LadderLevel",
    "truncated_bipolar",
    "g_level",
    "find_rk",
    "h_level",
    "mollify_level",
    "make_level",
    "build_ladder",
    "ladder_report",
]

# c with int_{-1}^{1} c exp(1/(x^2 - 1)) dx = 1
KERNEL_CONSTANT = 2.25228362104358
QUADRATURE_NODES = 32


def bump_kernel(x):
    """Unit-mass 1D bump ``c exp(1/(x^2-1))`` supported on ``(-1, 1)``."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    out[inside] = KERNEL_CONSTANT * np.exp(1.0 / (x[inside] ** 2 - 1.0))
    return out


def _quadrature_rule(n=QUADRATURE_NODES):
    x, w = np.polynomial.legendre.leggauss(n)
    w = w * bump_kernel(x)
    # normalise on the nodes: discrete unit mass and zero first moment
    return x, w / w.sum()


_NODES, _WEIGHTS = _quadrature_rule()


def _require_minorant(L: RadialLagrangian):
    if L.minorant is None or L.minorant_deriv is None:
        raise MissingMinorant(f"{L.name}: ladder needs a minorant theta and theta'")


def truncated_bipolar(L: RadialLagrangian, C: ConjugateTable, k: float, t):
    """``sup_{0 <= s <= k} (s t - f*(s))``.

    The supremum sits at ``s = min(f'(t), k)``, giving ``f(t)`` when
    ``f'(t) <= k`` and ``k t - f*(k)`` otherwise.
    """
    if k > L.cap:
        raise DomainExceeded(f"k = {k} exceeds the slope cap {L.cap}")
    t = np.asarray(t, dtype=float)
    fk = C(float(k))
    out = np.where(L.df(t) <= k, L.f(t), k * t - fk)
    return float(out) if out.ndim == 0 else out


def g_level(L: RadialLagrangian, C: ConjugateTable, k: float, t):
    """``max(truncated_bipolar(k, t), theta(t))``."""
    if L.growth != "superlinear":
        raise MissingMinorant("g_level is defined for superlinear integrands only")
    _require_minorant(L)
    out = np.maximum(truncated_bipolar(L, C, k, t), L.theta(t))
    return float(out) if np.ndim(out) == 0 else out


def _golden_max(fun, a, b, iters=200):
    g = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(iters):
        if b - a <= 1e-15 * max(1.0, abs(b)):
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = fun(d)
    return 0.5 * (a + b)


def find_rk(L: RadialLagrangian, C: ConjugateTable, k: float, max_radius=1e8) -> float:
    """Radius beyond which ``max(F_bar_k**, theta) = theta``.

    Returns ``max(t_k, last crossing)`` with ``t_k = (f')^{-1}(k)``.  Past
    ``t_k`` the truncated bipolar is the affine map ``k t - f*(k)``; its gap to
    ``theta`` is concave, so the last crossing is found by a golden-section
    maximisation followed by bisection.
    """
    if L.growth != "superlinear":
        raise MissingMinorant("find_rk is defined for superlinear integrands only")
    _require_minorant(L)
    k = float(k)
    t_k = float(C.invert_derivative(k))
    fstar = float(C(k))

    def gap(t):
        return k * t - fstar - float(L.theta(t))

    # probe until theta is steeper than k and already above the affine part
    probe = max(2.0 * t_k, 1.0)
    while not (float(L.dtheta(probe)) > k and gap(probe) < 0.0):
        probe *= 2.0
        if probe > max_radius:
            raise SearchHorizonExceeded(
                f"minorant never dominates k t - f*(k) below {max_radius:g} (k = {k})"
            )
    t_peak = _golden_max(gap, t_k, probe)
    tol = 1e-13 * (1.0 + abs(k * t_peak) + abs(fstar))
    if gap(t_peak) <= tol and gap(t_k) <= tol:
        return t_k
    lo, hi = (t_peak if gap(t_peak) > tol else t_k), probe
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if gap(mid) > tol:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    return max(t_k, hi)


@dataclass(frozen=True)
class LadderLevel:
    """One level ``F_k`` of the approximation ladder."""

    k: int
    r_k: float
    m_k: float
    delta_k: float
    mu_k: float
    source: RadialLagrangian = field(repr=False)
    conjugate: ConjugateTable = field(repr=False)
    fstar_k: float = field(repr=False, default=0.0)

    # piecewise profile H_k and its derivative on t >= 0
    def h(self, t):
        L, k, r = self.source, self.k, self.r_k
        t = np.asarray(t, dtype=float)
        tb = np.where(L.df(t) <= k, L.f(t), k * t - self.fstar_k)
        g = np.maximum(tb, L.theta(t))
        lin = float(L.theta(r)) + self.m_k * (t - r)
        return np.where(t < r, g, lin)

    def dh(self, t):
        L, k, r = self.source, self.k, self.r_k
        t = np.asarray(t, dtype=float)
        df = L.df(t)
        tb = np.where(df <= k, L.f(t), k * t - self.fstar_k)
        dtb = np.minimum(df, k)
        th = L.theta(t)
        dg = np.where(tb >= th, dtb, L.dtheta(t))
        return np.where(t < r, dg, self.m_k)

    def fk(self, t):
        """Mollified, shifted profile ``(Phi_delta * H_k)(t) - mu_k``."""
        t = np.asarray(t, dtype=float)
        x = np.abs(t[..., None] - self.delta_k * _NODES)
        return self.h(x) @ _WEIGHTS - self.mu_k

    def dfk(self, t):
        t = np.asarray(t, dtype=float)
        y = t[..., None] - self.delta_k * _NODES
        return (np.sign(y) * self.dh(np.abs(y))) @ _WEIGHTS

    def lagrangian(self) -> RadialLagrangian:
        """``F_k`` as a lipschitz integrand with slope cap ``m_k``."""
        return RadialLagrangian(
            profile=self.fk,
            profile_deriv=self.dfk,
            growth="lipschitz",
            cap=self.m_k,
            name=f"{self.source.name}|ladder:{self.k}",
        )


def make_level(L: RadialLagrangian, C: ConjugateTable, k: int,
               join_tol=1e-9) -> LadderLevel:
    """Construct level `k` (``k >= 2``) with all its constants."""
    if int(k) != k or k < 2:
        raise ValueError(f"ladder levels start at k = 2 (mu_k = 1/(k-1)); got {k}")
    k = int(k)
    r = find_rk(L, C, k)
    m = float(L.dtheta(r))
    level = LadderLevel(
        k=k, r_k=r, m_k=m, delta_k=1.0 / (k * k * m), mu_k=1.0 / (k - 1),
        source=L, conjugate=C, fstar_k=float(C(float(k))),
    )
    g_r = float(g_level(L, C, k, r))
    th_r = float(L.theta(r))
    if abs(g_r - th_r) > join_tol * (1.0 + abs(th_r)):
        raise DiscontinuityAtJoin(f"k = {k}: G_k**(r_k) = {g_r} but theta(r_k) = {th_r}")
    return level


def h_level(L: RadialLagrangian, C: ConjugateTable, level: LadderLevel, t):
    """``H_k(t)``: ``G_k**`` below ``r_k``, tangent of ``theta`` above."""
    out = level.h(t)
    return float(out) if np.ndim(out) == 0 else out


def mollify_level(level: LadderLevel, t, tol=1e-12):
    """``F_k(t)``, checked against ``H - mu <= F_k <= H + delta m - mu``."""
    t = np.asarray(t, dtype=float)
    val = level.fk(t)
    h = level.h(np.abs(t))
    slack = tol * (1.0 + np.abs(h))
    low = h - level.mu_k - slack
    high = h + level.delta_k * level.m_k - level.mu_k + slack
    if np.any(val < low) or np.any(val > high):
        bad = np.atleast_1d(t)[np.atleast_1d((val < low) | (val > high))][0]
        raise QuadratureFailure(f"k = {level.k}: sandwich violated at t = {bad:.6g}")
    return float(val) if val.ndim == 0 else val


def ladder_report(levels, t, F=None, atol=1e-9) -> dict:
    """Evaluate the ladder invariants on the sample grid `t`.

    Returns a dict mapping check name to ``(passed, worst_value, location)``;
    ``location`` is ``(k, t)`` of the worst offender.
    """
    t = np.asarray(t, dtype=float)
    L = levels[0].source
    F = L.f(t) if F is None else F
    vals = [lv.fk(t) for lv in levels]
    out = {}

    def record(name, worst, where):
        out[name] = (bool(worst <= atol), float(worst), where)

    def worst_of(arrays):
        best, where = -math.inf, None
        for lv, a in arrays:
            i = int(np.argmax(a))
            if a[i] > best:
                best, where = a[i], (lv.k, float(t[i]))
        return best, where

    record("below_next", *worst_of(
        [(lv, v - vn) for lv, v, vn in zip(levels, vals, vals[1:])]
    ) if len(levels) > 1 else (-math.inf, None))
    record("below_F", *worst_of([(lv, v - F) for lv, v in zip(levels, vals)]))
    record("above_minus_mu", *worst_of([(lv, -lv.mu_k - v) for lv, v in zip(levels, vals)]))
    dt = np.diff(t)
    record("lipschitz", *worst_of(
        [(lv, np.abs(np.diff(v)) / dt - lv.m_k) for lv, v in zip(levels, vals)]
    ))
    sand = []
    for lv, v in zip(levels, vals):
        h = lv.h(t)
        sand.append((lv, np.maximum(h - lv.mu_k - v,
                                    v - (h + lv.delta_k * lv.m_k - lv.mu_k))))
    record("sandwich", *worst_of(sand))
    conv = []
    for lv, v in zip(levels, vals):
        second = v[2:] - 2.0 * v[1:-1] + v[:-2]
        conv.append((lv, -second))
    record("convex", *worst_of(conv))
    gaps = [float(np.max(F - v)) for v in vals]
    inc = max((b - a for a, b in zip(gaps, gaps[1:])), default=-math.inf)
    out["max_gap_nonincreasing"] = (bool(inc <= atol), float(inc), None)
    return out


def build_ladder(L: RadialLagrangian, C: ConjugateTable, k_list, t=None,
                 validate=True, atol=1e-9):
    """Construct the levels in `k_list` and verify monotonicity on `t`.

    Raises `MonotonicityViolation` for ``F_k > F_{k+1}``, ``F_k > F`` or a
    growing ``max(F - F_k)``.  Pass ``validate=False`` to skip the checks.
    """
    if L.growth != "superlinear":
        raise MissingMinorant("the ladder is defined for superlinear integrands only")
    ks = sorted(int(k) for k in k_list)
    levels = [make_level(L, C, k) for k in ks]
    if validate:
        if t is None:
            t = np.arange(0.0, 3.0 * levels[-1].r_k, 0.01)
        rep = ladder_report(levels, t, atol=atol)
        for name in ("below_next", "below_F", "max_gap_nonincreasing"):
            ok, worst, where = rep[name]
            if not ok:
                k, tt = where if where else (None, None)
                raise MonotonicityViolation(
                    f"{name} fails by {worst:.3g} at k = {k}, t = {tt}", k=k, t=tt
                )
    return levels
