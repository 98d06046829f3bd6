"""Radial convex integrands, their Legendre conjugates and Fenchel gaps.

Every integrand is radial, ``F(xi) = f(|xi|)``, so the conjugate reduces to
the one dimensional transform ``F*(z) = f*(|z|)``.  The transform is computed
by inverting the monotone derivative ``f'`` with bisection.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainExceeded, MissingMinorant, NonConvexProfile

__all__ = [
    "RadialLagrangian",
    "ConjugateTable",
    "power",
    "cosh",
    "xlogx_shifted",
    "area",
    "custom",
    "from_name",
    "minorant_from_name",
    "eval_lagrangian",
    "eval_gradient",
    "conjugate_eval",
    "fenchel_gap",
    "bipolar_check",
]

Profile = Callable[[np.ndarray], np.ndarray]

_INV_E = math.exp(-1.0)


@dataclass(frozen=True)
class RadialLagrangian:
    """Convex integrand ``F(xi) = f(|xi|)``.

    Parameters
    ----------
    profile, profile_deriv : callable
        Vectorised ``f`` and ``f'`` on ``[0, inf)``.
    growth : {"superlinear", "lipschitz"}
        Growth regime at infinity.
    cap : float
        Slope bound ``sup f'`` for lipschitz growth, ``inf`` otherwise.
    minorant, minorant_deriv : callable, optional
        Strictly convex superlinear lower structure ``theta`` and ``theta'``.
    """

    profile: Profile
    profile_deriv: Profile
    growth: str = "superlinear"
    cap: float = math.inf
    minorant: Profile | None = None
    minorant_deriv: Profile | None = None
    name: str = "custom"

    def __post_init__(self):
        if self.growth not in ("superlinear", "lipschitz"):
            raise ValueError(f"unknown growth mode {self.growth!r}")
        if self.growth == "lipschitz" and not math.isfinite(self.cap):
            raise ValueError("lipschitz growth needs a finite slope cap")
        if self.growth == "superlinear" and math.isfinite(self.cap):
            raise ValueError("superlinear growth has no slope cap")

    def f(self, t):
        return np.asarray(self.profile(np.asarray(t, dtype=float)), dtype=float)

    def df(self, t):
        return np.asarray(self.profile_deriv(np.asarray(t, dtype=float)), dtype=float)

    def theta(self, t):
        if self.minorant is None:
            raise MissingMinorant(f"{self.name} has no minorant attached")
        return np.asarray(self.minorant(np.asarray(t, dtype=float)), dtype=float)

    def dtheta(self, t):
        if self.minorant_deriv is None:
            raise MissingMinorant(f"{self.name} has no minorant derivative attached")
        return np.asarray(self.minorant_deriv(np.asarray(t, dtype=float)), dtype=float)

    def with_minorant(self, theta: Profile, dtheta: Profile) -> "RadialLagrangian":
        return RadialLagrangian(
            self.profile, self.profile_deriv, self.growth, self.cap,
            theta, dtheta, self.name,
        )

    def validate(self, t_max=10.0, num=2001, nonnegative=True, atol=1e-10):
        """Check the structural invariants on a sample grid.

        Raises `NonConvexProfile` when ``f'`` decreases, ``f'(0) != 0``, ``f``
        is negative (if `nonnegative`) or the lipschitz cap is exceeded.
        """
        t = np.linspace(0.0, t_max, num)
        f = self.f(t)
        d = self.df(t)
        scale = 1.0 + np.max(np.abs(d))
        if abs(d[0]) > atol * scale:
            raise NonConvexProfile(f"{self.name}: f'(0) = {d[0]:.3g}, expected 0")
        if np.any(np.diff(d) < -atol * scale):
            i = int(np.argmin(np.diff(d)))
            raise NonConvexProfile(f"{self.name}: f' decreases near t = {t[i]:.6g}")
        if nonnegative and np.any(f < -atol * (1.0 + np.max(np.abs(f)))):
            raise NonConvexProfile(f"{self.name}: profile takes negative values")
        if self.growth == "lipschitz" and np.any(d > self.cap * (1 + 1e-12)):
            raise NonConvexProfile(f"{self.name}: f' exceeds the cap {self.cap}")
        return self

    def check_hypotheses(self, t_max=50.0, num=5001, bound=10.0):
        """Sampled surrogates of the structural hypotheses.

        Returns a dict of booleans:

        ``superlinear``
            ``f(t)/t`` is increasing on the tail and exceeds `bound`.
        ``minorant_convex_gap``
            ``f - theta`` has nondecreasing difference quotients (H1).
        ``minorant_half_bound``
            ``f >= theta/2 + c`` on the outer half of the sample (H2).
        """
        t = np.linspace(0.0, t_max, num)
        out = {}
        if self.growth == "superlinear":
            tt = np.geomspace(1.0, 1e12, 200)
            with np.errstate(over="ignore"):
                ratio = self.f(tt) / tt
            tail = ratio[len(ratio) // 2:]
            tail = tail[np.isfinite(tail)]
            out["superlinear"] = bool(
                np.all(np.diff(tail) > 0) and np.max(ratio) > bound
            )
        else:
            out["superlinear"] = False
        if self.minorant is not None:
            g = self.f(t) - self.theta(t)
            q = np.diff(g) / np.diff(t)
            out["minorant_convex_gap"] = bool(
                np.all(np.diff(q) >= -1e-9 * (1 + np.abs(q[1:])))
            )
            half = t >= t_max / 2
            c = np.min(self.f(t) - 0.5 * self.theta(t))
            out["minorant_half_bound"] = bool(
                np.all(self.f(t[half]) >= 0.5 * self.theta(t[half]) + c)
            )
        return out


# -- catalog ---------------------------------------------------------------


def _power_theta(alpha):
    return (lambda t: t**alpha), (lambda t: alpha * t ** (alpha - 1.0))


def _quadratic_theta(c=1.0):
    return (lambda t: c * t * t), (lambda t: 2.0 * c * t)


def _xlogx_theta():
    return (lambda t: (1.0 + t) * np.log1p(t) - t), (lambda t: np.log1p(t))


def power(alpha: float) -> RadialLagrangian:
    """``F(xi) = |xi|**alpha`` with ``alpha > 1``; minorant ``t**alpha``."""
    alpha = float(alpha)
    if not alpha > 1.0:
        raise ValueError(f"power exponent must exceed 1, got {alpha}")
    theta, dtheta = _power_theta(alpha)
    return RadialLagrangian(
        profile=lambda t: t**alpha,
        profile_deriv=lambda t: alpha * t ** (alpha - 1.0),
        minorant=theta,
        minorant_deriv=dtheta,
        name=f"power:{alpha:g}",
    )


def cosh() -> RadialLagrangian:
    """``F(xi) = cosh|xi|``; minorant ``t**2``."""
    theta, dtheta = _quadratic_theta()
    return RadialLagrangian(
        profile=np.cosh, profile_deriv=np.sinh,
        minorant=theta, minorant_deriv=dtheta, name="cosh",
    )


def xlogx_shifted() -> RadialLagrangian:
    """``(t + 1/e) log(t + 1/e) + 1/e``; minorant ``(1+t) log(1+t) - t``."""
    theta, dtheta = _xlogx_theta()
    return RadialLagrangian(
        profile=lambda t: (t + _INV_E) * np.log(t + _INV_E) + _INV_E,
        profile_deriv=lambda t: np.log(t + _INV_E) + 1.0,
        minorant=theta,
        minorant_deriv=dtheta,
        name="xlogx_shifted",
    )


def area(cap: float = 1.0) -> RadialLagrangian:
    """Lipschitz integrand ``cap * (sqrt(1 + t**2) - 1)``, slopes below `cap`."""
    cap = float(cap)
    if not cap > 0:
        raise ValueError("cap must be positive")
    return RadialLagrangian(
        profile=lambda t: cap * (np.sqrt(1.0 + t * t) - 1.0),
        profile_deriv=lambda t: cap * t / np.sqrt(1.0 + t * t),
        growth="lipschitz",
        cap=cap,
        name=f"area:{cap:g}",
    )


def custom(path) -> RadialLagrangian:
    """Monotone cubic interpolant of a ``t,f(t)`` CSV table.

    Beyond the last node the derivative keeps growing linearly with the last
    secant curvature, so the extension stays convex and superlinear.  The
    default minorant is ``c t**2`` with the largest ``c`` that keeps
    ``f - c t**2`` convex on the table.
    """
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                rows.append((float(row[0]), float(row[1])))
            except ValueError:
                continue  # header line
    tab = np.array(sorted(rows))
    if len(tab) < 4 or tab[0, 0] != 0.0:
        raise ValueError("custom table needs >= 4 rows starting at t = 0")
    spline = PchipInterpolator(tab[:, 0], tab[:, 1], extrapolate=False)
    dspline = spline.derivative()
    t_end = tab[-1, 0]
    f_end = float(spline(t_end))
    d_end = float(dspline(t_end))
    dd = np.diff(tab[:, 1]) / np.diff(tab[:, 0])
    kappa = max((dd[-1] - dd[-2]) / (tab[-1, 0] - tab[-2, 0]), 1e-12)

    def f(t):
        t = np.asarray(t, dtype=float)
        s = np.maximum(t - t_end, 0.0)
        inside = spline(np.minimum(t, t_end))
        return np.where(t <= t_end, inside, f_end + d_end * s + 0.5 * kappa * s * s)

    def df(t):
        t = np.asarray(t, dtype=float)
        s = np.maximum(t - t_end, 0.0)
        inside = dspline(np.minimum(t, t_end))
        return np.where(t <= t_end, inside, d_end + kappa * s)

    tt = np.linspace(0, t_end, 2001)
    curv = np.diff(df(tt)) / np.diff(tt)
    c = max(0.5 * float(np.min(curv)), 0.0)
    theta, dtheta = _quadratic_theta(c) if c > 0 else (None, None)
    lag = RadialLagrangian(f, df, minorant=theta, minorant_deriv=dtheta,
                           name=f"custom:{path}")
    return lag.validate(t_max=t_end)


def minorant_from_name(name: str):
    """Parse ``power:a``, ``quadratic:c`` or ``xlogx`` into ``(theta, theta')``."""
    kind, _, arg = name.partition(":")
    if kind == "power":
        return _power_theta(float(arg))
    if kind == "quadratic":
        return _quadratic_theta(float(arg) if arg else 1.0)
    if kind == "xlogx":
        return _xlogx_theta()
    raise ValueError(f"unknown minorant {name!r}")


def from_name(name: str, minorant: str | None = None) -> RadialLagrangian:
    """Build a catalog integrand from its config name.

    Accepted: ``power:{alpha}``, ``cosh``, ``xlogx_shifted``, ``area:{cap}``,
    ``custom:{csv path}``.
    """
    kind, _, arg = name.strip().partition(":")
    if kind == "power":
        lag = power(float(arg))
    elif kind == "cosh":
        lag = cosh()
    elif kind == "xlogx_shifted":
        lag = xlogx_shifted()
    elif kind == "area":
        lag = area(float(arg) if arg else 1.0)
    elif kind == "custom":
        lag = custom(arg)
    else:
        raise ValueError(f"unknown lagrangian {name!r}")
    if minorant and minorant != "default":
        lag = lag.with_minorant(*minorant_from_name(minorant))
    return lag


# -- pointwise evaluation ----------------------------------------------------


def eval_lagrangian(L: RadialLagrangian, xi) -> np.ndarray | float:
    """``F(xi) = f(|xi|)``; `xi` has shape ``(..., n)``."""
    r = np.linalg.norm(np.asarray(xi, dtype=float), axis=-1)
    out = L.f(r)
    return float(out) if out.ndim == 0 else out


def eval_gradient(L: RadialLagrangian, xi) -> np.ndarray:
    """``F'(xi) = f'(|xi|) xi / |xi|``, and zero at the origin."""
    xi = np.asarray(xi, dtype=float)
    r = np.linalg.norm(xi, axis=-1, keepdims=True)
    scale = np.divide(L.df(r), r, out=np.zeros_like(r), where=r > 0)
    return scale * xi


# -- conjugation -------------------------------------------------------------


@dataclass(frozen=True)
class ConjugateTable:
    """Numerical polar ``f*`` of a radial integrand.

    ``f*(s) = s t(s) - f(t(s))`` where ``f'(t(s)) = s`` is solved by bisection.
    Slopes above `slope_domain_cap` map to ``+inf``.
    """

    source: RadialLagrangian
    inversion_tolerance: float = 1e-14
    max_bisect: int = 200

    @property
    def slope_domain_cap(self) -> float:
        return self.source.cap

    def invert_derivative(self, s) -> np.ndarray:
        """Vectorised solution of ``f'(t) = s`` for ``0 <= s < cap``."""
        s = np.asarray(s, dtype=float)
        shape = s.shape
        s = s.ravel()
        df = self.source.df
        lo = np.zeros_like(s)
        hi = np.ones_like(s)
        d_hi = df(hi)
        grow = d_hi < s
        while np.any(grow):
            hi = np.where(grow, 2.0 * hi, hi)
            if np.any(hi > 1e300):
                raise DomainExceeded("slope outside the range of f'")
            d_hi = np.where(grow, df(hi), d_hi)
            grow = d_hi < s
        d_lo = df(lo)
        tol = self.inversion_tolerance
        for _ in range(self.max_bisect):
            width = hi - lo
            if np.all(width <= tol * np.maximum(1.0, hi)):
                break
            mid = 0.5 * (lo + hi)
            d_mid = df(mid)
            bad = (d_mid < d_lo - 1e-12 * (1 + np.abs(d_lo))) | (
                d_mid > d_hi + 1e-12 * (1 + np.abs(d_hi))
            )
            if np.any(bad):
                raise NonConvexProfile(
                    f"{self.source.name}: f' is not monotone near t = {mid[bad][0]:.6g}"
                )
            below = d_mid < s
            lo = np.where(below, mid, lo)
            d_lo = np.where(below, d_mid, d_lo)
            hi = np.where(below, hi, mid)
            d_hi = np.where(below, d_hi, d_mid)
        return (0.5 * (lo + hi)).reshape(shape)

    def _at_cap(self, s: float) -> float:
        # s t - f(t) is nondecreasing when f' <= s; take its limit.
        f = self.source.f
        T, prev = 1.0, s - float(f(1.0))
        while T < 1e8:
            T *= 2.0
            val = s * T - float(f(T))
            if abs(val - prev) <= 1e-13 * (1.0 + abs(val)):
                return val
            prev = val
        return prev

    def __call__(self, s, strict=False):
        """Evaluate ``f*(s)``; returns ``inf`` beyond the cap unless `strict`."""
        s = np.asarray(s, dtype=float)
        if np.any(s < 0):
            raise ValueError("radial conjugate needs s >= 0")
        cap = self.slope_domain_cap
        out = np.full(s.shape, math.inf)
        inside = s < cap
        if strict and np.any(s > cap):
            raise DomainExceeded(f"slope {float(np.max(s)):.6g} beyond cap {cap:.6g}")
        if np.any(inside):
            si = s[inside]
            t = self.invert_derivative(si)
            out[inside] = si * t - self.source.f(t)
        at_cap = s == cap
        if np.any(at_cap):
            out[at_cap] = self._at_cap(float(cap))
        return float(out) if out.ndim == 0 else out


def conjugate_eval(C: ConjugateTable, s, strict=False):
    """``f*(s)``; ``math.inf`` marks slopes outside the effective domain."""
    return C(s, strict=strict)


def fenchel_gap(L: RadialLagrangian, C: ConjugateTable, xi, z):
    """``F*(z) + F(xi) - <xi, z>``; nonnegative, zero iff ``z = F'(xi)``."""
    xi = np.asarray(xi, dtype=float)
    z = np.asarray(z, dtype=float)
    fz = C(np.linalg.norm(z, axis=-1))
    return fz + eval_lagrangian(L, xi) - np.sum(xi * z, axis=-1)


def bipolar_check(L: RadialLagrangian, C: ConjugateTable, samples,
                  slope_max=None, slope_step=1e-3) -> float:
    """Max of ``|F**(xi) - F(xi)|`` with ``F**`` taken over a slope grid."""
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    r = np.linalg.norm(samples, axis=-1)
    if slope_max is None:
        slope_max = 1.25 * float(np.max(L.df(r))) + 10 * slope_step
    slope_max = min(slope_max, L.cap)
    s = np.arange(0.0, slope_max + 0.5 * slope_step, slope_step)
    s = s[s <= slope_max]
    fs = C(s)
    keep = np.isfinite(fs)
    s, fs = s[keep], fs[keep]
    bip = np.max(r[:, None] * s[None, :] - fs[None, :], axis=1)
    return float(np.max(np.abs(bip - L.f(r))))
