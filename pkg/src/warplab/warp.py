"""Warping functions with machine-accurate first and second derivatives.

A warping function is a strictly positive scalar field on an interval or a
circle.  Evaluation returns the triple ``(f, f', f'')`` produced by forward
jet arithmetic (or, for tabulated profiles, by closed forms of the profile
ODE), so downstream curvature formulas are not polluted by finite-difference
error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from . import jets
from .errors import DomainError, HorizonError, NonConvergence, NonPositiveWarp
from .expressions import Expression, parse_expression

_POSITIVITY_SAMPLES = 1024


@dataclass(frozen=True)
class Domain1D:
    """Interval (a, b) or circle of period L."""

    kind: str  # "interval" | "circle"
    a: float = 0.0
    b: float = 0.0
    period: float = 0.0

    @staticmethod
    def interval(a: float, b: float) -> "Domain1D":
        if not a < b:
            raise DomainError(f"interval needs a < b, got ({a}, {b})")
        return Domain1D("interval", a=float(a), b=float(b))

    @staticmethod
    def circle(period: float = 2.0 * math.pi) -> "Domain1D":
        if period <= 0:
            raise DomainError(f"circle period must be positive, got {period}")
        return Domain1D("circle", period=float(period))

    @property
    def is_circle(self) -> bool:
        return self.kind == "circle"

    @property
    def length(self) -> float:
        return self.period if self.is_circle else self.b - self.a

    def reduce(self, t):
        """Map t into the domain; raise DomainError outside an interval."""
        t = np.asarray(t, dtype=float)
        if self.is_circle:
            return np.mod(t, self.period)
        if np.any(t < self.a - 1e-12) or np.any(t > self.b + 1e-12):
            raise DomainError(f"t={t} outside interval [{self.a}, {self.b}]")
        return np.clip(t, self.a, self.b)

    def grid(self, n: int, endpoint: bool | None = None) -> np.ndarray:
        """Uniform sample grid: n nodes, endpoint omitted on circles."""
        if self.is_circle:
            return np.linspace(0.0, self.period, n, endpoint=bool(endpoint))
        return np.linspace(self.a, self.b, n, endpoint=True if endpoint is None else endpoint)


class WarpingFunction:
    """Positive scalar field with exact (f, f', f'') evaluation."""

    def __init__(self, domain: Domain1D, evaluator: Callable, name: str = "warp"):
        self.domain = domain
        self.name = name
        self._evaluator = evaluator
        self._check_positivity()
        if domain.is_circle:
            self._check_periodicity()

    def __repr__(self):
        return f"WarpingFunction({self.name!r}, {self.domain.kind})"

    def _check_positivity(self):
        grid = self.domain.grid(_POSITIVITY_SAMPLES, endpoint=False)
        f, _, _ = self._evaluator(grid)
        if np.any(f <= 0.0) or not np.all(np.isfinite(f)):
            raise NonPositiveWarp(f"warp {self.name!r} is not strictly positive on its domain")

    def _check_periodicity(self, tol: float = 1e-12):
        ts = np.linspace(0.0, self.domain.period, 64, endpoint=False)
        lo = self._evaluator(ts)
        hi = self._evaluator(ts + self.domain.period)
        gap = max(float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) for a, b in zip(lo, hi))
        if gap > tol:
            raise DomainError(f"warp {self.name!r} is not {self.domain.period}-periodic (gap {gap:.2e})")

    def eval(self, t):
        """Return (f, f', f'') at t; t reduced modulo the period on circles."""
        t = self.domain.reduce(t)
        f, f1, f2 = self._evaluator(t)
        if np.any(np.asarray(f) <= 0.0):
            raise NonPositiveWarp(f"warp {self.name!r} evaluated non-positive at t={t}")
        return f, f1, f2

    def value(self, t):
        return self.eval(t)[0]

    def mean_curvature(self, t):
        """Slice mean curvature H = f'/f."""
        f, f1, _ = self.eval(t)
        return f1 / f

    def mean_curvature_prime(self, t):
        """H' = f''/f - (f'/f)^2."""
        f, f1, f2 = self.eval(t)
        return f2 / f - (f1 / f) ** 2

    def spread(self, n: int = 4096) -> float:
        """max f - min f on a dense sample grid."""
        f, _, _ = self.eval(self.domain.grid(n, endpoint=False))
        return float(np.max(f) - np.min(f))


@dataclass(frozen=True)
class MeanCurvatureProfile:
    """H(t) = f'/f and its derivative, with sign flags on a dense grid."""

    wf: WarpingFunction

    def H(self, t):
        return self.wf.mean_curvature(t)

    def Hprime(self, t):
        return self.wf.mean_curvature_prime(t)

    def sign_report(self, n: int = 1024) -> dict:
        grid = self.wf.domain.grid(n, endpoint=False)
        h = self.H(grid)
        hp = self.Hprime(grid)
        return {
            "H_positive": bool(np.all(h > 0.0)),
            "H_nonnegative": bool(np.all(h >= -1e-14)),
            "Hprime_nonnegative": bool(np.all(hp >= -1e-12)),
            "min_H": float(np.min(h)),
            "min_Hprime": float(np.min(hp)),
        }


def from_expression(text: str, domain: Domain1D, name: str | None = None) -> WarpingFunction:
    expr = parse_expression(text) if not isinstance(text, Expression) else text

    def evaluator(t):
        jet = expr.jet(t)
        val = np.asarray(jet.val, dtype=float)
        d1 = np.broadcast_to(np.asarray(jet.d1, dtype=float), val.shape)
        d2 = np.broadcast_to(np.asarray(jet.d2, dtype=float), val.shape)
        if val.ndim == 0:
            return float(val), float(d1), float(d2)
        return val, np.array(d1), np.array(d2)

    return WarpingFunction(domain, evaluator, name=name or expr.text)


def eval_warp(wf: WarpingFunction, t):
    """Operation form of WarpingFunction.eval."""
    return wf.eval(t)


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------


def _constant(c: float = 3.0, domain: Domain1D | None = None) -> WarpingFunction:
    if c <= 0:
        raise NonPositiveWarp(f"constant warp needs c > 0, got {c}")
    domain = domain or Domain1D.circle()

    def evaluator(t):
        t = np.asarray(t, dtype=float)
        z = np.zeros_like(t)
        return z + c, z, z

    return WarpingFunction(domain, evaluator, name=f"constant({c})")


def _two_plus_cos(domain: Domain1D | None = None) -> WarpingFunction:
    return from_expression("2 + cos(t)", domain or Domain1D.circle(), name="two-plus-cos")


def _cosh(halfwidth: float = 3.0, domain: Domain1D | None = None) -> WarpingFunction:
    return from_expression("cosh(t)", domain or Domain1D.interval(-halfwidth, halfwidth), name="cosh")


def _affine(intercept: float = 1.0, slope: float = 1.0, domain: Domain1D | None = None) -> WarpingFunction:
    return from_expression(
        f"{intercept} + {slope}*t", domain or Domain1D.interval(0.0, 1.0), name=f"affine({intercept},{slope})"
    )


def _step_count(tmax: float, step: float) -> int:
    # snap the step so the node grid lands exactly on [0, tmax]
    return max(1, int(round(tmax / step)))


def _rk4_first_order(rhs, y0: float, tmax: float, n: int) -> np.ndarray:
    h = tmax / n
    ys = np.empty(n + 1)
    ys[0] = y0
    y = y0
    for i in range(n):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * h * k1)
        k3 = rhs(y + 0.5 * h * k2)
        k4 = rhs(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        ys[i + 1] = y
    return ys


def schwarzschild_profile(
    m: float,
    q: int,
    r0: float,
    tmax: float,
    step: float = 1e-3,
    richardson_tol: float = 1e-9,
) -> WarpingFunction:
    """Integrate f' = sqrt(1 - 2m/f^q) from f(0) = r0 on [0, tmax].

    The exponent is the fiber dimension q.  Fourth-order integration with one
    Richardson halving check; f' and f'' are recovered in closed form from f
    (f'' = m q f^(-q-1)), so the tabulated profile still carries an exactly
    consistent jet.
    """
    if m <= 0:
        raise HorizonError(f"mass must be positive, got {m}")
    if step <= 0:
        raise HorizonError(f"step must be positive, got {step}")
    if r0 ** q <= 2.0 * m:
        raise HorizonError(f"r0^q = {r0 ** q:.6g} must exceed 2m = {2 * m:.6g}")

    def rhs(f):
        flux = 1.0 - 2.0 * m / f ** q
        if flux <= 0.0:
            raise HorizonError(f"flux factor became non-positive at f={f:.6g}")
        return math.sqrt(flux)

    n = _step_count(tmax, step)
    table = _rk4_first_order(rhs, r0, tmax, n)
    check = _rk4_first_order(rhs, r0, tmax, 2 * n)
    gap = float(np.max(np.abs(table - check[::2])))
    if gap > richardson_tol:
        raise NonConvergence(f"Richardson halving check failed for the profile ODE (gap {gap:.2e})")

    ts = np.linspace(0.0, tmax, table.size)
    spline = CubicSpline(ts, table)

    def evaluator(t):
        t = np.asarray(t, dtype=float)
        f = spline(t)
        flux = 1.0 - 2.0 * m * np.power(f, -q)
        if np.any(flux <= 0.0):
            raise HorizonError("flux factor non-positive inside tabulated profile")
        f1 = np.sqrt(flux)
        f2 = m * q * np.power(f, -q - 1.0)
        if t.ndim == 0:
            return float(f), float(f1), float(f2)
        return f, f1, f2

    return WarpingFunction(
        Domain1D.interval(0.0, tmax), evaluator, name=f"schwarzschild(m={m},q={q},r0={r0})"
    )


def schwarzschild_throat_profile(
    m: float,
    q: int,
    tmax: float,
    step: float = 1e-3,
    richardson_tol: float = 1e-9,
) -> WarpingFunction:
    """Profile anchored at the neck f(0) = (2m)^(1/q), f'(0) = 0.

    At the neck the first-order form is degenerate (square root of zero), so
    the equivalent second-order form f'' = m q f^(-q-1) is integrated instead;
    (f')^2 = 1 - 2m/f^q is its first integral.  For q = 2 the exact solution
    is f(t) = sqrt(2m + t^2), used as a test oracle.
    """
    if m <= 0:
        raise HorizonError(f"mass must be positive, got {m}")
    f_neck = (2.0 * m) ** (1.0 / q)

    def accel(f):
        return m * q * f ** (-q - 1.0)

    n = _step_count(tmax, step)

    def integrate(steps):
        h = tmax / steps
        fs = np.empty(steps + 1)
        f, v = f_neck, 0.0
        fs[0] = f
        for i in range(steps):
            k1f, k1v = v, accel(f)
            k2f, k2v = v + 0.5 * h * k1v, accel(f + 0.5 * h * k1f)
            k3f, k3v = v + 0.5 * h * k2v, accel(f + 0.5 * h * k2f)
            k4f, k4v = v + h * k3v, accel(f + h * k3f)
            f = f + (h / 6.0) * (k1f + 2 * k2f + 2 * k3f + k4f)
            v = v + (h / 6.0) * (k1v + 2 * k2v + 2 * k3v + k4v)
            fs[i + 1] = f
        return fs

    table = integrate(n)
    check = integrate(2 * n)
    gap = float(np.max(np.abs(table - check[::2])))
    if gap > richardson_tol:
        raise NonConvergence(f"Richardson halving check failed for the neck profile (gap {gap:.2e})")

    ts = np.linspace(0.0, tmax, table.size)
    spline = CubicSpline(ts, table)

    def evaluator(t):
        t = np.asarray(t, dtype=float)
        f = spline(t)
        flux = np.clip(1.0 - 2.0 * m * np.power(f, -q), 0.0, None)
        f1 = np.sign(t) * np.sqrt(flux)
        f2 = m * q * np.power(f, -q - 1.0)
        if t.ndim == 0:
            return float(f), float(f1), float(f2)
        return f, f1, f2

    return WarpingFunction(
        Domain1D.interval(0.0, tmax), evaluator, name=f"schwarzschild-throat(m={m},q={q})"
    )


_CATALOG = {
    "constant": _constant,
    "two-plus-cos": _two_plus_cos,
    "cosh": _cosh,
    "affine": _affine,
    "schwarzschild": schwarzschild_profile,
    "schwarzschild-throat": schwarzschild_throat_profile,
}


def catalog_names() -> list[str]:
    return sorted(_CATALOG)


def catalog(name: str, **params) -> WarpingFunction:
    """Build a catalog warp. Domain overrides pass through as domain=Domain1D(...)."""
    try:
        builder = _CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown catalog warp {name!r}; known: {catalog_names()}") from None
    return builder(**params)
