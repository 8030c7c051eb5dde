"""Height function along curves in a warped surface, and the parabolicity witness.

Curves live in the two-dimensional warped product R x_f S^1 with metric
dt^2 + f(t)^2 dtheta^2.  A curve is specified by its height component
t(sigma) with |t'| < 1; the angular speed theta' = sqrt(1 - t'^2)/f then makes
the parametrization exactly unit speed.  The check compares

    (h o c)''  vs  H(h)(n - 1 - |grad h|^2) + (n - 1) <dt, curvature vector>

with n = 2, evaluating the left side by centered differences of the height
and the right side from the warped Christoffel symbols.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .warp import WarpingFunction


@dataclass
class CurveInWarpedSurface:
    """Unit-speed curve in R x_f S^1, given by its height component."""

    wf: WarpingFunction
    t_of_sigma: Callable
    sigma_range: tuple = (0.0, 2.0 * math.pi)

    def height(self, sigma):
        return np.asarray(self.t_of_sigma(np.asarray(sigma, dtype=float)), dtype=float)

    def _t_derivatives(self, sigma, h):
        t0 = self.height(sigma)
        tp = self.height(sigma + h)
        tm = self.height(sigma - h)
        d1 = (tp - tm) / (2.0 * h)
        d2 = (tp - 2.0 * t0 + tm) / (h * h)
        return t0, d1, d2

    def theta_speed(self, sigma, h):
        """theta' = sqrt(1 - t'^2)/f, the unit-speed closure."""
        t0, d1, _ = self._t_derivatives(sigma, h)
        f = np.asarray(self.wf.eval(t0)[0])
        return np.sqrt(np.clip(1.0 - d1 * d1, 0.0, None)) / f

    def speed_defect(self, sigma, h=1e-5):
        """| |c'|_warped - 1 |, which vanishes identically by construction."""
        t0, d1, _ = self._t_derivatives(sigma, h)
        f = np.asarray(self.wf.eval(t0)[0])
        th = self.theta_speed(sigma, h)
        return np.abs(np.sqrt(d1 * d1 + f * f * th * th) - 1.0)


def height_laplacian_residual(curve: CurveInWarpedSurface, sigma, h: float) -> np.ndarray:
    """Absolute residual of the height identity at the given parameters.

    Both sides come from step-h finite differences along the curve; the
    curvature vector is the Christoffel acceleration projected off the
    tangent, so the residual decays at second order in h.
    """
    sigma = np.asarray(sigma, dtype=float)
    t0, t1, t2 = curve._t_derivatives(sigma, h)
    f, f1, _ = (np.asarray(v) for v in curve.wf.eval(t0))

    th1 = np.sqrt(np.clip(1.0 - t1 * t1, 0.0, None)) / f
    # theta'' from one FD derivative of the closed-form theta'
    th1p = curve.theta_speed(sigma + h, h)
    th1m = curve.theta_speed(sigma - h, h)
    th2 = (th1p - th1m) / (2.0 * h)

    H = f1 / f
    # warped Christoffel acceleration of the curve
    acc_t = t2 - f * f1 * th1 * th1
    acc_th = th2 + 2.0 * (f1 / f) * t1 * th1
    # project off the unit tangent to get the curvature vector
    inner = acc_t * t1 + f * f * acc_th * th1
    curv_t = acc_t - inner * t1

    lhs = t2
    rhs = H * (1.0 - t1 * t1) + curv_t
    return np.abs(lhs - rhs)


def height_laplacian_check(
    curve: CurveInWarpedSurface,
    samples: int = 64,
    steps=(1e-2, 5e-3, 2.5e-3),
) -> dict:
    """Max residual per FD step plus the observed convergence orders."""
    lo, hi = curve.sigma_range
    pad = 0.05 * (hi - lo)
    sigma = np.linspace(lo + pad, hi - pad, samples)
    residuals = [float(np.max(height_laplacian_residual(curve, sigma, h))) for h in steps]
    orders = [
        math.log2(residuals[i] / residuals[i + 1]) if residuals[i + 1] > 1e-13 else float("nan")
        for i in range(len(residuals) - 1)
    ]
    return {
        "steps": list(steps),
        "residuals": residuals,
        "orders": orders,
        "speed_defect": float(np.max(curve.speed_defect(sigma))),
    }


def random_curves(wf: WarpingFunction, count: int, seed: int, max_slope: float = 0.75):
    """Smooth random height profiles with |t'| bounded away from one."""
    rng = np.random.default_rng(seed)
    curves = []
    for _ in range(count):
        coeffs = rng.uniform(-1.0, 1.0, size=3)
        phases = rng.uniform(0.0, 2.0 * math.pi, size=3)
        center = rng.uniform(0.0, 2.0 * math.pi)
        weight = max_slope / sum((j + 1) * abs(c) for j, c in enumerate(coeffs))
        scale = min(1.0, weight)

        def t_func(sigma, coeffs=coeffs, phases=phases, center=center, scale=scale):
            sigma = np.asarray(sigma, dtype=float)
            out = center
            for j, (c, p) in enumerate(zip(coeffs, phases)):
                out = out + scale * c * np.sin((j + 1) * sigma + p) / (j + 1)
            return out

        curves.append(CurveInWarpedSurface(wf, t_func))
    return curves


def slice_curve(wf: WarpingFunction, t0: float) -> CurveInWarpedSurface:
    return CurveInWarpedSurface(wf, lambda sigma: np.full_like(np.asarray(sigma, dtype=float), t0))


def parabolicity_witness(n: int, sample_count: int = 10_000, radius: float = 10.0, seed: int = 0) -> float:
    """Max of Delta u over random radii for u = (1 + rho^2)^(-(n-2)/2), n >= 3.

    Delta u = u'' + (n-1) u'/rho in closed radial form (u'/rho stays finite at
    the origin); the witness is superharmonic, so the max must be <= 0 up to
    rounding.
    """
    if n < 3:
        raise ValueError(f"the witness needs dimension n >= 3, got n={n} (it degenerates below)")
    rng = np.random.default_rng(seed)
    rho = np.concatenate(([0.0], rng.uniform(0.0, radius, sample_count - 1)))
    one = 1.0 + rho * rho
    u1_over_rho = -(n - 2.0) * one ** (-n / 2.0)
    u2 = -(n - 2.0) * one ** (-n / 2.0) + n * (n - 2.0) * rho * rho * one ** (-(n + 2.0) / 2.0)
    lap = u2 + (n - 1.0) * u1_over_rho
    return float(np.max(lap))


def parabolicity_witness_at_origin(n: int) -> float:
    """Closed-form Delta u(0) = -n(n-2), used as the pointwise oracle."""
    if n < 3:
        raise ValueError(f"the witness needs dimension n >= 3, got n={n}")
    one = 1.0
    u1_over_rho = -(n - 2.0) * one
    u2 = -(n - 2.0) * one
    return u2 + (n - 1.0) * u1_over_rho
