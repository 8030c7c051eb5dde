"""Closed-form curvature and slice data of warped products with flat base.

The spaces handled here are B x_f N where B is a flat torus (or an interval
for pointwise checks) and N is an abstract fiber known through its dimension,
volume and, optionally, Laplace spectrum.  With the base flat, the horizontal
Ricci curvature reduces to -(q/f) Hess f, which is what every operation below
evaluates in one closed form or another.

Sign conventions: Laplacian = trace of the Hessian; fiber dimension is q
throughout (the degenerate q = 1 case is accepted but flagged, since both
sides of the integral identity collapse).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, MissingSpectrum
from .expressions import Expression, parse_expression
from .warp import Domain1D, WarpingFunction


def sphere_volume(q: int) -> float:
    """Volume of the round unit sphere S^q."""
    return 2.0 * math.pi ** ((q + 1) / 2.0) / math.gamma((q + 1) / 2.0)


def sphere_eigenvalue(k: int, q: int) -> float:
    """k-th Laplace eigenvalue k(k + q - 1) of the round unit S^q."""
    return float(k * (k + q - 1))


def sphere_multiplicity(k: int, q: int) -> int:
    if k == 0:
        return 1
    return round(
        (2 * k + q - 1)
        * math.factorial(k + q - 2)
        / (math.factorial(k) * math.factorial(q - 1))
    )


@dataclass(frozen=True)
class FiberDescriptor:
    """Fiber manifold: dimension, volume and optional (eigenvalue, multiplicity) list."""

    q: int
    volume: float
    spectrum: Optional[tuple] = None
    name: str = "abstract"

    def __post_init__(self):
        if self.q < 1:
            raise ValueError(f"fiber dimension must be >= 1, got {self.q}")
        if self.volume <= 0:
            raise ValueError(f"fiber volume must be positive, got {self.volume}")

    @staticmethod
    def sphere(q: int, k_max: int = 8) -> "FiberDescriptor":
        spec = tuple((sphere_eigenvalue(k, q), sphere_multiplicity(k, q)) for k in range(k_max + 1))
        return FiberDescriptor(q=q, volume=sphere_volume(q), spectrum=spec, name=f"sphere({q})")

    @staticmethod
    def circle(radius: float = 1.0, k_max: int = 16) -> "FiberDescriptor":
        spec = [(0.0, 1)] + [((k / radius) ** 2, 2) for k in range(1, k_max + 1)]
        return FiberDescriptor(q=1, volume=2.0 * math.pi * radius, spectrum=tuple(spec), name=f"circle({radius})")

    @staticmethod
    def abstract(volume: float, q: int, spectrum: Optional[Sequence] = None) -> "FiberDescriptor":
        spec = tuple(tuple(p) for p in spectrum) if spectrum is not None else None
        return FiberDescriptor(q=q, volume=volume, spectrum=spec)

    def nonzero_eigenvalues(self):
        if self.spectrum is None:
            raise MissingSpectrum(f"fiber {self.name!r} has no known spectrum")
        return [(lam, mult) for lam, mult in self.spectrum if lam > 0.0]


@dataclass(frozen=True)
class TorusBase:
    """Flat torus with the given periods; Ricci flat by construction."""

    periods: tuple

    def __post_init__(self):
        if any(p <= 0 for p in self.periods):
            raise ValueError(f"torus periods must be positive, got {self.periods}")

    @property
    def m(self) -> int:
        return len(self.periods)

    @property
    def volume(self) -> float:
        return float(np.prod(self.periods))

    def grid(self, nodes: int):
        axes = [np.linspace(0.0, L, nodes, endpoint=False) for L in self.periods]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh])


class ScalarFieldM:
    """Smooth positive field on a flat torus with exact gradient and Hessian."""

    def __init__(self, expression: str | Expression, base: TorusBase, name: str | None = None):
        self.expr = expression if isinstance(expression, Expression) else parse_expression(expression)
        self.base = base
        self.name = name or self.expr.text
        self._check(samples=256)

    def _check(self, samples: int, tol: float = 1e-12):
        rng = np.random.default_rng(20240601)
        pts = np.stack([rng.uniform(0, L, samples) for L in self.base.periods])
        val, grad, hess = self.eval(pts)
        if np.any(val <= 0):
            from .errors import NonPositiveWarp

            raise NonPositiveWarp(f"torus warp {self.name!r} is not strictly positive")
        asym = np.max(np.abs(hess - np.swapaxes(hess, 0, 1)))
        if asym > tol:
            raise ValueError(f"Hessian asymmetry {asym:.2e} exceeds {tol}")

    def eval(self, points):
        """points: (m,) or (m, N) -> (value, gradient (m,...), Hessian (m,m,...))."""
        mj = self.expr.mjet(np.asarray(points, dtype=float), self.base.m)
        return mj.val, mj.grad, mj.hess


class WarpedProductSpace:
    """B x_f N with flat base B (circle/torus/interval) and fiber descriptor N."""

    def __init__(self, warp, fiber: FiberDescriptor):
        self.fiber = fiber
        self.warp = warp
        if isinstance(warp, WarpingFunction):
            self.base = warp.domain
            self.m = 1
        elif isinstance(warp, ScalarFieldM):
            self.base = warp.base
            self.m = warp.base.m
        else:
            raise TypeError(f"unsupported warp type {type(warp)!r}")

    @property
    def q(self) -> int:
        return self.fiber.q

    @property
    def degenerate_fiber(self) -> bool:
        """q = 1 collapses both sides of the integral identity; flagged, not rejected."""
        return self.fiber.q == 1

    @property
    def base_is_compact(self) -> bool:
        if isinstance(self.base, TorusBase):
            return True
        return self.base.is_circle

    def warp_jet(self, point):
        """(f, grad f, Hess f) at a base point (scalars for m = 1)."""
        if self.m == 1:
            t = np.asarray(point, dtype=float).reshape(())
            f, f1, f2 = self.warp.eval(float(t))
            return f, np.array([f1]), np.array([[f2]])
        return self.warp.eval(point)


@dataclass(frozen=True)
class SliceData:
    """Slice {t} x N: scale, mean curvature and the umbilicity/geodesic flags."""

    t: float
    scale: float
    mean_curvature: float
    umbilic: bool = True

    @property
    def totally_geodesic(self) -> bool:
        return self.mean_curvature == 0.0


def slice_data(space: WarpedProductSpace, t: float, tol: float = 1e-12) -> SliceData:
    if space.m != 1:
        raise DomainError("slices are indexed by a one-dimensional base")
    f, f1, _ = space.warp.eval(t)
    return SliceData(t=float(t), scale=float(f), mean_curvature=float(f1 / f))


@dataclass(frozen=True)
class SplitTangent:
    """Tangent vector of the total space split into (base, fiber) components.

    The fiber part is expressed in a g_N-orthonormal frame, so its warped
    length at base point t is f(t) * |fiber|.
    """

    base: float
    fiber: np.ndarray

    @staticmethod
    def vertical(fiber) -> "SplitTangent":
        return SplitTangent(0.0, np.asarray(fiber, dtype=float))

    @staticmethod
    def dt() -> "SplitTangent":
        return SplitTangent(1.0, np.zeros(1))


def warped_norm(space: WarpedProductSpace, t: float, X: SplitTangent) -> float:
    f = space.warp.eval(t)[0]
    return math.sqrt(X.base ** 2 + float(f) ** 2 * float(np.dot(X.fiber, X.fiber)))


def ricci_horizontal(space: WarpedProductSpace, point, X, Y) -> float:
    """Ric(X, Y) for horizontal X, Y over a flat base: -(q/f) Hess f(X, Y)."""
    f, _, hess = space.warp_jet(point)
    X = np.atleast_1d(np.asarray(X, dtype=float))
    Y = np.atleast_1d(np.asarray(Y, dtype=float))
    return float(-(space.q / f) * X @ hess @ Y)


def ricci_dt_dt(space: WarpedProductSpace, t: float) -> float:
    """Ric(dt, dt) = -q f''/f on a one-dimensional base.

    Delegates to ricci_horizontal with X = Y = dt so the two agree bitwise.
    """
    if space.m != 1:
        raise DomainError("ricci_dt_dt needs a one-dimensional base")
    return ricci_horizontal(space, t, [1.0], [1.0])


def volume_element(space: WarpedProductSpace, point) -> float:
    """Density f^q of the warped measure relative to dt dN."""
    if space.m == 1:
        f = space.warp.eval(point)[0]
    else:
        f = space.warp.eval(point)[0]
    return float(np.asarray(f) ** space.q)


def total_measure(space: WarpedProductSpace, nodes: int = 1024) -> float:
    """Vol(B x_f N) = Vol(N) * integral of f^q over the base."""
    if not space.base_is_compact:
        raise DomainError("total measure needs a compact base")
    if space.m == 1:
        ts = space.base.grid(nodes, endpoint=False)
        f = np.asarray(space.warp.eval(ts)[0])
        return space.fiber.volume * float(np.mean(f ** space.q)) * space.base.length
    pts = space.base.grid(nodes)
    f = np.asarray(space.warp.eval(pts)[0])
    return space.fiber.volume * float(np.mean(f ** space.q)) * space.base.volume


def covariant_dt(space: WarpedProductSpace, t: float, X: SplitTangent) -> SplitTangent:
    """Covariant derivative of the unit base field along X: H(t) * (vertical part of X)."""
    if space.m != 1:
        raise DomainError("covariant_dt needs a one-dimensional base")
    H = float(space.warp.mean_curvature(t))
    return SplitTangent(0.0, H * np.asarray(X.fiber, dtype=float))


def log_warp_identity_residual(space: WarpedProductSpace, t) -> float:
    """Pointwise engine of the integral identity, for u = ln f on m = 1 bases:

        q (u'' + q H u') + sum_k Ric(E_k, E_k) - q (q - 1) H^2 = 0.

    Returns the absolute residual; exact jets keep it at rounding level.
    """
    if space.m != 1:
        raise DomainError("the log-warp identity is evaluated over a one-dimensional base")
    q = space.q
    f, f1, f2 = space.warp.eval(t)
    f = np.asarray(f, dtype=float)
    u1 = np.asarray(f1) / f
    u2 = np.asarray(f2) / f - u1 * u1
    sum_ric = -q * np.asarray(f2) / f
    residual = q * (u2 + q * u1 * u1) + sum_ric - q * (q - 1) * u1 * u1
    return float(np.max(np.abs(residual)))
