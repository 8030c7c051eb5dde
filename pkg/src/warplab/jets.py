"""Second-order forward-mode automatic differentiation.

A :class:`Jet` carries a value together with its first and second derivative
with respect to a single scalar parameter, propagated exactly through
arithmetic and the elementary functions used by warping expressions.  The
fields may be floats or numpy arrays, so a whole sample grid is pushed through
an expression in one pass.

:class:`MJet` is the multivariate analogue (value, gradient, Hessian) used for
warping functions on flat torus bases of dimension two and up.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _chain(h, hp, hpp, g: "Jet") -> "Jet":
    # h(g): (h, h'·g', h''·g'^2 + h'·g'')
    return Jet(h, hp * g.d1, hpp * g.d1 * g.d1 + hp * g.d2)


@dataclass(frozen=True)
class Jet:
    val: object
    d1: object
    d2: object

    def __add__(self, other):
        other = as_jet(other)
        return Jet(self.val + other.val, self.d1 + other.d1, self.d2 + other.d2)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.val, -self.d1, -self.d2)

    def __sub__(self, other):
        other = as_jet(other)
        return Jet(self.val - other.val, self.d1 - other.d1, self.d2 - other.d2)

    def __rsub__(self, other):
        return as_jet(other) - self

    def __mul__(self, other):
        other = as_jet(other)
        return Jet(
            self.val * other.val,
            self.d1 * other.val + self.val * other.d1,
            self.d2 * other.val + 2.0 * self.d1 * other.d1 + self.val * other.d2,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * reciprocal(as_jet(other))

    def __rtruediv__(self, other):
        return as_jet(other) * reciprocal(self)

    def __pow__(self, p):
        return power(self, p)


def as_jet(x) -> Jet:
    if isinstance(x, Jet):
        return x
    return Jet(x, 0.0, 0.0)


def constant(c) -> Jet:
    return Jet(c, 0.0, 0.0)


def variable(t) -> Jet:
    t = np.asarray(t, dtype=float)
    if t.ndim == 0:
        return Jet(float(t), 1.0, 0.0)
    return Jet(t, np.ones_like(t), np.zeros_like(t))


def reciprocal(g: Jet) -> Jet:
    inv = 1.0 / g.val
    return _chain(inv, -inv * inv, 2.0 * inv * inv * inv, g)


def power(g: Jet, p) -> Jet:
    if isinstance(p, Jet):
        # general exponent: a^b = exp(b ln a), requires a > 0
        return exp(p * log(g))
    p = float(p)
    if p == 0.0:
        return constant(np.ones_like(np.asarray(g.val, dtype=float)) if np.ndim(g.val) else 1.0)
    if p == 1.0:
        return g
    if p == 2.0:
        return g * g
    v = np.power(g.val, p)
    return _chain(v, p * np.power(g.val, p - 1.0), p * (p - 1.0) * np.power(g.val, p - 2.0), g)


def sin(g: Jet) -> Jet:
    s, c = np.sin(g.val), np.cos(g.val)
    return _chain(s, c, -s, g)


def cos(g: Jet) -> Jet:
    s, c = np.sin(g.val), np.cos(g.val)
    return _chain(c, -s, -c, g)


def cosh(g: Jet) -> Jet:
    return _chain(np.cosh(g.val), np.sinh(g.val), np.cosh(g.val), g)


def sinh(g: Jet) -> Jet:
    return _chain(np.sinh(g.val), np.cosh(g.val), np.sinh(g.val), g)


def exp(g: Jet) -> Jet:
    e = np.exp(g.val)
    return _chain(e, e, e, g)


def sqrt(g: Jet) -> Jet:
    r = np.sqrt(g.val)
    return _chain(r, 0.5 / r, -0.25 / (r * g.val), g)


def log(g: Jet) -> Jet:
    inv = 1.0 / g.val
    return _chain(np.log(g.val), inv, -inv * inv, g)


# ---------------------------------------------------------------------------
# multivariate jets: value, gradient (m,...), Hessian (m,m,...)
# ---------------------------------------------------------------------------


def _outer(a, b):
    return np.einsum("i...,j...->ij...", a, b)


def _mchain(h, hp, hpp, g: "MJet") -> "MJet":
    return MJet(h, hp * g.grad, hpp * _outer(g.grad, g.grad) + hp * g.hess)


@dataclass(frozen=True)
class MJet:
    val: object
    grad: np.ndarray
    hess: np.ndarray

    @property
    def m(self) -> int:
        return self.grad.shape[0]

    def __add__(self, other):
        other = as_mjet(other, self.m, np.shape(self.val))
        return MJet(self.val + other.val, self.grad + other.grad, self.hess + other.hess)

    __radd__ = __add__

    def __neg__(self):
        return MJet(-self.val, -self.grad, -self.hess)

    def __sub__(self, other):
        return self + (-as_mjet(other, self.m, np.shape(self.val)))

    def __rsub__(self, other):
        return as_mjet(other, self.m, np.shape(self.val)) + (-self)

    def __mul__(self, other):
        other = as_mjet(other, self.m, np.shape(self.val))
        return MJet(
            self.val * other.val,
            self.grad * other.val + self.val * other.grad,
            self.hess * other.val
            + _outer(self.grad, other.grad)
            + _outer(other.grad, self.grad)
            + self.val * other.hess,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_mjet(other, self.m, np.shape(self.val))
        inv = 1.0 / other.val
        rec = _mchain(inv, -inv * inv, 2.0 * inv ** 3, other)
        return self * rec

    def __rtruediv__(self, other):
        inv = 1.0 / self.val
        rec = _mchain(inv, -inv * inv, 2.0 * inv ** 3, self)
        return as_mjet(other, self.m, np.shape(self.val)) * rec

    def __pow__(self, p):
        return mpower(self, p)


def as_mjet(x, m: int, shape=()) -> MJet:
    if isinstance(x, MJet):
        return x
    val = np.broadcast_to(np.asarray(x, dtype=float), shape).copy() if shape else float(x)
    return MJet(val, np.zeros((m,) + shape), np.zeros((m, m) + shape))


def mvariable(i: int, m: int, value) -> MJet:
    value = np.asarray(value, dtype=float)
    shape = value.shape
    grad = np.zeros((m,) + shape)
    grad[i] = 1.0
    return MJet(value if shape else float(value), grad, np.zeros((m, m) + shape))


def mpower(g: MJet, p) -> MJet:
    if isinstance(p, MJet):
        return mexp(p * mlog(g))
    p = float(p)
    if p == 1.0:
        return g
    if p == 2.0:
        return g * g
    v = np.power(g.val, p)
    return _mchain(v, p * np.power(g.val, p - 1.0), p * (p - 1.0) * np.power(g.val, p - 2.0), g)


def msin(g: MJet) -> MJet:
    return _mchain(np.sin(g.val), np.cos(g.val), -np.sin(g.val), g)


def mcos(g: MJet) -> MJet:
    return _mchain(np.cos(g.val), -np.sin(g.val), -np.cos(g.val), g)


def mcosh(g: MJet) -> MJet:
    return _mchain(np.cosh(g.val), np.sinh(g.val), np.cosh(g.val), g)


def msinh(g: MJet) -> MJet:
    return _mchain(np.sinh(g.val), np.cosh(g.val), np.sinh(g.val), g)


def mexp(g: MJet) -> MJet:
    e = np.exp(g.val)
    return _mchain(e, e, e, g)


def msqrt(g: MJet) -> MJet:
    r = np.sqrt(g.val)
    return _mchain(r, 0.5 / r, -0.25 / (r * g.val), g)


def mlog(g: MJet) -> MJet:
    inv = 1.0 / g.val
    return _mchain(np.log(g.val), inv, -inv * inv, g)
