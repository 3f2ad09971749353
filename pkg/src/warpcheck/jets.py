"""Second-order forward-mode automatic differentiation.

A :class:`Jet2` carries the value, gradient and Hessian of a scalar with
respect to ``n`` seeded chart variables.  Evaluating a chart function once on
seeded jets yields all first and second partial derivatives at that point.

Plain Python floats mix freely with jets and act as constants, so the same
chart function can be evaluated on floats (for finite-difference oracles) or
on jets.  The module-level helpers :func:`sqrt`, :func:`reciprocal` and
:func:`power` dispatch on the argument type for the same reason.
"""

from __future__ import annotations

import math
from numbers import Real

import numpy as np

from .errors import ArityError, DomainError, SingularityError

__all__ = [
    "Jet2",
    "seed_variable",
    "seed_point",
    "constant",
    "sqrt",
    "reciprocal",
    "power",
    "value_of",
]


class Jet2:
    """Truncated second-order Taylor expansion of a scalar."""

    __slots__ = ("value", "gradient", "hessian")

    def __init__(self, value, gradient, hessian):
        self.value = float(value)
        self.gradient = np.asarray(gradient, dtype=float)
        self.hessian = np.asarray(hessian, dtype=float)

    @property
    def arity(self) -> int:
        return self.gradient.shape[0]

    def __repr__(self):
        return f"Jet2(value={self.value!r}, gradient={self.gradient.tolist()!r})"

    # -- helpers -------------------------------------------------------------

    def _coerce(self, other) -> Jet2 | None:
        if isinstance(other, Jet2):
            if other.arity != self.arity:
                raise ArityError(
                    f"cannot combine jets of arity {self.arity} and {other.arity}"
                )
            return other
        if isinstance(other, Real):
            return None
        return NotImplemented

    def _chain(self, v0: float, d1: float, d2: float) -> Jet2:
        # g(u): value g, gradient g' du, hessian g' Hu + g'' du du^T
        g = self.gradient
        return Jet2(v0, d1 * g, d1 * self.hessian + d2 * np.outer(g, g))

    # -- arithmetic ----------------------------------------------------------

    def __neg__(self):
        return Jet2(-self.value, -self.gradient, -self.hessian)

    def __pos__(self):
        return self

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            return Jet2(self.value + other, self.gradient, self.hessian)
        return Jet2(self.value + o.value, self.gradient + o.gradient, self.hessian + o.hessian)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            return Jet2(self.value - other, self.gradient, self.hessian)
        return Jet2(self.value - o.value, self.gradient - o.gradient, self.hessian - o.hessian)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            c = float(other)
            return Jet2(self.value * c, self.gradient * c, self.hessian * c)
        u, v = self.value, o.value
        gu, gv = self.gradient, o.gradient
        cross = np.outer(gu, gv)
        return Jet2(u * v, u * gv + v * gu, u * o.hessian + v * self.hessian + cross + cross.T)

    __rmul__ = __mul__

    def reciprocal(self) -> Jet2:
        v = self.value
        if v == 0.0:
            raise SingularityError("reciprocal of a jet with zero value")
        inv = 1.0 / v
        return self._chain(inv, -inv * inv, 2.0 * inv * inv * inv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            if other == 0:
                raise SingularityError("division of a jet by zero")
            return self * (1.0 / float(other))
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        if not isinstance(other, Real):
            return NotImplemented
        return self.reciprocal() * float(other)

    def __pow__(self, k):
        if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
            raise TypeError("Jet2 supports integer powers only; use sqrt() for k=1/2")
        k = int(k)
        if k == 0:
            return Jet2(1.0, np.zeros_like(self.gradient), np.zeros_like(self.hessian))
        if k == 1:
            return self
        v = self.value
        if k < 0 and v == 0.0:
            raise SingularityError("negative power of a jet with zero value")
        return self._chain(v**k, k * v ** (k - 1), k * (k - 1) * v ** (k - 2))

    def sqrt(self) -> Jet2:
        v = self.value
        if v <= 0.0:
            raise DomainError(f"square root of non-positive jet value {v!r}")
        s = math.sqrt(v)
        return self._chain(s, 0.5 / s, -0.25 / (s * v))


def seed_variable(point, index: int) -> Jet2:
    """Jet for chart coordinate ``index`` at ``point`` (unit gradient, zero Hessian)."""
    point = np.asarray(point, dtype=float).ravel()
    n = point.shape[0]
    if not 0 <= index < n:
        raise ArityError(f"seed index {index} out of range for a point of length {n}")
    grad = np.zeros(n)
    grad[index] = 1.0
    return Jet2(point[index], grad, np.zeros((n, n)))


def seed_point(point) -> list[Jet2]:
    """Seed every coordinate of ``point``."""
    point = np.asarray(point, dtype=float).ravel()
    return [seed_variable(point, i) for i in range(point.shape[0])]


def constant(value: float, n: int) -> Jet2:
    return Jet2(value, np.zeros(n), np.zeros((n, n)))


def value_of(x) -> float:
    return x.value if isinstance(x, Jet2) else float(x)


def sqrt(x):
    if isinstance(x, Jet2):
        return x.sqrt()
    if x <= 0:
        raise DomainError(f"square root of non-positive value {x!r}")
    return math.sqrt(x)


def reciprocal(x):
    if isinstance(x, Jet2):
        return x.reciprocal()
    if x == 0:
        raise SingularityError("reciprocal of zero")
    return 1.0 / x


def power(x, k: int):
    if isinstance(x, Jet2):
        return x**k
    if k < 0 and x == 0:
        raise SingularityError("negative power of zero")
    return float(x) ** k
