"""Concrete metrics and warping functions.

Space forms realize a prescribed Einstein constant, and ``theorem2_warp``
builds the explicit warping-function family over the upper half-space model
of hyperbolic space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError
from .geometry import MetricField, ScalarField
from .jets import value_of

__all__ = [
    "WarpParams",
    "SpaceFormSpec",
    "Corollary4Result",
    "Corollary5Result",
    "flat_metric",
    "hyperbolic_metric",
    "sphere_metric",
    "scaled_hyperbolic_metric",
    "space_form",
    "conformal_metric",
    "theorem2_warp",
    "warp_constant",
    "corollary4_check",
    "corollary5_check",
]

CHARTS = ("upper-half-space", "stereographic", "cartesian")


def _diagonal(n, s):
    return [[s if i == j else 0.0 for j in range(n)] for i in range(n)]


def flat_metric(n: int) -> MetricField:
    if n < 1:
        raise DomainError("dimension must be positive")
    return MetricField(n, lambda x: _diagonal(n, 1.0), label=f"R^{n}")


def scaled_hyperbolic_metric(n: int, k: float = 1.0) -> MetricField:
    """Upper half-space metric ``k**2 delta_ij / x_n**2`` (Ricci ``-(n-1)/k**2 g``)."""
    if n < 2:
        raise DomainError("hyperbolic space needs n >= 2")
    k2 = float(k) ** 2

    def components(x):
        if value_of(x[-1]) <= 0.0:
            raise DomainError("upper half-space chart needs x_n > 0")
        s = k2 / (x[-1] * x[-1])
        return _diagonal(n, s)

    label = f"H^{n}" if k2 == 1.0 else f"H^{n}(k={k:g})"
    return MetricField(n, components, label=label)


def hyperbolic_metric(n: int) -> MetricField:
    """``delta_ij / x_n**2`` on ``{x_n > 0}``; Einstein constant ``-(n-1)``."""
    return scaled_hyperbolic_metric(n, 1.0)


def sphere_metric(n: int, radius: float = 1.0) -> MetricField:
    """Stereographic chart of the round sphere: ``4 r**2 delta / (1 + |y|**2)**2``."""
    if n < 1:
        raise DomainError("dimension must be positive")
    r2 = float(radius) ** 2

    def components(y):
        q = 1.0
        for yi in y:
            q = q + yi * yi
        s = 4.0 * r2 / (q * q)
        return _diagonal(n, s)

    return MetricField(n, components, label=f"S^{n}(r={radius:g})")


def conformal_metric(phi: ScalarField) -> MetricField:
    """``delta_ij / phi**2``."""
    n = phi.dim

    def components(x):
        p = phi.eval(x)
        return _diagonal(n, 1.0 / (p * p))

    return MetricField(n, components, label=f"delta/({phi.label})^2")


@dataclass(frozen=True)
class SpaceFormSpec:
    dim: int
    einstein_constant: float
    chart: Optional[str] = None

    def __post_init__(self):
        lam = self.einstein_constant
        expected = "stereographic" if lam > 0 else "cartesian" if lam == 0 else "upper-half-space"
        if self.chart is None:
            object.__setattr__(self, "chart", expected)
        elif self.chart != expected:
            raise DomainError(
                f"chart {self.chart!r} cannot realize Einstein constant {lam} (use {expected!r})"
            )


def space_form(spec: SpaceFormSpec) -> MetricField:
    """Constant-curvature model whose Ricci tensor is ``einstein_constant * g``."""
    n, lam = spec.dim, float(spec.einstein_constant)
    if n < 1:
        raise DomainError("dimension must be positive")
    if n == 1 and lam != 0.0:
        raise DomainError("a 1-dimensional manifold is Ricci-flat; lambda must be 0")
    if lam == 0.0:
        return flat_metric(n)
    if lam > 0.0:
        return sphere_metric(n, math.sqrt((n - 1) / lam))
    return scaled_hyperbolic_metric(n, math.sqrt((n - 1) / -lam))


@dataclass(frozen=True)
class WarpParams:
    """Constants ``a, b, b_j, c_j`` of the hyperbolic-base warping family."""

    a: float
    b: float
    b_vec: tuple = field(default=())
    c_vec: tuple = field(default=())
    n: Optional[int] = None

    def __post_init__(self):
        bv = tuple(float(v) for v in self.b_vec)
        cv = tuple(float(v) for v in self.c_vec)
        if len(bv) != len(cv):
            raise DomainError("b_vec and c_vec must have the same length")
        n = len(bv) + 1 if self.n is None else int(self.n)
        if len(bv) != n - 1:
            raise DomainError(f"b_vec/c_vec need length n-1 = {n - 1}, got {len(bv)}")
        object.__setattr__(self, "b_vec", bv)
        object.__setattr__(self, "c_vec", cv)
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "n", n)


def theorem2_warp(params: WarpParams) -> ScalarField:
    r"""The warping function

    .. math::
        f = \frac{1}{x_n}\sum_{j<n}\left(\tfrac{a}{2}x_j^2 + b_j x_j + c_j\right)
            + \tfrac{a}{2}x_n + \frac{b}{x_n}
    """
    n = params.n
    a, b = params.a, params.b
    bv, cv = params.b_vec, params.c_vec

    def f(x):
        xn = x[n - 1]
        if value_of(xn) <= 0.0:
            raise DomainError("the warping family is defined only for x_n > 0")
        s = 0.0
        for j in range(n - 1):
            s = s + (0.5 * a) * x[j] * x[j] + bv[j] * x[j] + cv[j]
        return (s + b) / xn + (0.5 * a) * xn

    return ScalarField(n, f, label=f"theorem2(a={a:g}, b={b:g})")


def warp_constant(params: WarpParams) -> float:
    """The constant ``||grad f||**2 - f**2`` of a family member on ``H^n``.

    Equal to ``sum_j (b_j**2 - 2 a c_j) - 2 a b``.
    """
    a = params.a
    s = sum(bj * bj - 2.0 * a * cj for bj, cj in zip(params.b_vec, params.c_vec))
    return s - 2.0 * a * params.b


@dataclass(frozen=True)
class Corollary4Result:
    globally_positive: bool
    c: float
    lambda_F: float


@dataclass(frozen=True)
class Corollary5Result:
    applies: bool
    lambda_F: float


def corollary4_check(params: WarpParams, d: int) -> Corollary4Result:
    """Positivity predicate ``a > 0, b >= 0, b_j**2 - 2 a c_j <= 0`` and the fiber constant."""
    if d < 1:
        raise DomainError("fiber dimension must be >= 1")
    a, b = params.a, params.b
    positive = a > 0 and b >= 0 and all(
        bj * bj - 2.0 * a * cj <= 0 for bj, cj in zip(params.b_vec, params.c_vec)
    )
    c = warp_constant(params)
    lam_f = (d - 1) * c
    if positive:
        assert lam_f <= 0.0
    return Corollary4Result(positive, c, lam_f)


def corollary5_check(params: WarpParams, d: int) -> Corollary5Result:
    """Predicate ``a = 0, b >= 0, sum c_j + b > 0, b_j = 0``; then the fiber is Ricci-flat.

    When the predicate fails, ``lambda_F`` is the general value ``(d-1) c``.
    """
    if d < 1:
        raise DomainError("fiber dimension must be >= 1")
    applies = (
        params.a == 0
        and params.b >= 0
        and sum(params.c_vec) + params.b > 0
        and all(bj == 0 for bj in params.b_vec)
    )
    if applies:
        return Corollary5Result(True, 0.0)
    return Corollary5Result(False, (d - 1) * warp_constant(params))


def default_chart_point(metric: MetricField) -> np.ndarray:
    """A point inside every chart this module builds: ``(0, ..., 0, 1)``."""
    p = np.zeros(metric.dim)
    p[-1] = 1.0
    return p
