"""Warped products ``B x_f F`` and their Ricci tensor along two routes.

The direct route assembles the block metric ``g_B + f**2 g_F`` on the
concatenated chart ``(x_1..x_n, y_1..y_d)`` and differentiates it.  The
O'Neill route combines base and fiber curvature with the Hessian, Laplacian
and gradient norm of ``f`` computed on the base alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geometry
from .errors import DomainError, DomainViolation
from .geometry import MetricField, ScalarField
from .jets import value_of

__all__ = [
    "WarpedProductSpec",
    "RicciBlocks",
    "assemble_product_metric",
    "oneill_ricci",
    "direct_ricci",
    "cross_check_ricci",
]


@dataclass(frozen=True)
class WarpedProductSpec:
    base: MetricField
    fiber: MetricField
    warp: ScalarField

    def __post_init__(self):
        if self.base.dim < 3:
            raise DomainError(f"base dimension must be >= 3, got {self.base.dim}")
        if self.fiber.dim < 1:
            raise DomainError("fiber dimension must be >= 1")
        if self.warp.dim != self.base.dim:
            raise DomainError("warping function must live on the base chart")

    @property
    def n(self) -> int:
        return self.base.dim

    @property
    def d(self) -> int:
        return self.fiber.dim

    @property
    def label(self) -> str:
        return f"{self.base.label} x_[{self.warp.label}] {self.fiber.label}"


@dataclass(frozen=True)
class RicciBlocks:
    base_block: np.ndarray
    mixed_block: np.ndarray
    fiber_block: np.ndarray

    def full(self) -> np.ndarray:
        return np.block([[self.base_block, self.mixed_block], [self.mixed_block.T, self.fiber_block]])


def _positive_warp(value: float) -> None:
    if not value > 0.0:
        raise DomainViolation(f"warping function must be positive, got {value!r}")


def assemble_product_metric(spec: WarpedProductSpec) -> MetricField:
    """Block metric ``diag(g_B(x), f(x)**2 g_F(y))`` in ``n + d`` coordinates."""
    n, d = spec.n, spec.d

    def components(coords):
        x, y = list(coords[:n]), list(coords[n:])
        gb = spec.base.components(x)
        gf = spec.fiber.components(y)
        f = spec.warp.eval(x)
        _positive_warp(value_of(f))
        f2 = f * f
        rows = []
        for i in range(n):
            rows.append(list(gb[i]) + [0.0] * d)
        for i in range(d):
            rows.append([0.0] * n + [f2 * e for e in gf[i]])
        return rows

    return MetricField(n + d, components, label=spec.label)


def oneill_ricci(spec: WarpedProductSpec, base_point, fiber_point) -> RicciBlocks:
    """Ricci blocks from base/fiber curvature and derivatives of the warp."""
    n, d = spec.n, spec.d
    x = np.asarray(base_point, dtype=float)
    y = np.asarray(fiber_point, dtype=float)
    f = spec.warp.value(x)
    _positive_warp(f)

    ric_b = geometry.ricci(spec.base, x).ricci
    ric_f = geometry.ricci(spec.fiber, y).ricci
    hess = geometry.hessian_scalar(spec.base, spec.warp, x)
    lap = geometry.laplacian(spec.base, spec.warp, x)
    grad2 = geometry.gradient_norm_sq(spec.base, spec.warp, x)
    g_f = spec.fiber.value(y)

    base_block = ric_b - (d / f) * hess
    warp_term = lap / f + ((d - 1) * grad2 / (f * f) if d > 1 else 0.0)
    fiber_block = ric_f - (f * f) * g_f * warp_term
    return RicciBlocks(base_block, np.zeros((n, d)), fiber_block)


def direct_ricci(spec: WarpedProductSpec, base_point, fiber_point) -> np.ndarray:
    point = np.concatenate([np.asarray(base_point, float), np.asarray(fiber_point, float)])
    return geometry.ricci(assemble_product_metric(spec), point).ricci


def cross_check_ricci(spec: WarpedProductSpec, base_point, fiber_point) -> float:
    """``max |Ric_direct - Ric_oneill| / (1 + max |Ric_direct|)``."""
    direct = direct_ricci(spec, base_point, fiber_point)
    oneill = oneill_ricci(spec, base_point, fiber_point).full()
    return float(np.max(np.abs(direct - oneill)) / (1.0 + np.max(np.abs(direct))))
