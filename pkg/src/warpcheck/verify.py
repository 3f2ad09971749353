"""Pointwise verifiers for Einstein metrics and warped-product conditions.

Matrix residuals are normalized by ``1 + max |target|`` so Ricci-flat and
curved cases share tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import geometry
from .errors import DomainError, DomainViolation, UsageError
from .geometry import MetricField, ScalarField
from .warped import WarpedProductSpec, oneill_ricci

__all__ = [
    "EinsteinReport",
    "ConditionIIIFit",
    "TheoremOneReport",
    "sample_points",
    "einstein_residual",
    "lambda_from_base",
    "check_condition_i",
    "check_laplacian",
    "check_condition_iii",
    "fiber_lambda_from_c",
    "check_pde_system",
    "corollary3_radius",
    "run_theorem1_suite",
]

DEFAULT_SEED = 42


def sample_points(n, count, seed=DEFAULT_SEED, xn_range=(0.5, 5.0), tangential_bound=3.0,
                  half_space=True):
    """Deterministic chart samples, shape ``(count, n)``.

    With ``half_space`` the last coordinate is drawn from ``xn_range``;
    otherwise every coordinate lies in ``[-tangential_bound, tangential_bound]``.
    """
    if count < 1:
        raise UsageError("sample count must be positive")
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-tangential_bound, tangential_bound, size=(count, n))
    if half_space:
        lo, hi = xn_range
        pts[:, -1] = rng.uniform(lo, hi, size=count)
    return pts


@dataclass
class EinsteinReport:
    lambda_estimate: float
    max_residual: float
    points_checked: int
    per_point: list = field(default_factory=list)
    lambda_spread: float = 0.0
    consistent: bool = True


def einstein_residual(metric: MetricField, points, tolerance: float = 1e-8) -> EinsteinReport:
    """Estimate ``lambda`` from ``tr(g^-1 Ric) / dim`` and measure ``Ric - lambda g``.

    Residuals use the mean estimate over all points, so a non-constant local
    estimate also shows up in ``max_residual``.  ``consistent`` is false when
    the standard deviation of the local estimates exceeds ``tolerance``.
    """
    points = [np.asarray(p, float) for p in points]
    if not points:
        raise UsageError("einstein_residual needs at least one point")
    curv = [geometry.ricci(metric, p) for p in points]
    local = np.array([c.scalar_curvature / metric.dim for c in curv])
    lam = float(np.mean(local))
    per_point = []
    for p, c, lam_p in zip(points, curv, local):
        g = c.metric_value
        res = np.max(np.abs(c.ricci - lam * g)) / (1.0 + np.max(np.abs(g)) * abs(lam))
        per_point.append((p, float(lam_p), float(res)))
    spread = float(np.std(local))
    return EinsteinReport(
        lambda_estimate=lam,
        max_residual=max(r for _, _, r in per_point),
        points_checked=len(points),
        per_point=per_point,
        lambda_spread=spread,
        consistent=spread <= tolerance,
    )


def lambda_from_base(n: int, d: int, lambda_B: float) -> float:
    """Einstein constant of the product: ``(1 + d/(n-1)) lambda_B``."""
    if n < 3:
        raise DomainError("the base must have dimension n >= 3")
    if d < 1:
        raise DomainError("fiber dimension must be >= 1")
    return (n - 1 + d) * lambda_B / (n - 1)


def check_condition_i(spec: WarpedProductSpec, lambda_, lambda_B, points) -> float:
    """Max of ``|Hess f - (f/d)(lambda_B - lambda) g_B| / (1 + max|g_B|)``."""
    d = spec.d
    worst = 0.0
    for p in points:
        f = spec.warp.value(p)
        if not f > 0.0:
            raise DomainViolation(f"warping function must be positive, got {f!r}")
        g = spec.base.value(p)
        hess = geometry.hessian_scalar(spec.base, spec.warp, p)
        target = (f / d) * (lambda_B - lambda_) * g
        worst = max(worst, float(np.max(np.abs(hess - target)) / (1.0 + np.max(np.abs(g)))))
    return worst


def check_laplacian(base: MetricField, f: ScalarField, rho: float, points) -> float:
    """Max of ``|lap f / n + rho f| / (1 + |rho f|)``."""
    n = base.dim
    worst = 0.0
    for p in points:
        fv = f.value(p)
        lap = geometry.laplacian(base, f, p)
        worst = max(worst, abs(lap / n + rho * fv) / (1.0 + abs(rho * fv)))
    return worst


@dataclass
class ConditionIIIFit:
    b_fit: float
    c_fit: float
    residual: float
    degenerate: bool = False


def check_condition_iii(base: MetricField, f: ScalarField, rho: float, points) -> ConditionIIIFit:
    """Least-squares fit of ``q = ||grad f||**2 + rho f**2`` to ``2 b f + c``."""
    points = list(points)
    if len(points) < 3:
        raise UsageError("condition (iii) fit needs at least 3 points")
    fv = np.array([f.value(p) for p in points])
    if np.any(fv <= 0.0):
        raise DomainViolation("warping function must be positive at every sample")
    q = np.array([geometry.gradient_norm_sq(base, f, p) for p in points]) + rho * fv**2
    if np.ptp(fv) <= 1e-12 * max(1.0, float(np.max(np.abs(fv)))):
        c = float(np.mean(q))
        return ConditionIIIFit(0.0, c, float(np.max(np.abs(q - c))), degenerate=True)
    design = np.column_stack([2.0 * fv, np.ones_like(fv)])
    (b, c), *_ = np.linalg.lstsq(design, q, rcond=None)
    resid = float(np.max(np.abs(q - design @ np.array([b, c]))))
    return ConditionIIIFit(float(b), float(c), resid)


def fiber_lambda_from_c(d: int, c: float) -> float:
    if d < 1:
        raise DomainError("fiber dimension must be >= 1")
    return 0.0 if d == 1 else (d - 1) * c


def check_pde_system(f: ScalarField, points) -> np.ndarray:
    """Max absolute residual of the four second-order equations on ``H^n``.

    Families, with ``i, j`` tangential (``!= n``) and ``i != j``::

        f_ij = 0
        x_n f_in + f_i = 0
        x_n**2 f_ii - x_n f_n - f = 0
        x_n**2 f_nn + x_n f_n - f = 0
    """
    n = f.dim
    out = np.zeros(4)
    for p in points:
        p = np.asarray(p, float)
        xn = p[-1]
        if xn <= 0.0:
            raise DomainError("the PDE system lives on x_n > 0")
        v, g, h = f.derivatives(p)
        t = n - 1
        for i in range(t):
            for j in range(t):
                if i != j:
                    out[0] = max(out[0], abs(h[i, j]))
            out[1] = max(out[1], abs(xn * h[i, t] + g[i]))
            out[2] = max(out[2], abs(xn * xn * h[i, i] - xn * g[t] - v))
        out[3] = max(out[3], abs(xn * xn * h[t, t] + xn * g[t] - v))
    return out


def corollary3_radius(lambda_B: float, lambda_: float, d: int) -> Optional[float]:
    """Radius ``r`` when ``(lambda_B - lambda)/d = -r**2 < 0``, else ``None``."""
    if d < 1:
        raise DomainError("fiber dimension must be >= 1")
    k = (lambda_B - lambda_) / d
    if k < 0:
        return math.sqrt(-k)
    return None


@dataclass
class TheoremOneReport:
    lambda_: float
    lambda_B: float
    lambda_F: float
    rho: float
    b_fit: float
    c_fit: float
    residual_i: float
    residual_ii: float
    residual_iii: float
    residual_iv: float
    lambda_predicted: float = float("nan")
    laplacian_residual: float = 0.0
    rho_measured: float = float("nan")
    rho_flag: bool = False

    @property
    def max_residual(self) -> float:
        return max(self.residual_i, self.residual_ii, self.residual_iii, self.residual_iv)

    def passed(self, tolerance: float = 1e-6) -> bool:
        return self.max_residual <= tolerance


def _oneill_lambda(spec, x, y) -> float:
    blocks = oneill_ricci(spec, x, y)
    f = spec.warp.value(x)
    gb = spec.base.value(x)
    gf = (f * f) * spec.fiber.value(y)
    tr = np.sum(geometry.invert(gb) * blocks.base_block) + np.sum(
        geometry.invert(gf) * blocks.fiber_block
    )
    return float(tr / (spec.n + spec.d))


def run_theorem1_suite(spec: WarpedProductSpec, lambda_B: float, lambda_F: float, points,
                       fiber_point=None) -> TheoremOneReport:
    """Evaluate the four conditions characterizing an Einstein warped product.

    * (i)   Hessian proportionality, folded together with ``lap f / n = -rho f``
    * (ii)  ``max |lambda_local - (1 + d/(n-1)) lambda_B|`` where
            ``lambda_local = tr(g^-1 Ric) / (n + d)`` from the O'Neill blocks
    * (iii) quadratic fit of ``||grad f||**2 + rho f**2``; also penalizes ``|b|``
    * (iv)  ``|lambda_F - (d-1) c|``
    """
    points = [np.asarray(p, float) for p in points]
    if not points:
        raise UsageError("run_theorem1_suite needs at least one point")
    n, d = spec.n, spec.d
    if fiber_point is None:
        fiber_point = np.zeros(d)
        fiber_point[-1] = 1.0
    rho = lambda_B / (n - 1)
    lam = lambda_from_base(n, d, lambda_B)

    res_hess = check_condition_i(spec, lam, lambda_B, points)
    res_lap = check_laplacian(spec.base, spec.warp, rho, points)
    local = np.array([_oneill_lambda(spec, p, fiber_point) for p in points])
    res_ii = float(np.max(np.abs(local - lam)))

    if len(points) >= 3:
        fit = check_condition_iii(spec.base, spec.warp, rho, points)
    else:
        q = [geometry.gradient_norm_sq(spec.base, spec.warp, p) + rho * spec.warp.value(p) ** 2
             for p in points]
        fit = ConditionIIIFit(0.0, float(np.mean(q)), float(np.ptp(q)), degenerate=True)
    res_iii = max(fit.residual, abs(fit.b_fit))
    res_iv = abs(lambda_F - fiber_lambda_from_c(d, fit.c_fit))

    rho_measured = float(np.mean([geometry.ricci(spec.base, p).normalized_scalar for p in points]))
    return TheoremOneReport(
        lambda_=float(np.mean(local)),
        lambda_B=lambda_B,
        lambda_F=lambda_F,
        rho=rho,
        b_fit=fit.b_fit,
        c_fit=fit.c_fit,
        residual_i=max(res_hess, res_lap),
        residual_ii=res_ii,
        residual_iii=res_iii,
        residual_iv=res_iv,
        lambda_predicted=lam,
        laplacian_residual=res_lap,
        rho_measured=rho_measured,
        rho_flag=abs(rho_measured - rho) > 1e-8 * (1.0 + abs(rho)),
    )
