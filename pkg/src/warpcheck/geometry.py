"""Intrinsic geometry of a coordinate-chart metric.

Metric components are evaluated once on seeded :class:`~warpcheck.jets.Jet2`
coordinates, which gives ``g``, ``dg`` and ``ddg`` exactly.  Christoffel
symbols, their derivatives and the Ricci tensor then follow from closed
formulas in those arrays; no finite differences are used here.

Index conventions (all arrays are numpy):

* ``dg[a, b, m]``        = d_m g_ab
* ``ddg[a, b, m, p]``    = d_m d_p g_ab
* ``gamma[k, i, j]``     = Gamma^k_ij
* ``dgamma[k, i, j, l]`` = d_l Gamma^k_ij
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, SingularityError
from .jets import Jet2, seed_point

__all__ = [
    "MetricField",
    "ScalarField",
    "CurvatureAtPoint",
    "invert",
    "metric_jets",
    "christoffel",
    "christoffel_and_derivative",
    "conformal_christoffel",
    "conformal_hessian",
    "ricci",
    "hessian_scalar",
    "gradient_norm_sq",
    "hyperbolic_gradient_norm_sq",
    "laplacian",
]

PIVOT_TOL = 1e-12
SYMMETRY_TOL = 1e-14


@dataclass(frozen=True)
class MetricField:
    """A chart metric.

    ``components`` maps a sequence of ``dim`` coordinates (floats or jets) to
    a ``dim x dim`` nested sequence of entries (floats or jets).
    """

    dim: int
    components: Callable[[Sequence], Sequence[Sequence]]
    label: str = "metric"

    def value(self, point) -> np.ndarray:
        point = _as_point(point, self.dim)
        rows = self.components(list(point))
        g = np.array([[_value(e) for e in row] for row in rows], dtype=float)
        _check_symmetric(g, self.label)
        return g


@dataclass(frozen=True)
class ScalarField:
    """A chart scalar ``eval(coords) -> float | Jet2``."""

    dim: int
    eval: Callable[[Sequence], object]
    label: str = "f"

    def value(self, point) -> float:
        point = _as_point(point, self.dim)
        return _value(self.eval(list(point)))

    def jet(self, point) -> Jet2:
        point = _as_point(point, self.dim)
        out = self.eval(seed_point(point))
        if isinstance(out, Jet2):
            return out
        return Jet2(float(out), np.zeros(self.dim), np.zeros((self.dim, self.dim)))

    def derivatives(self, point):
        """Return ``(value, gradient, hessian)`` of the field at ``point``."""
        j = self.jet(point)
        return j.value, j.gradient, j.hessian


@dataclass(frozen=True)
class CurvatureAtPoint:
    point: np.ndarray
    metric_value: np.ndarray
    metric_inverse: np.ndarray
    christoffel: np.ndarray
    christoffel_derivative: np.ndarray
    ricci: np.ndarray
    scalar_curvature: float
    normalized_scalar: float


def _value(e) -> float:
    return e.value if isinstance(e, Jet2) else float(e)


def _as_point(point, dim: int) -> np.ndarray:
    p = np.asarray(point, dtype=float).ravel()
    if p.shape[0] != dim:
        raise DomainError(f"expected a point with {dim} coordinates, got {p.shape[0]}")
    return p


def _check_symmetric(g: np.ndarray, label: str) -> None:
    asym = np.max(np.abs(g - g.T)) if g.size else 0.0
    if asym > SYMMETRY_TOL:
        raise DomainError(f"{label}: metric is not symmetric (max |g_ij - g_ji| = {asym:.3e})")


def invert(a: np.ndarray, pivot_tol: float = PIVOT_TOL) -> np.ndarray:
    """Inverse by Gauss-Jordan elimination with partial pivoting.

    Raises :class:`SingularityError` when a pivot falls below ``pivot_tol``.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    aug = np.hstack([a, np.eye(n)])
    for col in range(n):
        piv = col + int(np.argmax(np.abs(aug[col:, col])))
        if abs(aug[piv, col]) < pivot_tol:
            raise SingularityError(
                f"singular matrix: pivot {aug[piv, col]:.3e} in column {col}"
            )
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
        aug[col] /= aug[col, col]
        for row in range(n):
            if row != col and aug[row, col] != 0.0:
                aug[row] -= aug[row, col] * aug[col]
    return aug[:, n:]


def metric_jets(metric: MetricField, point):
    """Evaluate ``g``, ``dg`` and ``ddg`` at ``point`` in one jet pass."""
    n = metric.dim
    p = _as_point(point, n)
    rows = metric.components(seed_point(p))
    g = np.zeros((n, n))
    dg = np.zeros((n, n, n))
    ddg = np.zeros((n, n, n, n))
    for a in range(n):
        for b in range(n):
            e = rows[a][b]
            if isinstance(e, Jet2):
                g[a, b] = e.value
                dg[a, b] = e.gradient
                ddg[a, b] = e.hessian
            else:
                g[a, b] = float(e)
    _check_symmetric(g, metric.label)
    return g, dg, ddg


def _gamma_lower(dg):
    # Gamma_{l,ij} = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
    return 0.5 * (
        np.einsum("jli->lij", dg) + np.einsum("ilj->lij", dg) - np.einsum("ijl->lij", dg)
    )


def christoffel(metric: MetricField, point) -> np.ndarray:
    """Christoffel symbols ``gamma[k, i, j]`` of the Levi-Civita connection."""
    g, dg, _ = metric_jets(metric, point)
    return np.einsum("kl,lij->kij", invert(g), _gamma_lower(dg))


def christoffel_and_derivative(metric: MetricField, point):
    """Return ``(g, g_inv, gamma, dgamma)`` at ``point``."""
    g, dg, ddg = metric_jets(metric, point)
    ginv = invert(g)
    low = _gamma_lower(dg)
    dlow = 0.5 * (
        np.einsum("jlim->lijm", ddg) + np.einsum("iljm->lijm", ddg) - np.einsum("ijlm->lijm", ddg)
    )
    # d_m g^{kl} = -g^{ka} d_m g_ab g^{bl}
    dginv = -np.einsum("ka,abm,bl->klm", ginv, dg, ginv)
    gamma = np.einsum("kl,lij->kij", ginv, low)
    dgamma = np.einsum("klm,lij->kijm", dginv, low) + np.einsum("kl,lijm->kijm", ginv, dlow)
    return g, ginv, gamma, dgamma


def conformal_christoffel(phi: ScalarField, point) -> np.ndarray:
    """Christoffel symbols of ``g_ij = delta_ij / phi**2`` from the closed forms.

    With ``i, j, k`` pairwise distinct::

        Gamma^k_ij = 0            Gamma^i_ij = -phi_j / phi
        Gamma^k_ii = phi_k / phi  Gamma^i_ii = -phi_i / phi
    """
    v, grad, _ = phi.derivatives(point)
    if v == 0.0:
        raise SingularityError("conformal factor vanishes at the evaluation point")
    n = phi.dim
    q = grad / v
    gamma = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if i == j == k:
                    gamma[k, i, j] = -q[i]
                elif i == j:
                    gamma[k, i, j] = q[k]
                elif k == i:
                    gamma[k, i, j] = -q[j]
                elif k == j:
                    gamma[k, i, j] = -q[i]
    return gamma


def conformal_hessian(phi: ScalarField, f: ScalarField, point) -> np.ndarray:
    """Hessian of ``f`` for ``g = delta / phi**2`` via the closed-form expressions."""
    pv, pgrad, _ = phi.derivatives(point)
    if pv == 0.0:
        raise SingularityError("conformal factor vanishes at the evaluation point")
    _, fg, fh = f.derivatives(point)
    q = pgrad / pv
    hess = fh + np.outer(q, fg) + np.outer(fg, q)
    # diagonal: f_ii + 2 q_i f_i - sum_k q_k f_k
    np.fill_diagonal(hess, np.diag(fh) + 2.0 * q * fg - q @ fg)
    return hess


def ricci(metric: MetricField, point) -> CurvatureAtPoint:
    """Ricci tensor, scalar curvature and normalized scalar curvature at ``point``."""
    p = _as_point(point, metric.dim)
    g, ginv, gamma, dgamma = christoffel_and_derivative(metric, p)
    # Ric_ij = d_k G^k_ij - d_j G^k_ki + G^k_kl G^l_ij - G^k_jl G^l_ki
    ric = (
        np.einsum("kijk->ij", dgamma)
        - np.einsum("kkij->ij", dgamma)
        + np.einsum("kkl,lij->ij", gamma, gamma)
        - np.einsum("kjl,lki->ij", gamma, gamma)
    )
    n = metric.dim
    scalar = float(np.sum(ginv * ric))
    rho = scalar / (n * (n - 1)) if n > 1 else 0.0
    return CurvatureAtPoint(p, g, ginv, gamma, dgamma, ric, scalar, rho)


def hessian_scalar(metric: MetricField, f: ScalarField, point) -> np.ndarray:
    """Covariant Hessian ``f_{,ij} - Gamma^k_ij f_{,k}``."""
    gamma = christoffel(metric, point)
    _, grad, hess = f.derivatives(point)
    out = hess - np.einsum("kij,k->ij", gamma, grad)
    return 0.5 * (out + out.T)


def gradient_norm_sq(metric: MetricField, f: ScalarField, point) -> float:
    """``g^{ij} f_{,i} f_{,j}``."""
    ginv = invert(metric.value(point))
    _, grad, _ = f.derivatives(point)
    return float(grad @ ginv @ grad)


def hyperbolic_gradient_norm_sq(f: ScalarField, point) -> float:
    """Gradient norm for the upper half-space metric: ``x_n**2 * sum f_{,j}**2``."""
    p = _as_point(point, f.dim)
    if p[-1] <= 0.0:
        raise DomainError("upper half-space points need x_n > 0")
    _, grad, _ = f.derivatives(p)
    return float(p[-1] ** 2 * np.sum(grad**2))


def laplacian(metric: MetricField, f: ScalarField, point) -> float:
    """Laplace-Beltrami operator as the metric trace of the Hessian."""
    ginv = invert(metric.value(point))
    return float(np.sum(ginv * hessian_scalar(metric, f, point)))
