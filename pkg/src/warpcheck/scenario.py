"""Scenario files, scenario execution and report serialization.

A scenario names a base model, a fiber model, a warping function and the
checks to run over deterministic samples.  Running it yields a
:class:`Report` that serializes to stable-key-ordered JSON or a text table.
"""

from __future__ import annotations

import json
import math
import os
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import geometry, models, verify
from .errors import (
    ParseError,
    UsageError,
    ValidationError,
    WarpcheckError,
)
from .expr import parse_expression
from .warped import WarpedProductSpec, assemble_product_metric, cross_check_ricci

__all__ = [
    "SCENARIO_SCHEMA",
    "REPORT_SCHEMA",
    "CHECKS",
    "MODEL_KINDS",
    "ModelRef",
    "WarpRef",
    "Sampling",
    "Scenario",
    "Report",
    "scenario_from_dict",
    "parse_scenario",
    "run_scenario",
    "emit_report",
    "params_report",
]

SCENARIO_SCHEMA = "warpcheck-scenario/1"
REPORT_SCHEMA = "warpcheck-report/1"
CHECKS = ("einstein", "theorem1", "pde", "corollary4", "corollary5", "crosscheck")
DEFAULT_TOLERANCES = {
    "einstein": 1e-8,
    "theorem1": 1e-6,
    "pde": 1e-8,
    "corollary4": 1e-8,
    "corollary5": 1e-8,
    "crosscheck": 1e-8,
}
MODEL_KINDS = {
    "hyperbolic": "upper half-space delta_ij / x_n^2, Einstein constant -(dim-1)",
    "flat": "cartesian identity metric, Einstein constant 0",
    "space_form": "constant curvature model with Einstein constant 'lambda' "
                  "(sphere if > 0, flat if 0, scaled half-space if < 0)",
}
FIBER_XN_RANGE = (0.5, 2.0)
FIBER_BOUND = 1.0

_TOP_KEYS = {"schema", "name", "description", "base", "fiber", "warp", "checks",
             "sampling", "tolerances"}
_REQUIRED = ("schema", "name", "base", "fiber", "warp", "checks")


@dataclass(frozen=True)
class ModelRef:
    kind: str
    dim: int
    lam: Optional[float] = None

    @property
    def einstein_constant(self) -> float:
        if self.kind == "hyperbolic":
            return -(self.dim - 1.0)
        if self.kind == "flat":
            return 0.0
        return float(self.lam)

    @property
    def half_space(self) -> bool:
        return self.kind == "hyperbolic" or (self.kind == "space_form" and self.lam < 0)

    def build(self):
        if self.kind == "hyperbolic":
            return models.hyperbolic_metric(self.dim)
        if self.kind == "flat":
            return models.flat_metric(self.dim)
        return models.space_form(models.SpaceFormSpec(self.dim, self.lam))

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "dim": self.dim}
        if self.kind == "space_form":
            out["lambda"] = self.lam
        return out


@dataclass(frozen=True)
class WarpRef:
    family: Optional[str] = None
    params: Optional[models.WarpParams] = None
    expression: Optional[str] = None

    def build(self, n: int):
        if self.family == "theorem2":
            return models.theorem2_warp(self.params)
        return parse_expression(self.expression, n)

    def to_dict(self) -> dict:
        if self.family == "theorem2":
            p = self.params
            return {"family": "theorem2",
                    "params": {"a": p.a, "b": p.b, "b_vec": list(p.b_vec), "c_vec": list(p.c_vec)}}
        return {"expression": self.expression}


@dataclass(frozen=True)
class Sampling:
    count: int = 100
    seed: int = verify.DEFAULT_SEED
    x_n_range: tuple = (0.5, 5.0)
    tangential_bound: float = 3.0

    def to_dict(self) -> dict:
        return {"count": self.count, "seed": self.seed,
                "x_n_range": list(self.x_n_range), "tangential_bound": self.tangential_bound}


@dataclass(frozen=True)
class Scenario:
    name: str
    base: ModelRef
    fiber: ModelRef
    warp: WarpRef
    checks: tuple
    sampling: Sampling = field(default_factory=Sampling)
    tolerances: dict = field(default_factory=dict)
    description: str = ""

    def tolerance(self, check: str) -> float:
        return float(self.tolerances.get(check, DEFAULT_TOLERANCES[check]))

    def to_dict(self) -> dict:
        out = {
            "schema": SCENARIO_SCHEMA,
            "name": self.name,
            "base": self.base.to_dict(),
            "fiber": self.fiber.to_dict(),
            "warp": self.warp.to_dict(),
            "checks": list(self.checks),
            "sampling": self.sampling.to_dict(),
            "tolerances": {k: self.tolerance(k) for k in self.checks},
        }
        if self.description:
            out["description"] = self.description
        return out


# -- parsing ----------------------------------------------------------------


def _require(cond, msg):
    if not cond:
        raise ValidationError(msg)


def _number(value, where) -> float:
    _require(isinstance(value, (int, float)) and not isinstance(value, bool)
             and math.isfinite(value), f"{where} must be a finite number")
    return float(value)


def _integer(value, where) -> int:
    _require(isinstance(value, int) and not isinstance(value, bool), f"{where} must be an integer")
    return value


def _keys(obj, allowed, where):
    _require(isinstance(obj, dict), f"{where} must be an object")
    extra = sorted(set(obj) - set(allowed))
    _require(not extra, f"{where}: unknown key(s) {', '.join(extra)}")


def _model(obj, where) -> ModelRef:
    _keys(obj, {"kind", "dim", "lambda"}, where)
    kind = obj.get("kind")
    _require(kind in MODEL_KINDS, f"{where}.kind: unknown model kind {kind!r}")
    dim = _integer(obj.get("dim"), f"{where}.dim")
    _require(dim >= 1, f"{where}.dim must be >= 1")
    lam = None
    if kind == "space_form":
        _require("lambda" in obj, f"{where}.lambda is required for space_form")
        lam = _number(obj["lambda"], f"{where}.lambda")
        _require(dim > 1 or lam == 0.0, f"{where}.lambda must be 0 for a 1-dimensional model")
    else:
        _require("lambda" not in obj, f"{where}.lambda is only valid for space_form")
    if kind == "hyperbolic":
        _require(dim >= 2, f"{where}.dim must be >= 2 for hyperbolic")
    return ModelRef(kind, dim, lam)


def _warp(obj, n) -> WarpRef:
    _require(isinstance(obj, dict), "warp must be an object")
    if "family" in obj:
        _keys(obj, {"family", "params"}, "warp")
        _require(obj["family"] == "theorem2", f"warp.family: unknown family {obj['family']!r}")
        p = obj.get("params")
        _keys(p, {"a", "b", "b_vec", "c_vec"}, "warp.params")
        a = _number(p.get("a", 0.0), "warp.params.a")
        b = _number(p.get("b", 0.0), "warp.params.b")
        bv = p.get("b_vec", [0.0] * (n - 1))
        cv = p.get("c_vec", [0.0] * (n - 1))
        for key, vec in (("b_vec", bv), ("c_vec", cv)):
            _require(isinstance(vec, list) and len(vec) == n - 1,
                     f"warp.params.{key} must be a list of length base.dim - 1 = {n - 1}")
        bv = [_number(v, "warp.params.b_vec[]") for v in bv]
        cv = [_number(v, "warp.params.c_vec[]") for v in cv]
        return WarpRef(family="theorem2", params=models.WarpParams(a, b, tuple(bv), tuple(cv), n))
    _keys(obj, {"expression"}, "warp")
    text = obj.get("expression")
    _require(isinstance(text, str) and text.strip(), "warp needs 'family' or 'expression'")
    parse_expression(text, n)  # validates variables and syntax
    return WarpRef(expression=text)


def _sampling(obj, env) -> Sampling:
    obj = {} if obj is None else obj
    _keys(obj, {"count", "seed", "x_n_range", "tangential_bound"}, "sampling")
    count = _integer(obj.get("count", 100), "sampling.count")
    _require(count >= 0, "sampling.count must be >= 0")
    if "seed" in obj:
        seed = _integer(obj["seed"], "sampling.seed")
    elif env.get("WARPCHECK_SEED"):
        try:
            seed = int(env["WARPCHECK_SEED"])
        except ValueError:
            raise ValidationError("WARPCHECK_SEED must be an integer") from None
    else:
        seed = verify.DEFAULT_SEED
    rng = obj.get("x_n_range", [0.5, 5.0])
    _require(isinstance(rng, list) and len(rng) == 2, "sampling.x_n_range must be [lo, hi]")
    lo, hi = (_number(v, "sampling.x_n_range[]") for v in rng)
    _require(0 < lo <= hi, "sampling.x_n_range must satisfy 0 < lo <= hi")
    bound = _number(obj.get("tangential_bound", 3.0), "sampling.tangential_bound")
    _require(bound >= 0, "sampling.tangential_bound must be >= 0")
    return Sampling(count, seed, (lo, hi), bound)


def scenario_from_dict(doc, env=None) -> Scenario:
    """Validate a decoded scenario document and fill in defaults."""
    env = os.environ if env is None else env
    _keys(doc, _TOP_KEYS, "scenario")
    for key in _REQUIRED:
        _require(key in doc, f"missing required key {key!r}")
    _require(doc["schema"] == SCENARIO_SCHEMA,
             f"schema must be {SCENARIO_SCHEMA!r}, got {doc['schema']!r}")
    _require(isinstance(doc["name"], str) and doc["name"], "name must be a non-empty string")
    base = _model(doc["base"], "base")
    fiber = _model(doc["fiber"], "fiber")
    checks = doc["checks"]
    _require(isinstance(checks, list), "checks must be a list")
    for c in checks:
        _require(c in CHECKS, f"checks: unknown check {c!r}")
    _require(len(set(checks)) == len(checks), "checks: duplicate entries")
    if "theorem1" in checks:
        _require(base.dim >= 3, "base.dim must be >= 3 for the theorem1 check")
    _require(base.dim >= 3, "base.dim must be >= 3 for a warped product scenario")
    warp = _warp(doc["warp"], base.dim)
    for c in ("pde", "corollary4", "corollary5"):
        if c in checks:
            _require(base.kind == "hyperbolic", f"check {c!r} requires a hyperbolic base")
    for c in ("corollary4", "corollary5"):
        if c in checks:
            _require(warp.family == "theorem2", f"check {c!r} requires the theorem2 warp family")
    tol = doc.get("tolerances", {})
    _keys(tol, set(CHECKS), "tolerances")
    tol = {k: _number(v, f"tolerances.{k}") for k, v in tol.items()}
    desc = doc.get("description", "")
    _require(isinstance(desc, str), "description must be a string")
    return Scenario(doc["name"], base, fiber, warp, tuple(checks),
                    _sampling(doc.get("sampling"), env), tol, desc)


def parse_scenario(path, env=None) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc.msg} (line {exc.lineno}, column {exc.colno})",
                         exc.lineno, exc.colno) from None
    return scenario_from_dict(doc, env)


# -- running ----------------------------------------------------------------


@dataclass
class Report:
    schema: str
    scenario: dict
    derived_constants: dict
    checks: list
    timings: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"schema": self.schema, "scenario": self.scenario,
                "derived_constants": self.derived_constants, "checks": self.checks,
                "timings": self.timings}

    @classmethod
    def from_dict(cls, doc) -> Report:
        return cls(doc["schema"], doc["scenario"], doc["derived_constants"], doc["checks"],
                   doc.get("timings", {}))

    @property
    def all_passed(self) -> bool:
        return all(c["pass"] for c in self.checks)

    @property
    def exit_status(self) -> int:
        if any(c.get("error") for c in self.checks):
            return 3
        return 0 if self.all_passed else 1


def _clean(x):
    """Convert numpy scalars/arrays to JSON-safe Python values (non-finite -> None)."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_clean(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


def _samples(scn: Scenario):
    s = scn.sampling
    if s.count < 1:
        raise UsageError("sampling.count must be positive")
    base = verify.sample_points(scn.base.dim, s.count, s.seed, s.x_n_range,
                                s.tangential_bound, scn.base.half_space)
    fiber = verify.sample_points(scn.fiber.dim, s.count, s.seed + 1, FIBER_XN_RANGE,
                                 FIBER_BOUND, scn.fiber.half_space)
    return base, fiber


def _check_einstein(ctx):
    pts = np.hstack([ctx["base_pts"], ctx["fiber_pts"]])
    rep = verify.einstein_residual(ctx["product"], pts, ctx["tol"])
    return rep.max_residual, {"lambda_estimate": rep.lambda_estimate,
                              "lambda_spread": rep.lambda_spread}, True


def _check_theorem1(ctx):
    rep = verify.run_theorem1_suite(ctx["spec"], ctx["lambda_B"], ctx["lambda_F"],
                                    ctx["base_pts"], ctx["fiber_pts"][0])
    details = {"lambda": rep.lambda_, "lambda_predicted": rep.lambda_predicted,
               "rho": rep.rho, "rho_measured": rep.rho_measured, "b_fit": rep.b_fit,
               "c_fit": rep.c_fit, "residual_i": rep.residual_i, "residual_ii": rep.residual_ii,
               "residual_iii": rep.residual_iii, "residual_iv": rep.residual_iv,
               "laplacian_residual": rep.laplacian_residual}
    return rep.max_residual, details, True


def _check_pde(ctx):
    fam = verify.check_pde_system(ctx["warp"], ctx["base_pts"])
    return float(np.max(fam)), {"families": fam}, True


def _check_crosscheck(ctx):
    spec = ctx["spec"]
    worst = max(cross_check_ricci(spec, x, y) for x, y in zip(ctx["base_pts"], ctx["fiber_pts"]))
    return worst, {}, True


def _identity_residual(ctx, c):
    h, f = ctx["base"], ctx["warp"]
    return max(abs(geometry.gradient_norm_sq(h, f, p) - f.value(p) ** 2 - c)
               for p in ctx["base_pts"])


def _check_corollary4(ctx):
    res = models.corollary4_check(ctx["params"], ctx["d"])
    sampled = _identity_residual(ctx, res.c)
    mismatch = abs(ctx["lambda_F"] - res.lambda_F)
    details = {"globally_positive": res.globally_positive, "c": res.c,
               "lambda_F_required": res.lambda_F, "identity_residual": sampled}
    return max(sampled, mismatch), details, res.globally_positive


def _check_corollary5(ctx):
    res = models.corollary5_check(ctx["params"], ctx["d"])
    sampled = _identity_residual(ctx, 0.0)
    details = {"applies": res.applies, "identity_residual": sampled}
    return max(sampled, abs(ctx["lambda_F"])), details, res.applies


_RUNNERS = {
    "einstein": _check_einstein,
    "theorem1": _check_theorem1,
    "pde": _check_pde,
    "corollary4": _check_corollary4,
    "corollary5": _check_corollary5,
    "crosscheck": _check_crosscheck,
}


def _derived(scn, ctx):
    n, d = scn.base.dim, scn.fiber.dim
    lam_b = scn.base.einstein_constant
    out = {
        "lambda_B": lam_b,
        "lambda_F": scn.fiber.einstein_constant,
        "lambda": verify.lambda_from_base(n, d, lam_b),
        "rho": lam_b / (n - 1),
        "c": None,
        "n": n,
        "d": d,
    }
    if scn.warp.family == "theorem2" and scn.base.kind == "hyperbolic":
        out["c"] = models.warp_constant(scn.warp.params)
    else:
        try:
            out["c"] = verify.check_condition_iii(ctx["base"], ctx["warp"], out["rho"],
                                                  ctx["base_pts"]).c_fit
        except (WarpcheckError, ArithmeticError):
            pass
    return out


def run_scenario(scn: Scenario) -> Report:
    """Run every requested check; a failing or erroring check never aborts the rest."""
    t0 = time.perf_counter()
    base_pts, fiber_pts = _samples(scn)
    base, fiber = scn.base.build(), scn.fiber.build()
    warp = scn.warp.build(scn.base.dim)
    spec = WarpedProductSpec(base, fiber, warp)
    ctx = {
        "base": base, "fiber": fiber, "warp": warp, "spec": spec,
        "product": assemble_product_metric(spec),
        "base_pts": base_pts, "fiber_pts": fiber_pts,
        "lambda_B": scn.base.einstein_constant, "lambda_F": scn.fiber.einstein_constant,
        "params": scn.warp.params, "d": scn.fiber.dim,
    }
    derived = _derived(scn, ctx)
    results, timings = [], {}
    for name in scn.checks:
        tol = scn.tolerance(name)
        ctx["tol"] = tol
        t = time.perf_counter()
        entry = {"name": name, "tolerance": tol}
        try:
            residual, details, hypothesis = _RUNNERS[name](ctx)
            entry.update(residual=residual, details=details,
                         **{"pass": bool(hypothesis and residual <= tol)})
            if not hypothesis:
                entry["note"] = "hypothesis not met"
        except (WarpcheckError, ArithmeticError, np.linalg.LinAlgError) as exc:
            entry.update(residual=None, details={},
                         error=f"{type(exc).__name__}: {exc}", **{"pass": False})
        results.append(entry)
        timings[name] = time.perf_counter() - t
    timings["total"] = time.perf_counter() - t0
    return Report(REPORT_SCHEMA, _clean(scn.to_dict()), _clean(derived), _clean(results),
                  _clean(timings))


def params_report(scn: Scenario) -> dict:
    """Corollary predicates only; no curvature is evaluated."""
    if scn.warp.family != "theorem2":
        raise ValidationError("check-params requires the theorem2 warp family")
    d = scn.fiber.dim
    c4 = models.corollary4_check(scn.warp.params, d)
    c5 = models.corollary5_check(scn.warp.params, d)
    return _clean({
        "name": scn.name,
        "corollary4": {"globally_positive": c4.globally_positive, "c": c4.c,
                       "lambda_F": c4.lambda_F},
        "corollary5": {"applies": c5.applies, "lambda_F": c5.lambda_F},
        "fiber_lambda": scn.fiber.einstein_constant,
    })


# -- output -----------------------------------------------------------------


def _fmt(x) -> str:
    return "-" if x is None else f"{x:.3e}"


def emit_report(report: Report, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n").encode()
    if fmt != "text":
        raise UsageError(f"unknown report format {fmt!r}")
    lines = [f"scenario: {report.scenario.get('name', '?')}", "",
             f"{'check':<12} {'residual':>11} {'tolerance':>11}  result"]
    for c in report.checks:
        status = "PASS" if c["pass"] else ("ERROR" if c.get("error") else "FAIL")
        lines.append(f"{c['name']:<12} {_fmt(c['residual']):>11} {_fmt(c['tolerance']):>11}  {status}")
        if c.get("error"):
            lines.append(f"    {c['error']}")
        elif c.get("note"):
            lines.append(f"    {c['note']}")
    lines += ["", "derived constants:"]
    for key in ("lambda", "lambda_B", "lambda_F", "rho", "c"):
        v = report.derived_constants.get(key)
        lines.append(f"  {key} = {'n/a' if v is None else format(v, '.12g')}")
    return ("\n".join(lines) + "\n").encode()
