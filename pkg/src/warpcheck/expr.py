"""Restricted arithmetic expressions over chart variables ``x1 .. xn``.

Only numeric literals, the variables, ``+ - * /``, integer powers ``**k`` and
``sqrt(...)`` are accepted.  The parsed expression becomes a
:class:`~warpcheck.geometry.ScalarField` that works on floats and jets alike.
"""

from __future__ import annotations

import ast
import re

from . import jets
from .errors import ValidationError
from .geometry import ScalarField

__all__ = ["parse_expression"]

_VAR = re.compile(r"^x([1-9][0-9]*)$")
_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: _divide(a, b),
}


def _divide(a, b):
    if isinstance(a, jets.Jet2) or isinstance(b, jets.Jet2):
        return a / b
    return a * jets.reciprocal(b)


def _int_exponent(node) -> int:
    sign = 1
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        sign = -1 if isinstance(node.op, ast.USub) else 1
        node = node.operand
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return sign * node.value
    raise ValidationError("exponents must be integer literals")


def _compile(node, n):
    if isinstance(node, ast.Expression):
        return _compile(node.body, n)
    if isinstance(node, ast.Constant):
        if type(node.value) not in (int, float):
            raise ValidationError(f"unsupported literal {node.value!r}")
        c = float(node.value)
        return lambda x: c
    if isinstance(node, ast.Name):
        m = _VAR.match(node.id)
        if not m:
            raise ValidationError(
                f"unknown name {node.id!r}; variables are x1..x{n} (1-indexed)"
            )
        k = int(m.group(1))
        if k > n:
            raise ValidationError(f"variable {node.id} exceeds the base dimension {n}")
        return lambda x: x[k - 1]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _compile(node.operand, n)
        if isinstance(node.op, ast.USub):
            return lambda x: -inner(x)
        return inner
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            base = _compile(node.left, n)
            k = _int_exponent(node.right)
            return lambda x: jets.power(base(x), k)
        op = _BINOPS.get(type(node.op))
        if op is None:
            raise ValidationError(f"unsupported operator {type(node.op).__name__}")
        left, right = _compile(node.left, n), _compile(node.right, n)
        return lambda x: op(left(x), right(x))
    if isinstance(node, ast.Call):
        if not (isinstance(node.func, ast.Name) and node.func.id == "sqrt"):
            raise ValidationError("the only supported function is sqrt")
        if len(node.args) != 1 or node.keywords:
            raise ValidationError("sqrt takes exactly one argument")
        arg = _compile(node.args[0], n)
        return lambda x: jets.sqrt(arg(x))
    raise ValidationError(f"unsupported syntax: {type(node).__name__}")


def parse_expression(text: str, n: int) -> ScalarField:
    """Compile ``text`` into a scalar field on ``n`` chart variables."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ValidationError(f"cannot parse warp expression {text!r}: {exc.msg}") from None
    fn = _compile(tree, n)
    return ScalarField(n, fn, label=text.strip())
