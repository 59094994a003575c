"""Small expression language with second-order Taylor (2-jet) evaluation.

Expressions are ordinary Python arithmetic over the chart parameters ``u``
and ``v``, named constants, and a fixed set of elementary functions::

    >>> e = compile_expr("u**2 - v**2")
    >>> e.jet(0.5, 0.25).duu
    2.0

Evaluation propagates value, first and second partials together (forward
mode), so charts written in this language get exact analytic jets without
any symbolic differentiation.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass
from typing import Callable, Mapping

from .errors import SpecError


@dataclass(frozen=True)
class Taylor2:
    """Value and partials up to order two of a scalar function of (u, v)."""

    val: float
    du: float = 0.0
    dv: float = 0.0
    duu: float = 0.0
    duv: float = 0.0
    dvv: float = 0.0

    @staticmethod
    def const(c: float) -> "Taylor2":
        return Taylor2(float(c))

    def __add__(self, o):
        o = _lift(o)
        return Taylor2(self.val + o.val, self.du + o.du, self.dv + o.dv,
                       self.duu + o.duu, self.duv + o.duv, self.dvv + o.dvv)

    __radd__ = __add__

    def __neg__(self):
        return Taylor2(-self.val, -self.du, -self.dv, -self.duu, -self.duv, -self.dvv)

    def __sub__(self, o):
        return self + (-_lift(o))

    def __rsub__(self, o):
        return _lift(o) + (-self)

    def __mul__(self, o):
        o = _lift(o)
        a, b = self, o
        return Taylor2(
            a.val * b.val,
            a.du * b.val + a.val * b.du,
            a.dv * b.val + a.val * b.dv,
            a.duu * b.val + 2.0 * a.du * b.du + a.val * b.duu,
            a.duv * b.val + a.du * b.dv + a.dv * b.du + a.val * b.duv,
            a.dvv * b.val + 2.0 * a.dv * b.dv + a.val * b.dvv,
        )

    __rmul__ = __mul__

    def __truediv__(self, o):
        return self * _lift(o).apply(*_recip(_lift(o).val))

    def __rtruediv__(self, o):
        return _lift(o) / self

    def apply(self, f0: float, f1: float, f2: float) -> "Taylor2":
        """Compose with a scalar function given its value and two derivatives at self.val."""
        a = self
        return Taylor2(
            f0,
            f1 * a.du,
            f1 * a.dv,
            f2 * a.du * a.du + f1 * a.duu,
            f2 * a.du * a.dv + f1 * a.duv,
            f2 * a.dv * a.dv + f1 * a.dvv,
        )


def _lift(x) -> Taylor2:
    if isinstance(x, Taylor2):
        return x
    return Taylor2.const(x)


def _recip(x):
    if x == 0.0:
        raise ZeroDivisionError("division by zero in expression")
    return 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x)


def _power(a: Taylor2, p: float) -> Taylor2:
    x = a.val
    if float(p).is_integer() and p >= 0:
        n = int(p)
        f0 = x ** n
        f1 = n * x ** (n - 1) if n >= 1 else 0.0
        f2 = n * (n - 1) * x ** (n - 2) if n >= 2 else 0.0
        return a.apply(f0, f1, f2)
    if x <= 0.0 and not float(p).is_integer():
        raise ValueError("non-integer power of a non-positive base")
    return a.apply(x ** p, p * x ** (p - 1), p * (p - 1) * x ** (p - 2))


def _sqrt(x):
    if x <= 0.0:
        raise ValueError("sqrt of a non-positive value")
    r = math.sqrt(x)
    return r, 0.5 / r, -0.25 / (r * x)


def _log(x):
    if x <= 0.0:
        raise ValueError("log of a non-positive value")
    return math.log(x), 1.0 / x, -1.0 / (x * x)


def _tan(x):
    t = math.tan(x)
    s = 1.0 + t * t
    return t, s, 2.0 * t * s


def _tanh(x):
    t = math.tanh(x)
    s = 1.0 - t * t
    return t, s, -2.0 * t * s


def _atan(x):
    s = 1.0 / (1.0 + x * x)
    return math.atan(x), s, -2.0 * x * s * s


_FUNCS: dict[str, Callable[[float], tuple[float, float, float]]] = {
    "sin": lambda x: (math.sin(x), math.cos(x), -math.sin(x)),
    "cos": lambda x: (math.cos(x), -math.sin(x), -math.cos(x)),
    "tan": _tan,
    "exp": lambda x: (math.exp(x),) * 3,
    "log": _log,
    "sqrt": _sqrt,
    "sinh": lambda x: (math.sinh(x), math.cosh(x), math.sinh(x)),
    "cosh": lambda x: (math.cosh(x), math.sinh(x), math.cosh(x)),
    "tanh": _tanh,
    "atan": _atan,
}

_CONSTS = {"pi": math.pi, "e": math.e}

_Node = Callable[[Taylor2, Taylor2], Taylor2]


class Expr:
    """A compiled expression in the variables ``u`` and ``v``."""

    def __init__(self, source: str, fn: _Node):
        self.source = source
        self._fn = fn

    def jet(self, u: float, v: float = 0.0) -> Taylor2:
        return self._fn(Taylor2(float(u), 1.0, 0.0), Taylor2(float(v), 0.0, 1.0))

    def __call__(self, u: float, v: float = 0.0) -> float:
        return self.jet(u, v).val

    def derivs_u(self, u: float) -> tuple[float, float, float]:
        """(value, d/du, d²/du²) treating the expression as a function of u alone."""
        t = self.jet(u, 0.0)
        return t.val, t.du, t.duu

    def __repr__(self):
        return f"Expr({self.source!r})"


def compile_expr(source: str, constants: Mapping[str, float] | None = None,
                 variables: tuple[str, str] = ("u", "v")) -> Expr:
    """Parse ``source`` into an :class:`Expr`.

    ``variables`` renames the two slots, e.g. ``("v", "_")`` makes ``v``
    the first variable for curve data given in terms of ``v``.
    Raises :class:`SpecError` on anything outside the supported grammar.
    """
    if not isinstance(source, str):
        source = repr(source)
    consts = dict(_CONSTS)
    if constants:
        for k, val in constants.items():
            consts[k] = float(val)
    try:
        tree = ast.parse(source.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise SpecError(f"cannot parse expression {source!r}: {exc.msg}") from None
    fn = _build(tree.body, consts, variables, source)
    return Expr(source, fn)


def _build(node, consts, variables, source) -> _Node:
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        c = Taylor2.const(node.value)
        return lambda u, v: c
    if isinstance(node, ast.Name):
        if node.id == variables[0]:
            return lambda u, v: u
        if node.id == variables[1]:
            return lambda u, v: v
        if node.id in consts:
            c = Taylor2.const(consts[node.id])
            return lambda u, v: c
        raise SpecError(f"unknown name {node.id!r} in expression {source!r}")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _build(node.operand, consts, variables, source)
        if isinstance(node.op, ast.USub):
            return lambda u, v: -inner(u, v)
        return inner
    if isinstance(node, ast.BinOp):
        lhs = _build(node.left, consts, variables, source)
        rhs = _build(node.right, consts, variables, source)
        op = node.op
        if isinstance(op, ast.Add):
            return lambda u, v: lhs(u, v) + rhs(u, v)
        if isinstance(op, ast.Sub):
            return lambda u, v: lhs(u, v) - rhs(u, v)
        if isinstance(op, ast.Mult):
            return lambda u, v: lhs(u, v) * rhs(u, v)
        if isinstance(op, ast.Div):
            return lambda u, v: lhs(u, v) / rhs(u, v)
        if isinstance(op, ast.Pow):
            return _build_pow(lhs, rhs, node.right, consts)
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
        name = node.func.id
        if name in _FUNCS and len(node.args) == 1:
            f = _FUNCS[name]
            arg = _build(node.args[0], consts, variables, source)

            def call(u, v, f=f, arg=arg):
                a = arg(u, v)
                return a.apply(*f(a.val))

            return call
    raise SpecError(f"unsupported construct in expression {source!r}: {ast.dump(node)[:60]}")


def _build_pow(lhs, rhs, rnode, consts) -> _Node:
    exponent = _constant_value(rnode, consts)
    if exponent is not None:
        return lambda u, v: _power(lhs(u, v), exponent)

    def general(u, v):
        a = lhs(u, v)
        loga = a.apply(*_log(a.val))
        prod = rhs(u, v) * loga
        return prod.apply(*(math.exp(prod.val),) * 3)

    return general


def _constant_value(node, consts):
    """Fold a variable-free subtree to a float, or return None."""
    try:
        fn = _build(node, consts, ("\0u", "\0v"), "")
    except SpecError:
        return None
    return fn(Taylor2.const(0.0), Taylor2.const(0.0)).val
