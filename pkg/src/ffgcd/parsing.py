"""Text grammar shared by the library and the CLI.

K-elements use integer literals, ``t``, ``+ - * / ^`` and parentheses, e.g.
``(t^2+1)/(t-2)``.  Polynomials over K add variables ``x1 .. xn`` (or any
names the caller binds), e.g. ``(t^2+1)*x1^2*x2 + (1/(t-2))*x2``.
Expressions are parsed with :mod:`ast` and evaluated over an allow-list of
node types.
"""

from __future__ import annotations

import ast
import re
from typing import Any, Mapping

from .ffcore import RationalFunction, T


class ParseError(ValueError):
    pass


_VAR_RE = re.compile(r"^x(\d+)$")


def _eval(node: ast.AST, env: Mapping[str, Any]):
    if isinstance(node, ast.Expression):
        return _eval(node.body, env)
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise ParseError(f"only integer literals are allowed, got {node.value!r}")
        return RationalFunction.constant(node.value)
    if isinstance(node, ast.Name):
        if node.id in env:
            return env[node.id]
        raise ParseError(f"unknown symbol {node.id!r}")
    if isinstance(node, ast.UnaryOp):
        v = _eval(node.operand, env)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
        raise ParseError("unsupported unary operator")
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            base = _eval(node.left, env)
            e = _eval(node.right, env)
            if not isinstance(e, RationalFunction) or not e.is_constant():
                raise ParseError("exponents must be integer constants")
            ev = e.constant_value()
            if ev.denominator != 1:
                raise ParseError("exponents must be integers")
            ev = int(ev)
            if ev < 0 and not isinstance(base, RationalFunction):
                base = _as_k(base)
            return base**ev
        a = _eval(node.left, env)
        b = _eval(node.right, env)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            b = _as_k(b)
            if b.is_zero():
                raise ParseError("division by zero")
            return a / b
        raise ParseError("unsupported binary operator")
    raise ParseError(f"unsupported syntax: {type(node).__name__}")


def _as_k(v) -> RationalFunction:
    if isinstance(v, RationalFunction):
        return v
    if getattr(v, "is_constant", None) and v.is_constant():
        return v.constant_coeff()
    raise ParseError("division by a non-constant polynomial")


def _parse_tree(text: str) -> ast.AST:
    src = text.strip().replace("^", "**")
    if not src:
        raise ParseError("empty expression")
    try:
        return ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from None


def parse_k_element(text: str) -> RationalFunction:
    value = _eval(_parse_tree(text), {"t": T})
    if not isinstance(value, RationalFunction):
        raise ParseError(f"{text!r} is not an element of K")
    return value


def variable_names(text: str) -> list[str]:
    tree = _parse_tree(text)
    return sorted({n.id for n in ast.walk(tree) if isinstance(n, ast.Name) and n.id != "t"})


def parse_polynomial(text: str, nvars: int | None = None, names: list[str] | None = None):
    """Parse a polynomial over K.

    With ``names`` the variables are bound in that order; otherwise variables
    must be ``x1 .. xn`` and ``nvars`` defaults to the largest index seen.
    """
    from .mvpoly import MvPoly

    tree = _parse_tree(text)
    if names is None:
        idx = []
        for name in variable_names(text):
            m = _VAR_RE.match(name)
            if not m or int(m.group(1)) < 1:
                raise ParseError(f"unknown variable {name!r}; expected x1, x2, ...")
            idx.append(int(m.group(1)))
        n = max(idx, default=0)
        if nvars is None:
            nvars = max(n, 1)
        elif n > nvars:
            raise ParseError(f"variable x{n} exceeds the declared {nvars} variables")
        names = [f"x{j + 1}" for j in range(nvars)]
    nvars = len(names)
    env: dict[str, Any] = {"t": T}
    for j, name in enumerate(names):
        env[name] = MvPoly.var(j, nvars)
    value = _eval(tree, env)
    if isinstance(value, RationalFunction):
        value = MvPoly.constant(value, nvars)
    return value
