"""Plain-text operator files: ``order=q`` then ``k: c0 c1 ...`` per coefficient."""
from __future__ import annotations

import ast
import os
from pathlib import Path

from gmpy2 import mpq

from ..exactalg import Poly
from .operator import DiffOp
from .ratfunc import RatFunc


class OperatorFormatError(ValueError):
    pass


def _fmt(c: mpq) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_operator(L: DiffOp) -> str:
    if not L.is_polynomial():
        L = L.primitive()
    lines = [f"order={L.order}"]
    for k, a in enumerate(L.coeffs):
        poly = a if isinstance(a, Poly) else a.as_poly()
        lines.append(f"{k}: " + " ".join(_fmt(c) for c in poly.c) if poly.c else f"{k}:")
    return "\n".join(lines) + "\n"


def parse_operator(text: str) -> DiffOp:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines or not lines[0].startswith("order="):
        raise OperatorFormatError("first line must be order=q")
    try:
        q = int(lines[0].split("=", 1)[1])
    except ValueError as exc:
        raise OperatorFormatError("bad order line") from exc
    coeffs: dict[int, Poly] = {}
    for ln in lines[1:]:
        head, sep, body = ln.partition(":")
        if not sep:
            raise OperatorFormatError(f"malformed line {ln!r}")
        try:
            k = int(head)
            coeffs[k] = Poly(mpq(tok) for tok in body.split())
        except ValueError as exc:
            raise OperatorFormatError(f"malformed line {ln!r}") from exc
    if set(coeffs) - set(range(q + 1)):
        raise OperatorFormatError("coefficient index outside 0..order")
    L = DiffOp([coeffs.get(k, Poly()) for k in range(q + 1)])
    if L.order != q:
        raise OperatorFormatError(f"declared order {q} but leading coefficient is zero")
    return L


def write_operator(path: str | os.PathLike, L: DiffOp) -> None:
    Path(path).write_text(format_operator(L))


def read_operator(path: str | os.PathLike) -> DiffOp:
    return parse_operator(Path(path).read_text())


_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}


def parse_ratfunc(text: str, variable: str = "w") -> RatFunc:
    """Rational function from an arithmetic expression such as ``1/(w*(1-4*w))``.

    Accepts integers, the variable, ``+ - * /``, and ``**`` with integer exponents.
    """

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return RatFunc.lift(node.value)
        if isinstance(node, ast.Name) and node.id == variable:
            return RatFunc.lift(Poly.x())
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                e = node.right
                sign = 1
                if isinstance(e, ast.UnaryOp) and isinstance(e.op, ast.USub):
                    sign, e = -1, e.operand
                if not (isinstance(e, ast.Constant) and isinstance(e.value, int)):
                    raise OperatorFormatError("exponents must be integers")
                return ev(node.left) ** (sign * e.value)
            op = _BINOPS.get(type(node.op))
            if op is not None:
                return op(ev(node.left), ev(node.right))
        raise OperatorFormatError(f"unsupported expression element in {text!r}")

    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise OperatorFormatError(f"cannot parse {text!r}") from exc
    return ev(tree)
