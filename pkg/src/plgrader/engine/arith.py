"""Arithmetic evaluation for ``is/2`` and the numeric comparisons."""
from __future__ import annotations

from ..syntax.terms import Atom, Compound, Float, Int, Var
from ..syntax.writer import format_term
from .errors import INSTANTIATION, TYPE_ERROR, ZERO_DIVISOR, PrologRuntimeError


def _int_div(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def _divide(a, b):
    if b == 0:
        raise PrologRuntimeError(ZERO_DIVISOR, "division by zero")
    if isinstance(a, int) and isinstance(b, int):
        if a % b == 0:
            return a // b
        return a / b
    return a / b


def _require_int(name, *values):
    for v in values:
        if not isinstance(v, int):
            raise PrologRuntimeError(TYPE_ERROR, f"{name} expects integers, got {v!r}")


def _intdiv(a, b):
    _require_int("//", a, b)
    if b == 0:
        raise PrologRuntimeError(ZERO_DIVISOR, "division by zero")
    return _int_div(a, b)


def _mod(a, b):
    _require_int("mod", a, b)
    if b == 0:
        raise PrologRuntimeError(ZERO_DIVISOR, "division by zero")
    return a % b


BINARY = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": _divide,
    "//": _intdiv,
    "mod": _mod,
    "min": lambda a, b: b if b < a else a,
    "max": lambda a, b: b if b > a else a,
}

UNARY = {
    "-": lambda a: -a,
    "+": lambda a: a,
    "abs": abs,
}


def eval_arith(term, deref=lambda t: t):
    """Evaluate an arithmetic expression; ``deref`` resolves bound variables.

    Returns a Python ``int`` or ``float``.
    """
    t = deref(term)
    if isinstance(t, Int):
        return t.value
    if isinstance(t, Float):
        return t.value
    if isinstance(t, Var):
        raise PrologRuntimeError(INSTANTIATION, "arguments are not sufficiently instantiated",
                                 t.span)
    if isinstance(t, Compound):
        n = len(t.args)
        if n == 2 and t.name in BINARY:
            a = eval_arith(t.args[0], deref)
            b = eval_arith(t.args[1], deref)
            result = BINARY[t.name](a, b)
        elif n == 1 and t.name in UNARY:
            result = UNARY[t.name](eval_arith(t.args[0], deref))
        else:
            raise PrologRuntimeError(TYPE_ERROR, f"{t.name}/{n} is not an arithmetic function",
                                     t.span)
        if isinstance(result, float) and result != result:
            raise PrologRuntimeError(TYPE_ERROR, "undefined arithmetic result", t.span)
        return result
    if isinstance(t, Atom):
        raise PrologRuntimeError(TYPE_ERROR, f"type error: `{format_term(t)}` is not a number",
                                 t.span)
    raise PrologRuntimeError(TYPE_ERROR, f"cannot evaluate {t!r}")


def to_term(value):
    return Float(value) if isinstance(value, float) else Int(value)
