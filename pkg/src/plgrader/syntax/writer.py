"""Operator-aware term printing that re-parses to the same structure."""
from __future__ import annotations

from .lexer import SYMBOL_CHARS
from .parser import INFIX_OPS, PREFIX_OPS
from .terms import Atom, Clause, Compound, Float, Int, Var

_SOLO_ATOMS = {"[]", "!", ";"}


def _atom_needs_quotes(name: str) -> bool:
    if name in _SOLO_ATOMS:
        return False
    if not name:
        return True
    if name[0].islower() and name[0].isalpha() and all(c.isalnum() or c == "_" for c in name):
        return False
    if all(c in SYMBOL_CHARS for c in name) and name != ".":
        return False
    return True


def format_atom(name: str, quoted: bool = True) -> str:
    if not quoted or not _atom_needs_quotes(name):
        return name
    escaped = (name.replace("\\", "\\\\").replace("'", "\\'")
               .replace("\n", "\\n").replace("\t", "\\t"))
    return f"'{escaped}'"


def format_float(value: float) -> str:
    text = repr(value)
    if "e" in text and "." not in text.split("e")[0]:
        mant, exp = text.split("e")
        text = f"{mant}.0e{exp}"
    return text


def _var_name(var: Var, names) -> str:
    if names is not None:
        return names(var)
    if var.name == "_":
        return f"_G{var.id}"
    return var.name


class _Writer:
    def __init__(self, quoted=True, var_names=None):
        self.quoted = quoted
        self.names = var_names

    def atom_operand(self, name):
        text = format_atom(name, self.quoted)
        if name in INFIX_OPS or name in PREFIX_OPS:
            return f"({text})" if name != "[]" else text
        return text

    def write(self, t, maxprec=1200) -> str:
        if isinstance(t, Var):
            return _var_name(t, self.names)
        if isinstance(t, Int):
            return str(t.value)
        if isinstance(t, Float):
            return format_float(t.value)
        if isinstance(t, Atom):
            if maxprec < 1200 and (t.name in INFIX_OPS or t.name in PREFIX_OPS):
                return self.atom_operand(t.name)
            return format_atom(t.name, self.quoted)
        return self.compound(t, maxprec)

    def compound(self, t: Compound, maxprec) -> str:
        name, args = t.name, t.args
        if name == "." and len(args) == 2:
            return self.list(t)
        if len(args) == 2 and name in INFIX_OPS:
            prec, kind = INFIX_OPS[name]
            lp = prec - 1 if kind in ("xfx", "xfy") else prec
            rp = prec - 1 if kind in ("xfx", "yfx") else prec
            left = self.write(args[0], lp)
            right = self.write(args[1], rp)
            if name == ",":
                text = f"{left}, {right}"
            else:
                text = f"{left} {format_atom(name, self.quoted)} {right}"
            return f"({text})" if prec > maxprec else text
        if len(args) == 1 and name in PREFIX_OPS:
            prec, kind = PREFIX_OPS[name]
            ap = prec - 1 if kind == "fx" else prec
            arg = args[0]
            if name == "-" and isinstance(arg, (Int, Float)) and arg.value >= 0:
                return "-(" + self.write(arg, 999) + ")"
            text = f"{format_atom(name, self.quoted)} {self.write(arg, ap)}"
            return f"({text})" if prec > maxprec else text
        inner = ", ".join(self.write(a, 999) for a in args)
        return f"{format_atom(name, self.quoted)}({inner})"

    def list(self, t) -> str:
        items = []
        while isinstance(t, Compound) and t.name == "." and len(t.args) == 2:
            items.append(self.write(t.args[0], 999))
            t = t.args[1]
        body = ", ".join(items)
        if isinstance(t, Atom) and t.name == "[]":
            return f"[{body}]"
        return f"[{body}|{self.write(t, 999)}]"


def format_term(term, quoted: bool = True, var_names=None, maxprec: int = 1200) -> str:
    """Render ``term`` as Prolog text.

    ``var_names`` is an optional callable mapping a :class:`Var` to its printed
    name; by default the source name is used and ``_`` becomes ``_G<id>``.
    """
    return _Writer(quoted, var_names).write(term, maxprec)


def format_clause(clause: Clause) -> str:
    w = _Writer(True, _clause_var_names(clause))
    head = w.write(clause.head, 1199)
    if not clause.body:
        return head + "."
    goals = ", ".join(w.write(g, 999) for g in clause.body)
    return f"{head} :- {goals}."


def _clause_var_names(clause: Clause):
    # singleton anonymous vars print as `_`; repeated ones need a stable name
    counts = {}
    for t in (clause.head, *clause.body):
        stack = [t]
        while stack:
            x = stack.pop()
            if isinstance(x, Var):
                counts[x.id] = counts.get(x.id, 0) + 1
            elif isinstance(x, Compound):
                stack.extend(x.args)

    def name(v: Var) -> str:
        if v.name == "_" and counts.get(v.id, 0) == 1:
            return "_"
        return v.name if v.name != "_" else f"_G{v.id}"
    return name
