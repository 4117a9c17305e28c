"""Unification over a binding store with an undo trail."""
from __future__ import annotations

from ..syntax.terms import Atom, Compound, Float, Int, Var


class Bindings:
    """Mutable variable bindings (var id -> term) with trail-based undo."""

    __slots__ = ("map", "trail", "occurs_check")

    def __init__(self, initial=None, occurs_check=True):
        self.map = dict(initial or {})
        self.trail = []
        self.occurs_check = occurs_check

    def deref(self, t):
        m = self.map
        while type(t) is Var:
            b = m.get(t.id)
            if b is None:
                return t
            t = b
        return t

    def bind(self, var_id, term):
        self.map[var_id] = term
        self.trail.append(var_id)

    def undo(self, mark):
        trail, m = self.trail, self.map
        while len(trail) > mark:
            del m[trail.pop()]

    def occurs(self, var_id, term) -> bool:
        stack = [term]
        while stack:
            t = self.deref(stack.pop())
            if type(t) is Var:
                if t.id == var_id:
                    return True
            elif type(t) is Compound:
                stack.extend(t.args)
        return False

    def unify(self, a, b) -> bool:
        """Unify in place; on failure the caller is responsible for undoing."""
        stack = [(a, b)]
        deref = self.deref
        while stack:
            x, y = stack.pop()
            x = deref(x)
            y = deref(y)
            if x is y:
                continue
            tx, ty = type(x), type(y)
            if tx is Var:
                if ty is Var and x.id == y.id:
                    continue
                if self.occurs_check and ty is Compound and self.occurs(x.id, y):
                    return False
                self.bind(x.id, y)
            elif ty is Var:
                if self.occurs_check and tx is Compound and self.occurs(y.id, x):
                    return False
                self.bind(y.id, x)
            elif tx is Compound:
                if ty is not Compound or x.name != y.name or len(x.args) != len(y.args):
                    return False
                stack.extend(zip(x.args, y.args))
            elif tx is not ty or x != y:
                return False
        return True

    def resolve(self, t):
        """Fully substitute bound variables."""
        t = self.deref(t)
        if type(t) is not Compound:
            return t
        # iterative post-order walk; long lists nest deeper than the recursion limit
        out = []
        stack = [(t, False)]
        while stack:
            node, done = stack.pop()
            if done:
                n = len(node.args)
                args = tuple(out[-n:])
                del out[-n:]
                out.append(Compound(node.name, args, node.span))
                continue
            node = self.deref(node)
            if type(node) is Compound:
                stack.append((node, True))
                stack.extend((a, False) for a in reversed(node.args))
            else:
                out.append(node)
        return out[0]


def unify(t1, t2, subst=None, occurs_check=True):
    """Most general unifier of ``t1`` and ``t2`` extending ``subst``.

    ``subst`` maps variable ids to terms and is not modified. Returns the
    extended mapping, or ``None`` when the terms do not unify.
    """
    store = Bindings(subst, occurs_check)
    if not store.unify(t1, t2):
        return None
    return store.map


def apply_subst(term, subst):
    return Bindings(subst).resolve(term)


def identical(store: Bindings, a, b) -> bool:
    """``==/2``: structural identity without binding."""
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        x, y = store.deref(x), store.deref(y)
        if type(x) is Var or type(y) is Var:
            if not (type(x) is Var and type(y) is Var and x.id == y.id):
                return False
        elif type(x) is Compound:
            if type(y) is not Compound or x.name != y.name or len(x.args) != len(y.args):
                return False
            stack.extend(zip(x.args, y.args))
        elif type(x) is not type(y) or x != y:
            return False
    return True


_ORDER = {Var: 0, Float: 1, Int: 1, Atom: 3, Compound: 4}


def compare_terms(store: Bindings, a, b) -> int:
    """Standard order of terms: Var < Number < Atom < Compound."""
    while True:
        a, b = store.deref(a), store.deref(b)
        ra, rb = _ORDER[type(a)], _ORDER[type(b)]
        if ra != rb:
            return -1 if ra < rb else 1
        if type(a) is Var:
            return (a.id > b.id) - (a.id < b.id)
        if ra == 1:
            if a.value != b.value:
                return -1 if a.value < b.value else 1
            if type(a) is type(b):
                return 0
            return -1 if type(a) is Float else 1
        if type(a) is Atom:
            return (a.name > b.name) - (a.name < b.name)
        if len(a.args) != len(b.args):
            return -1 if len(a.args) < len(b.args) else 1
        if a.name != b.name:
            return -1 if a.name < b.name else 1
        for x, y in zip(a.args[:-1], b.args[:-1]):
            c = compare_terms(store, x, y)
            if c:
                return c
        a, b = a.args[-1], b.args[-1]
