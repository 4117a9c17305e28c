"""Prolog term representation.

Terms are immutable. Every node may carry a :class:`SourceSpan`; spans are
ignored by equality and hashing so two terms parsed from different places
compare equal when their structure matches.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union


@dataclass(frozen=True)
class SourceSpan:
    start_offset: int
    end_offset: int
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __post_init__(self):
        if self.start_offset > self.end_offset:
            raise ValueError(f"span starts after it ends: {self}")

    def contains(self, other: "SourceSpan") -> bool:
        return self.start_offset <= other.start_offset and other.end_offset <= self.end_offset

    def merge(self, other: "SourceSpan") -> "SourceSpan":
        first = self if self.start_offset <= other.start_offset else other
        last = self if self.end_offset >= other.end_offset else other
        return SourceSpan(first.start_offset, last.end_offset, first.start_line,
                          first.start_col, last.end_line, last.end_col)

    def __str__(self):
        return f"{self.start_line}:{self.start_col}-{self.end_line}:{self.end_col}"


@dataclass(frozen=True, slots=True)
class Atom:
    name: str
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Int:
    value: int
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Float:
    value: float
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Var:
    name: str
    id: int
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Compound:
    name: str
    args: tuple
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.args:
            raise ValueError("compound terms need at least one argument")

    @property
    def arity(self) -> int:
        return len(self.args)


Term = Union[Atom, Int, Float, Var, Compound]
Number = (Int, Float)

NIL = Atom("[]")
TRUE = Atom("true")


@dataclass(frozen=True)
class Clause:
    head: Term
    body: tuple = ()
    span: Optional[SourceSpan] = field(default=None, compare=False)
    nvars: int = field(default=0, compare=False)

    @property
    def key(self) -> tuple:
        return indicator(self.head)

    @property
    def is_fact(self) -> bool:
        return not self.body


@dataclass
class Program:
    clauses: list = field(default_factory=list)
    directives: list = field(default_factory=list)
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        self.reindex()

    def reindex(self):
        self.index = {}
        for pos, clause in enumerate(self.clauses):
            self.index.setdefault(clause.key, []).append(pos)

    def add(self, clause: Clause):
        self.index.setdefault(clause.key, []).append(len(self.clauses))
        self.clauses.append(clause)

    def predicates(self) -> list:
        """Predicate indicators in order of first definition."""
        return list(self.index)

    def clauses_for(self, key) -> list:
        return [self.clauses[i] for i in self.index.get(key, ())]

    def extended(self, extra: "Program") -> "Program":
        return Program(list(self.clauses) + list(extra.clauses),
                       list(self.directives) + list(extra.directives))


def indicator(term: Term) -> tuple:
    """(name, arity) of a callable term."""
    if isinstance(term, Atom):
        return (term.name, 0)
    if isinstance(term, Compound):
        return (term.name, len(term.args))
    raise TypeError(f"not callable: {term!r}")


def make_list(items, tail: Term = NIL) -> Term:
    result = tail
    for item in reversed(list(items)):
        result = Compound(".", (item, result))
    return result


def list_items(term: Term):
    """Split a proper or partial list into (items, tail)."""
    items = []
    while isinstance(term, Compound) and term.name == "." and len(term.args) == 2:
        items.append(term.args[0])
        term = term.args[1]
    return items, term


def is_callable(term: Term) -> bool:
    return isinstance(term, (Atom, Compound))


def is_atomic(term: Term) -> bool:
    return isinstance(term, (Atom, Int, Float))


def conjunction(goals) -> Term:
    goals = list(goals)
    if not goals:
        return TRUE
    result = goals[-1]
    for goal in reversed(goals[:-1]):
        result = Compound(",", (goal, result))
    return result


def flatten_conjunction(term: Term) -> list:
    out = []
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, Compound) and t.name == "," and len(t.args) == 2:
            stack.append(t.args[1])
            stack.append(t.args[0])
        else:
            out.append(t)
    return out


def walk(term: Term) -> Iterator[Term]:
    """Pre-order traversal."""
    stack = [term]
    while stack:
        t = stack.pop()
        yield t
        if isinstance(t, Compound):
            stack.extend(reversed(t.args))


def variables(term: Term) -> list:
    seen = {}
    for t in walk(term):
        if isinstance(t, Var) and t.id not in seen:
            seen[t.id] = t
    return list(seen.values())


def strip_spans(term: Term) -> Term:
    if isinstance(term, Compound):
        return Compound(term.name, tuple(strip_spans(a) for a in term.args))
    if isinstance(term, Atom):
        return Atom(term.name)
    if isinstance(term, Int):
        return Int(term.value)
    if isinstance(term, Float):
        return Float(term.value)
    return Var(term.name, term.id)


def variant(a: Term, b: Term) -> bool:
    """Structural equality up to consistent variable renaming."""
    fwd, back = {}, {}
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if isinstance(x, Var) or isinstance(y, Var):
            if not (isinstance(x, Var) and isinstance(y, Var)):
                return False
            if fwd.setdefault(x.id, y.id) != y.id or back.setdefault(y.id, x.id) != x.id:
                return False
            continue
        if isinstance(x, Compound):
            if not isinstance(y, Compound) or x.name != y.name or len(x.args) != len(y.args):
                return False
            stack.extend(zip(x.args, y.args))
        elif x != y:
            return False
    return True
