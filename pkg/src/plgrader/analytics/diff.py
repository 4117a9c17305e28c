"""Structural diffs between two versions of a program.

Predicates are matched by indicator (with rename detection for the rest),
clauses by a minimal-cost assignment under tree edit distance, and body
goals by sequence alignment. Each modified clause carries an edit script of
atomic changes addressed by paths into the clause.
"""
from __future__ import annotations

import difflib
from dataclasses import dataclass
from typing import Optional

import numpy as np
import zss
from rapidfuzz.distance import Levenshtein
from scipy.optimize import linear_sum_assignment

from ..syntax.terms import Atom, Clause, Compound, Float, Int, Program, Var
from ..syntax.writer import format_term

ADDED = "Added"
REMOVED = "Removed"
MODIFIED = "Modified"

CLAUSE_ADDED = "ClauseAdded"
CLAUSE_REMOVED = "ClauseRemoved"
CLAUSE_MODIFIED = "ClauseModified"

# atomic edit operations
REPLACE = "replace"        # one subterm replaced by another
FUNCTOR = "functor"        # name changed, arguments kept in place
ARITY = "arity"            # same name, different number of arguments
PERMUTE = "permute"        # same arguments in a different order
INSERT = "insert"          # body goal inserted
DELETE = "delete"          # body goal deleted
MOVE = "move"              # body goal moved to another position

RENAME_DISTANCE = 2


@dataclass(frozen=True)
class Edit:
    """One atomic change; ``path`` starts with ``"head"`` or ``("body", i)``.

    Body indices refer to the new clause, except for deletions (old clause).
    ``goal`` is the enclosing body goal (new side when it exists).
    """
    op: str
    path: tuple
    old: object = None
    new: object = None
    goal: object = None
    list_tail: bool = False

    def describe(self) -> str:
        where = "/".join(str(p) for p in self.path)
        old = "" if self.old is None else format_term(self.old)
        new = "" if self.new is None else format_term(self.new)
        return f"{self.op} at {where}: {old or '-'} -> {new or '-'}"


@dataclass(frozen=True)
class ClauseEdit:
    kind: str
    old: Optional[Clause] = None
    new: Optional[Clause] = None
    edits: tuple = ()


@dataclass(frozen=True)
class PredicateDiff:
    predicate: tuple
    kind: str
    clause_edits: tuple = ()
    renamed_from: Optional[tuple] = None

    @property
    def indicator(self) -> str:
        return f"{self.predicate[0]}/{self.predicate[1]}"

    def to_dict(self) -> dict:
        out = {"predicate": self.indicator, "kind": self.kind,
               "clause_edits": [{"kind": c.kind,
                                 "old": None if c.old is None else _clause_text(c.old),
                                 "new": None if c.new is None else _clause_text(c.new),
                                 "edits": [e.describe() for e in c.edits]}
                                for c in self.clause_edits]}
        if self.renamed_from is not None:
            out["renamed_from"] = f"{self.renamed_from[0]}/{self.renamed_from[1]}"
        return out


def _clause_text(clause: Clause) -> str:
    from ..syntax.writer import format_clause
    return format_clause(clause)


# -- term helpers -------------------------------------------------------------

def norm(t):
    """Compare variables by name only; clause-local ids differ between versions."""
    if isinstance(t, Var):
        return Var(t.name, 0)
    if isinstance(t, Compound):
        return Compound(t.name, tuple(norm(a) for a in t.args))
    return t


def same(a, b) -> bool:
    return norm(a) == norm(b)


def _label(t) -> str:
    if isinstance(t, Var):
        return "V:" + t.name
    if isinstance(t, Compound):
        return f"{t.name}/{len(t.args)}"
    if isinstance(t, (Int, Float)):
        return f"#{t.value!r}"
    return "A:" + t.name


def _tree(t) -> zss.Node:
    node = zss.Node(_label(t))
    if isinstance(t, Compound):
        for a in t.args:
            node.addkid(_tree(a))
    return node


def size(t) -> int:
    n, stack = 0, [t]
    while stack:
        x = stack.pop()
        n += 1
        if isinstance(x, Compound):
            stack.extend(x.args)
    return n


def tree_distance(a, b) -> int:
    """Zhang-Shasha edit distance with unit costs."""
    return int(zss.simple_distance(_tree(a), _tree(b)))


def _clause_term(c: Clause):
    return Compound(":-", (c.head,) + tuple(c.body)) if c.body else Compound(":-", (c.head,))


def clause_distance(a: Clause, b: Clause) -> int:
    return tree_distance(_clause_term(a), _clause_term(b))


# -- edit scripts -------------------------------------------------------------

def _is_list_cell(t) -> bool:
    return (isinstance(t, Compound) and t.name == "." and len(t.args) == 2) or t == Atom("[]")


def _negates(a, b) -> bool:
    return isinstance(a, Compound) and a.name == "\\+" and len(a.args) == 1 and same(a.args[0], b)


def term_edits(old, new, path, goal=None, list_tail=False) -> list:
    if same(old, new):
        return []
    if _negates(new, old) or _negates(old, new):
        return [Edit(REPLACE, path, old, new, goal)]
    if isinstance(old, Compound) and isinstance(new, Compound):
        if old.name == new.name and len(old.args) == len(new.args):
            if sorted(map(_key, old.args)) == sorted(map(_key, new.args)) and len(old.args) > 1:
                return [Edit(PERMUTE, path, old, new, goal)]
            out = []
            cons = old.name == "." and len(old.args) == 2
            for i, (a, b) in enumerate(zip(old.args, new.args)):
                out += term_edits(a, b, path + (i,), goal, cons and i == 1)
            return out
        if old.name == new.name:
            return [Edit(ARITY, path, old, new, goal)]
        if len(old.args) == len(new.args) and not (old.name == "." or new.name == "."):
            out = [Edit(FUNCTOR, path, old, new, goal)]
            for i, (a, b) in enumerate(zip(old.args, new.args)):
                out += term_edits(a, b, path + (i,), goal)
            return out
    shape = list_tail and (_is_list_cell(old) or _is_list_cell(new))
    return [Edit(REPLACE, path, old, new, goal, shape)]


def _key(t) -> str:
    return format_term(norm(t))


def _align(olds, news):
    """Needleman-Wunsch pairing of goals; returns (old_i | None, new_j | None) pairs."""
    n, m = len(olds), len(news)
    sub = [[0.0] * m for _ in range(n)]
    for i, a in enumerate(olds):
        for j, b in enumerate(news):
            sub[i][j] = 0.0 if same(a, b) else 2.0 * tree_distance(a, b) / (size(a) + size(b))
    cost = [[0.0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        cost[i][0] = float(i)
    for j in range(1, m + 1):
        cost[0][j] = float(j)
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            cost[i][j] = min(cost[i - 1][j - 1] + sub[i - 1][j - 1],
                             cost[i - 1][j] + 1, cost[i][j - 1] + 1)
    pairs = []
    i, j = n, m
    while i or j:
        if i and j and cost[i][j] == cost[i - 1][j - 1] + sub[i - 1][j - 1] \
                and sub[i - 1][j - 1] < 2.0:
            pairs.append((i - 1, j - 1))
            i, j = i - 1, j - 1
        elif i and cost[i][j] == cost[i - 1][j] + 1:
            pairs.append((i - 1, None))
            i -= 1
        elif j and cost[i][j] == cost[i][j - 1] + 1:
            pairs.append((None, j - 1))
            j -= 1
        else:
            pairs.append((i - 1, j - 1))
            i, j = i - 1, j - 1
    pairs.reverse()
    return pairs


def clause_edit_script(old: Clause, new: Clause) -> list:
    """Atomic edits turning ``old`` into ``new``."""
    edits = term_edits(old.head, new.head, ("head",))
    ob, nb = list(old.body), list(new.body)
    okeys, nkeys = [_key(g) for g in ob], [_key(g) for g in nb]
    matcher = difflib.SequenceMatcher(a=okeys, b=nkeys, autojunk=False)
    blocks = [op for op in matcher.get_opcodes() if op[0] != "equal"]
    loose_old = [i for _, i1, i2, _, _ in blocks for i in range(i1, i2)]
    loose_new = [j for _, _, _, j1, j2 in blocks for j in range(j1, j2)]
    moved_old, moved_new = set(), set()
    for j in loose_new:
        for i in loose_old:
            if i not in moved_old and okeys[i] == nkeys[j]:
                moved_old.add(i)
                moved_new.add(j)
                edits.append(Edit(MOVE, ("body", j), ob[i], nb[j], nb[j]))
                break
    for _, i1, i2, j1, j2 in blocks:
        olds = [i for i in range(i1, i2) if i not in moved_old]
        news = [j for j in range(j1, j2) if j not in moved_new]
        for a, b in _align([ob[i] for i in olds], [nb[j] for j in news]):
            if a is None:
                j = news[b]
                edits.append(Edit(INSERT, ("body", j), None, nb[j], nb[j]))
            elif b is None:
                i = olds[a]
                edits.append(Edit(DELETE, ("body", i), ob[i], None, ob[i]))
            else:
                i, j = olds[a], news[b]
                edits += term_edits(ob[i], nb[j], ("body", j), nb[j])
    return sorted(edits, key=_edit_order)


def _edit_order(e: Edit):
    return (0 if e.path[0] == "head" else 1, e.path[1:], e.op)


# -- clause and predicate matching --------------------------------------------

def match_clauses(olds, news):
    """Minimal-cost assignment of clauses; unmatched ones are removed/added.

    Deleting or inserting a clause costs its tree size; ties favour pairs
    close in source order.
    """
    n, m = len(olds), len(news)
    big = 1e9
    k = n + m
    cost = np.zeros((k, k))
    tie = 1e-3 / (k + 1)
    for i in range(n):
        for j in range(m):
            cost[i, j] = clause_distance(olds[i], news[j]) + tie * abs(i - j)
        cost[i, m:] = big
        cost[i, m + i] = size(_clause_term(olds[i]))
    for j in range(m):
        cost[n:, j] = big
        cost[n + j, j] = size(_clause_term(news[j]))
    rows, cols = linear_sum_assignment(cost)
    pairs = []
    for i, j in zip(rows, cols):
        if i < n and j < m:
            pairs.append((i, j))
        elif i < n:
            pairs.append((i, None))
        elif j < m:
            pairs.append((None, j))
    return pairs


def _predicate_edits(olds, news) -> tuple:
    out = []
    for i, j in match_clauses(olds, news):
        if j is None:
            out.append((1, i, ClauseEdit(CLAUSE_REMOVED, olds[i], None)))
        elif i is None:
            out.append((0, j, ClauseEdit(CLAUSE_ADDED, None, news[j])))
        else:
            edits = clause_edit_script(olds[i], news[j])
            if edits:
                out.append((0, j, ClauseEdit(CLAUSE_MODIFIED, olds[i], news[j], tuple(edits))))
    out.sort(key=lambda t: (t[0], t[1]))
    return tuple(e for _, _, e in out)


def diff_programs(old: Program, new: Program) -> list:
    """Per-predicate differences from ``old`` to ``new``, in new-program order."""
    old_keys, new_keys = old.predicates(), new.predicates()
    removed = [k for k in old_keys if k not in new.index]
    added = [k for k in new_keys if k not in old.index]
    renames = {}
    for k in added:
        options = sorted((Levenshtein.distance(k[0], r[0]), r[0], r) for r in removed
                         if r[1] == k[1] and r not in renames.values())
        if options and options[0][0] <= RENAME_DISTANCE:
            renames[k] = options[0][2]
    out = []
    for k in new_keys:
        if k in old.index or k in renames:
            src = renames.get(k, k)
            edits = _predicate_edits(old.clauses_for(src), new.clauses_for(k))
            if edits:
                out.append(PredicateDiff(k, MODIFIED, edits, renames.get(k)))
        else:
            out.append(PredicateDiff(k, ADDED, tuple(ClauseEdit(CLAUSE_ADDED, None, c)
                                                     for c in new.clauses_for(k))))
    for k in removed:
        if k not in renames.values():
            out.append(PredicateDiff(k, REMOVED, tuple(ClauseEdit(CLAUSE_REMOVED, c, None)
                                                       for c in old.clauses_for(k))))
    return out
