"""Call graphs over clause bodies and the recursion / higher-order heuristic."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..engine.library import library_predicates
from ..engine.machine import BUILTINS
from ..syntax.terms import Atom, Compound, Program, SourceSpan, Var

RECURSIVE = "Recursive"
NON_RECURSIVE = "NonRecursive"
HIGHER_ORDER = "HigherOrder"
TECHNIQUES = (RECURSIVE, HIGHER_ORDER)

# goals that only combine other goals; no edge of their own
_CONNECTIVES = {(",", 2), (";", 2), ("->", 2), ("\\+", 1)}


def _meta_extra(name: str, arity: int) -> Optional[int]:
    """Arguments appended to the closure by a meta-call, or None."""
    if name == "call" and arity >= 1:
        return arity - 1
    if name == "maplist" and 2 <= arity <= 4:
        return arity - 1
    if name == "foldl" and 4 <= arity <= 6:
        return arity - 1
    return None


def _closure_key(term, extra: int):
    if isinstance(term, Atom):
        return (term.name, extra)
    if isinstance(term, Compound):
        return (term.name, len(term.args) + extra)
    return None


def goal_calls(goal):
    """Call sites in a goal as ``(callee, span, meta)`` triples, in source order.

    Control constructs are looked through; ``call/N``, ``maplist`` and
    ``foldl`` yield an edge to themselves plus a meta edge to their closure.
    """
    out = []
    stack = [goal]
    while stack:
        g = stack.pop()
        if isinstance(g, Var) or not isinstance(g, (Atom, Compound)):
            continue
        args = g.args if isinstance(g, Compound) else ()
        key = (g.name, len(args))
        if key in _CONNECTIVES:
            stack.extend(reversed(args))
            continue
        if key != ("call", 1):
            out.append((key, g.span, False))
        if key == ("findall", 3):
            stack.append(args[1])
            continue
        extra = _meta_extra(*key)
        if extra is not None:
            if key == ("call", 1):
                stack.append(args[0])
                continue
            target = _closure_key(args[0], extra)
            if target is not None:
                out.append((target, args[0].span or g.span, True))
    return out


@dataclass(frozen=True)
class CallSite:
    caller: tuple
    callee: tuple
    span: Optional[SourceSpan]
    meta: bool = False


@dataclass
class CallGraph:
    nodes: set = field(default_factory=set)
    edges: list = field(default_factory=list)
    user: set = field(default_factory=set)

    def is_user(self, key) -> bool:
        return key in self.user

    def is_builtin(self, key) -> bool:
        return key not in self.user and (key in BUILTINS or key in library_predicates())

    def callees(self, key) -> set:
        return {e.callee for e in self.edges if e.caller == key}

    def callers(self, key) -> set:
        return {e.caller for e in self.edges if e.callee == key}

    def reachable(self, key) -> set:
        """Nodes reachable from ``key`` by one or more edges."""
        adjacency = {}
        for e in self.edges:
            adjacency.setdefault(e.caller, set()).add(e.callee)
        seen = set()
        todo = list(adjacency.get(key, ()))
        while todo:
            n = todo.pop()
            if n not in seen:
                seen.add(n)
                todo.extend(adjacency.get(n, ()))
        return seen

    def private_helpers(self, key) -> set:
        """User predicates reachable from ``key`` and called from nowhere else.

        Starts from everything reachable and drops any helper with a caller
        outside ``key`` and the remaining set, until stable.
        """
        helpers = {n for n in self.reachable(key) if n in self.user and n != key}
        changed = True
        while changed:
            changed = False
            for h in sorted(helpers):
                if any(c != key and c not in helpers for c in self.callers(h)):
                    helpers.discard(h)
                    changed = True
        return helpers


def build_call_graph(program: Program) -> CallGraph:
    graph = CallGraph()
    for clause in program.clauses:
        graph.user.add(clause.key)
        graph.nodes.add(clause.key)
    for clause in program.clauses:
        for goal in clause.body:
            for callee, span, meta in goal_calls(goal):
                graph.nodes.add(callee)
                graph.edges.append(CallSite(clause.key, callee, span, meta))
    return graph


@dataclass
class SolutionTypeVerdict:
    predicate: tuple
    verdict: str
    recursion_evidence: list = field(default_factory=list)
    higher_order_evidence: list = field(default_factory=list)

    @property
    def evidence(self) -> list:
        return self.recursion_evidence + self.higher_order_evidence

    @property
    def is_higher_order(self) -> bool:
        return bool(self.higher_order_evidence)


def classify_solution_type(graph: CallGraph, pred: tuple) -> SolutionTypeVerdict:
    """Recursive if ``pred`` or one of its private helpers lies on a cycle.

    Higher-order evidence comes from meta edges issued by ``pred`` or its
    private helpers; when both hold the verdict is Recursive with the
    higher-order evidence attached.
    """
    if pred not in graph.user:
        raise KeyError(f"{pred[0]}/{pred[1]} is not defined by the program")
    owned = {pred} | graph.private_helpers(pred)
    recursion = []
    for node in sorted(owned):
        reach = graph.reachable(node)
        if node in reach:
            # calls back into ``node`` from anywhere on one of its cycles
            recursion.extend(e.span for e in graph.edges
                             if e.callee == node and e.caller in reach)
    meta = [e.span for e in graph.edges if e.meta and e.caller in owned]
    if recursion:
        verdict = RECURSIVE
    elif meta:
        verdict = HIGHER_ORDER
    else:
        verdict = NON_RECURSIVE
    return SolutionTypeVerdict(pred, verdict, recursion, meta)


@dataclass(frozen=True)
class TechniqueViolation:
    predicate: tuple
    required: str
    actual: str
    message: str


def _where(spans) -> str:
    located = [s for s in spans if s is not None]
    return f"line {located[0].start_line}" if located else "an unknown position"


def check_required_technique(verdicts: dict, required: dict) -> list:
    """Compare verdicts (key -> SolutionTypeVerdict) with required techniques."""
    out = []
    for key in sorted(required):
        need = required[key]
        if need is None:
            continue
        name = f"{key[0]}/{key[1]}"
        verdict = verdicts.get(key)
        if verdict is None:
            out.append(TechniqueViolation(key, need, "Undefined",
                                          f"{name} must be {need.lower()} but is not defined"))
            continue
        if need == RECURSIVE and verdict.verdict == NON_RECURSIVE:
            out.append(TechniqueViolation(
                key, need, verdict.verdict,
                f"{name} must be recursive but no recursive call was found"))
        elif need == RECURSIVE and verdict.verdict == HIGHER_ORDER:
            out.append(TechniqueViolation(
                key, need, verdict.verdict,
                f"{name} must be recursive but only uses higher-order calls "
                f"(at {_where(verdict.higher_order_evidence)})"))
        elif need == HIGHER_ORDER and not verdict.is_higher_order:
            detail = (f"; recursive call at {_where(verdict.recursion_evidence)}"
                      if verdict.recursion_evidence else "")
            out.append(TechniqueViolation(
                key, need, verdict.verdict,
                f"{name} must use a higher-order predicate (call/N, maplist, foldl) "
                f"but none was found{detail}"))
    return out
