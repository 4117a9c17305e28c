"""Depth-first SLD resolution with an explicit goal stack and choice-point stack.

The continuation is a linked list of frames ``(goal, next, cut_barrier,
depth, owner)``; ``depth`` is the number of pending goals, so tail calls run
in constant depth. Choice points record the trail height to undo to.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from ..syntax.terms import Atom, Compound, Float, Int, Program, Var, make_list, variables
from ..syntax.writer import format_term
from .arith import eval_arith, to_term
from .errors import INSTANTIATION, TYPE_ERROR, UNKNOWN_PREDICATE, PrologRuntimeError
from .library import library_program
from .unify import Bindings, compare_terms, identical

EXHAUSTED = "Exhausted"
CHOICE_POINTS_REMAIN = "ChoicePointsRemain"
STEP_LIMIT = "StepLimitReached"
DEPTH_LIMIT = "DepthLimitReached"


@dataclass(frozen=True)
class EngineLimits:
    max_steps: int = 1_000_000
    max_solutions: int = 64
    max_depth: int = 100_000

    def __post_init__(self):
        for name in ("max_steps", "max_solutions", "max_depth"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class Solution:
    bindings: dict                  # query variable name -> resolved term
    open_alternatives: bool

    def __getitem__(self, name):
        return self.bindings[name]


@dataclass
class SolveOutcome:
    solutions: list = field(default_factory=list)
    status: str = EXHAUSTED
    steps_used: int = 0
    unknowns: list = field(default_factory=list)
    call_chain: tuple = ()

    def has_open_alternatives(self, i: int) -> bool:
        if not 0 <= i < len(self.solutions):
            raise IndexError(f"no solution with index {i}")
        return self.solutions[i].open_alternatives


def has_open_alternatives(outcome: SolveOutcome, i: int) -> bool:
    return outcome.has_open_alternatives(i)


# -- goal-stack markers -------------------------------------------------------

class _Then:
    """Commit point of if-then-else: cut back to ``barrier`` and run ``goal``."""
    __slots__ = ("barrier", "goal")

    def __init__(self, barrier, goal):
        self.barrier, self.goal = barrier, goal


class _NotFail:
    __slots__ = ("barrier",)

    def __init__(self, barrier):
        self.barrier = barrier


class _Collect:
    __slots__ = ("state",)

    def __init__(self, state):
        self.state = state


class _Exit:
    __slots__ = ("goal", "level")

    def __init__(self, goal, level):
        self.goal, self.level = goal, level


# -- choice points ---------------------------------------------------------------

CP_CLAUSES, CP_ALT, CP_BETWEEN, CP_FINDALL = range(4)


class _Choice:
    __slots__ = ("kind", "mark", "frame", "data", "index")

    def __init__(self, kind, mark, frame, data=None, index=0):
        self.kind = kind
        self.mark = mark
        self.frame = frame     # continuation to resume with
        self.data = data
        self.index = index


# -- clause compilation ----------------------------------------------------------

class _Slot:
    __slots__ = ("i",)

    def __init__(self, i):
        self.i = i


class _Tmpl:
    __slots__ = ("name", "args")

    def __init__(self, name, args):
        self.name, self.args = name, args


def _template(t):
    if type(t) is Var:
        return _Slot(t.id)
    if type(t) is Compound:
        args = tuple(_template(a) for a in t.args)
        if any(type(a) in (_Slot, _Tmpl) for a in args):
            return _Tmpl(t.name, args)
        return t
    return t


def _first_arg_key(t):
    if type(t) is Atom:
        return ("a", t.name)
    if type(t) is Int:
        return ("i", t.value)
    if type(t) is Float:
        return ("f", t.value)
    if type(t) is Compound:
        return ("c", t.name, len(t.args))
    return None


class _Compiled:
    __slots__ = ("clause", "head", "body", "nvars", "key1", "owner")

    def __init__(self, clause):
        self.clause = clause
        head = clause.head
        self.head = _template(head)
        self.body = tuple(_template(g) for g in clause.body)
        self.nvars = clause.nvars
        args = head.args if type(head) is Compound else ()
        self.key1 = _first_arg_key(args[0]) if args else None
        self.owner = (head.name, len(args))


CONTROL = {("true", 0), ("fail", 0), ("false", 0), ("!", 0), (",", 2), (";", 2),
           ("->", 2), ("\\+", 1), ("call", 1), ("call", 2), ("call", 3), ("call", 4),
           ("call", 5), ("call", 6), ("call", 7), ("call", 8), ("findall", 3),
           ("between", 3)}

_TYPE_CHECKS = {
    "var": lambda t: type(t) is Var,
    "nonvar": lambda t: type(t) is not Var,
    "atom": lambda t: type(t) is Atom,
    "number": lambda t: type(t) in (Int, Float),
    "integer": lambda t: type(t) is Int,
    "float": lambda t: type(t) is Float,
    "atomic": lambda t: type(t) in (Atom, Int, Float),
    "compound": lambda t: type(t) is Compound,
    "callable": lambda t: type(t) in (Atom, Compound),
}

_COMPARE = {
    "=:=": lambda a, b: a == b,
    "=\\=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    ">": lambda a, b: a > b,
    "=<": lambda a, b: a <= b,
    ">=": lambda a, b: a >= b,
}

DETERMINISTIC = ({("=", 2), ("\\=", 2), ("==", 2), ("\\==", 2), ("is", 2), ("msort", 2),
                  ("sort", 2), ("is_list", 1), ("write", 1), ("print", 1), ("nl", 0)}
                 | {(n, 1) for n in _TYPE_CHECKS} | {(n, 2) for n in _COMPARE})

BUILTINS = frozenset(CONTROL | DETERMINISTIC)


class Engine:
    """Runs queries against one program (plus the standard library).

    One engine runs one query at a time; create one engine per thread.
    """

    def __init__(self, program: Program, limits: EngineLimits = EngineLimits(),
                 occurs_check: bool = True, trace: Optional[Callable] = None,
                 use_library: bool = True):
        self.limits = limits
        self.occurs_check = occurs_check
        self.trace = trace
        self.preds = {}
        for clause in program.clauses:
            self.preds.setdefault(clause.key, []).append(_Compiled(clause))
        if use_library:
            user_keys = set(self.preds)
            for clause in library_program().clauses:
                if clause.key not in user_keys:
                    self.preds.setdefault(clause.key, []).append(_Compiled(clause))
        self.unknowns = {}
        self.output = []

    def defined(self) -> set:
        return set(self.preds)

    def query(self, goal, var_names=None) -> "Solver":
        return Solver(self, goal, var_names)

    def solve(self, goal, var_names=None) -> SolveOutcome:
        """Enumerate up to ``max_solutions`` answers of ``goal``."""
        solver = self.query(goal, var_names)
        outcome = SolveOutcome()
        for sol in solver:
            outcome.solutions.append(sol)
            if len(outcome.solutions) >= self.limits.max_solutions:
                break
        outcome.status = solver.status
        if solver.status is None:
            outcome.status = CHOICE_POINTS_REMAIN if solver.has_choice_points() else EXHAUSTED
        outcome.steps_used = solver.steps
        outcome.unknowns = list(self.unknowns.values())
        outcome.call_chain = solver.call_chain
        return outcome


class Solver:
    """Pull-based solution stream for one query."""

    def __init__(self, engine: Engine, goal, var_names=None):
        self.engine = engine
        self.limits = engine.limits
        self.store = Bindings(occurs_check=engine.occurs_check)
        self.cps = []
        self.steps = 0
        self.status = None
        self.call_chain = ()
        qvars = {}
        top = -1
        for v in variables(goal):
            top = max(top, v.id)
            if not v.name.startswith("_"):
                qvars.setdefault(v.name, v)
        if var_names is not None:
            qvars = {n: v for n, v in qvars.items() if n in var_names}
        self.qvars = qvars
        self.next_var = top + 1
        self.goal = goal
        self._gen = self._run()

    def __iter__(self):
        return self

    def __next__(self) -> Solution:
        return next(self._gen)

    def has_choice_points(self) -> bool:
        return bool(self.cps)

    # -- helpers
    def _trace(self, port, goal, depth):
        if self.engine.trace is not None:
            self.engine.trace(port, depth, format_term(self.store.resolve(goal)))

    def _chain(self, frame, goal):
        chain = []
        if type(goal) in (Atom, Compound):
            chain.append((goal.name, len(goal.args) if type(goal) is Compound else 0))
        f = frame
        while f is not None:
            owner = f[4]
            if owner is not None and (not chain or chain[-1] != owner):
                chain.append(owner)
            f = f[1]
        chain.reverse()
        return tuple(c for c in chain if not c[0].startswith("$"))

    def _build(self, t, base, made=None):
        tt = type(t)
        if tt is _Slot:
            if made is not None:
                made.add(t.i)
            return Var("_", base + t.i)
        if tt is _Tmpl:
            return Compound(t.name, tuple(self._build(a, base, made) for a in t.args))
        return t

    def _unify_head(self, tmpl, term, base) -> bool:
        store = self.store
        stack = [(tmpl, term)]
        # clause variables materialized into the goal may now occur in it, so
        # binding them needs the occurs check; other fresh variables cannot
        made = set()
        while stack:
            p, t = stack.pop()
            tp = type(p)
            if tp is _Slot:
                vid = base + p.i
                if vid in store.map:
                    if not store.unify(Var("_", vid), t):
                        return False
                else:
                    t = store.deref(t)
                    if type(t) is Var and t.id == vid:
                        continue
                    if (p.i in made and store.occurs_check and type(t) is Compound
                            and store.occurs(vid, t)):
                        return False
                    store.bind(vid, t)
            elif tp is _Tmpl:
                t = store.deref(t)
                if type(t) is Var:
                    if not store.unify(t, self._build(p, base, made)):
                        return False
                elif type(t) is Compound and t.name == p.name and len(t.args) == len(p.args):
                    stack.extend(zip(p.args, t.args))
                else:
                    return False
            else:
                if not store.unify(p, t):
                    return False
        return True

    def _candidates(self, clauses, goal):
        if type(goal) is not Compound:
            return clauses
        first = self.store.deref(goal.args[0])
        if type(first) is Var:
            return clauses
        key = _first_arg_key(first)
        return [c for c in clauses if c.key1 is None or c.key1 == key]

    def _try_clause(self, compiled, goal, frame_next, barrier, depth):
        """Unify with a clause head; returns the new continuation or None."""
        base = self.next_var
        self.next_var += compiled.nvars
        head = compiled.head
        if type(head) is not Atom and not self._unify_head(head, goal, base):
            return None
        cont = frame_next
        if self.engine.trace is not None:
            cont = (_Exit(goal, depth), cont, barrier, depth + 1, None)
        owner = compiled.owner
        d = 0 if cont is None else cont[3]
        for g in reversed(compiled.body):
            d += 1
            cont = (self._build(g, base), cont, barrier, d, owner)
        return cont if cont is not None else _EMPTY

    def _backtrack(self):
        """Resume the most recent choice point; returns a frame, ``_EMPTY`` or ``None``."""
        cps = self.cps
        store = self.store
        while cps:
            cp = cps[-1]
            store.undo(cp.mark)
            kind = cp.kind
            if kind == CP_CLAUSES:
                goal, frame_next, candidates, depth = cp.data
                i = cp.index
                cp.index = i + 1
                barrier = len(cps) - 1
                if i + 1 >= len(candidates):
                    cps.pop()
                self._trace("redo", goal, depth)
                cont = self._try_clause(candidates[i], goal, frame_next, barrier, depth)
                if cont is not None:
                    return cont
                store.undo(cp.mark)
                continue
            cps.pop()
            if kind == CP_ALT:
                return cp.frame if cp.frame is not None else _EMPTY
            if kind == CP_BETWEEN:
                var, value, high, depth = cp.data
                if value < high:
                    cps.append(_Choice(CP_BETWEEN, len(store.trail), cp.frame,
                                       (var, value + 1, high, depth)))
                store.unify(var, Int(value))
                return cp.frame if cp.frame is not None else _EMPTY
            if kind == CP_FINDALL:
                results, result_term = cp.data
                if store.unify(result_term, make_list(results)):
                    return cp.frame if cp.frame is not None else _EMPTY
                continue
        return None

    def _solution(self):
        store = self.store
        bindings = {name: store.resolve(v) for name, v in self.qvars.items()}
        return Solution(bindings, bool(self.cps))

    # -- main loop
    def _run(self):
        limits = self.limits
        store = self.store
        cps = self.cps
        frame = (self.goal, None, 0, 1, None)
        while True:
            if frame is None:
                self.status = EXHAUSTED
                return
            if frame is _EMPTY:
                yield self._solution()
                frame = self._backtrack()
                continue
            goal, nxt, barrier, depth, owner = frame
            tg = type(goal)
            if tg is _Exit:
                self._trace("exit", goal.goal, goal.level)
                frame = nxt if nxt is not None else _EMPTY
                continue
            if tg is _Then:
                del cps[goal.barrier:]
                frame = (goal.goal, nxt, barrier, depth, owner)
                continue
            if tg is _NotFail:
                del cps[goal.barrier:]
                frame = self._backtrack()
                continue
            if tg is _Collect:
                state = goal.state
                state[0].append(store.resolve(state[1]))
                frame = self._backtrack()
                continue
            goal = store.deref(goal)
            tg = type(goal)
            if tg is Compound and goal.name == "," and len(goal.args) == 2:
                rest = (goal.args[1], nxt, barrier, depth, owner)
                frame = (goal.args[0], rest, barrier, depth + 1, owner)
                continue
            if self.steps >= limits.max_steps:
                self.status = STEP_LIMIT
                self.call_chain = self._chain(nxt, goal)
                return
            if depth > limits.max_depth:
                self.status = DEPTH_LIMIT
                self.call_chain = self._chain(nxt, goal)
                return
            self.steps += 1
            if tg is Var:
                raise PrologRuntimeError(INSTANTIATION, "goal is not sufficiently instantiated",
                                         goal.span, self._chain(nxt, goal))
            if tg is Atom:
                key = (goal.name, 0)
            elif tg is Compound:
                key = (goal.name, len(goal.args))
            else:
                raise PrologRuntimeError(TYPE_ERROR, f"`{format_term(goal)}` is not callable",
                                         goal.span, self._chain(nxt, goal))
            try:
                frame = self._step(goal, key, nxt, barrier, depth, owner)
            except PrologRuntimeError as err:
                raise err.with_context(getattr(goal, "span", None), self._chain(nxt, goal))

    def _cont(self, nxt):
        return nxt if nxt is not None else _EMPTY

    def _step(self, goal, key, nxt, barrier, depth, owner):
        store = self.store
        cps = self.cps
        name = key[0]
        preds = self.engine.preds
        if key in preds:
            clauses = preds[key]
            candidates = self._candidates(clauses, goal)
            self._trace("call", goal, depth)
            if not candidates:
                self._trace("fail", goal, depth)
                return self._backtrack()
            new_barrier = len(cps)
            mark = len(store.trail)
            if len(candidates) > 1:
                cps.append(_Choice(CP_CLAUSES, mark, None, (goal, nxt, candidates, depth), 1))
            cont = self._try_clause(candidates[0], goal, nxt, new_barrier, depth)
            if cont is None:
                store.undo(mark)
                if len(candidates) == 1:
                    self._trace("fail", goal, depth)
                return self._backtrack()
            return cont
        if key in DETERMINISTIC:
            mark = len(store.trail)
            self._trace("call", goal, depth)
            if self._deterministic(goal, key):
                self._trace("exit", goal, depth)
                return self._cont(nxt)
            self._trace("fail", goal, depth)
            store.undo(mark)
            return self._backtrack()
        args = goal.args if type(goal) is Compound else ()
        if name == "true":
            return self._cont(nxt)
        if name in ("fail", "false") and not args:
            return self._backtrack()
        if name == "!" and not args:
            del cps[barrier:]
            return self._cont(nxt)
        if name == ";" and len(args) == 2:
            left, right = args
            left = store.deref(left)
            if type(left) is Compound and left.name == "->" and len(left.args) == 2:
                cps.append(_Choice(CP_ALT, len(store.trail),
                                   (right, nxt, barrier, depth, owner)))
                cond_barrier = len(cps)
                then = _Then(cond_barrier - 1, left.args[1])
                return (left.args[0], (then, nxt, barrier, depth, owner), cond_barrier,
                        depth + 1, owner)
            cps.append(_Choice(CP_ALT, len(store.trail), (right, nxt, barrier, depth, owner)))
            return (left, nxt, barrier, depth, owner)
        if name == "->" and len(args) == 2:
            cond_barrier = len(cps)
            then = _Then(cond_barrier, args[1])
            return (args[0], (then, nxt, barrier, depth, owner), cond_barrier, depth + 1, owner)
        if name == "\\+" and len(args) == 1:
            cps.append(_Choice(CP_ALT, len(store.trail), nxt))
            inner = len(cps)
            return (args[0], (_NotFail(inner - 1), None, barrier, depth + 1, owner), inner,
                    depth + 1, owner)
        if name == "call" and args:
            target = store.deref(args[0])
            extra = args[1:]
            if extra:
                if type(target) is Atom:
                    target = Compound(target.name, tuple(extra))
                elif type(target) is Compound:
                    target = Compound(target.name, target.args + tuple(extra))
                elif type(target) is Var:
                    raise PrologRuntimeError(INSTANTIATION, "call/N: goal is unbound")
                else:
                    raise PrologRuntimeError(TYPE_ERROR,
                                             f"`{format_term(target)}` is not callable")
            return (target, nxt, len(cps), depth, owner)
        if name == "findall" and len(args) == 3:
            template, inner_goal, result = args
            results = []
            cps.append(_Choice(CP_FINDALL, len(store.trail), nxt, (results, result)))
            inner = len(cps)
            collect = _Collect((results, template))
            return (inner_goal, (collect, None, inner, depth + 1, owner), inner, depth + 1, owner)
        if name == "between" and len(args) == 3:
            low = eval_int(store, args[0])
            high_t = store.deref(args[1])
            if type(high_t) is Atom and high_t.name in ("inf", "infinite"):
                high = float("inf")
            else:
                high = eval_int(store, args[1])
            x = store.deref(args[2])
            if type(x) is Int:
                return self._cont(nxt) if low <= x.value <= high else self._backtrack()
            if type(x) is not Var:
                raise PrologRuntimeError(TYPE_ERROR, "between/3: integer expected")
            if low > high:
                return self._backtrack()
            if low < high:
                cps.append(_Choice(CP_BETWEEN, len(store.trail), nxt, (x, low + 1, high, depth)))
            store.unify(x, Int(low))
            return self._cont(nxt)
        # unknown predicate: record once, then fail
        if key not in self.engine.unknowns:
            self.engine.unknowns[key] = PrologRuntimeError(
                UNKNOWN_PREDICATE, f"unknown procedure {name}/{key[1]}",
                getattr(goal, "span", None), self._chain(nxt, goal), predicate=key)
        self._trace("fail", goal, depth)
        return self._backtrack()

    def _deterministic(self, goal, key) -> bool:
        store = self.store
        name = key[0]
        args = goal.args if type(goal) is Compound else ()
        if name == "=":
            return store.unify(args[0], args[1])
        if name == "\\=":
            mark = len(store.trail)
            ok = store.unify(args[0], args[1])
            store.undo(mark)
            return not ok
        if name == "==":
            return identical(store, args[0], args[1])
        if name == "\\==":
            return not identical(store, args[0], args[1])
        if name == "is":
            value = eval_arith(args[1], store.deref)
            return store.unify(args[0], to_term(value))
        if name in _COMPARE:
            a = eval_arith(args[0], store.deref)
            b = eval_arith(args[1], store.deref)
            return _COMPARE[name](a, b)
        if name in _TYPE_CHECKS and len(args) == 1:
            return _TYPE_CHECKS[name](store.deref(args[0]))
        if name == "is_list":
            t = store.deref(args[0])
            while type(t) is Compound and t.name == "." and len(t.args) == 2:
                t = store.deref(t.args[1])
            return type(t) is Atom and t.name == "[]"
        if name in ("msort", "sort"):
            items = self._proper_list(args[0])
            items = _sorted(store, items, dedup=(name == "sort"))
            return store.unify(args[1], make_list(items))
        if name in ("write", "print"):
            self.engine.output.append(format_term(store.resolve(args[0]), quoted=False))
            return True
        if name == "nl":
            self.engine.output.append("\n")
            return True
        raise AssertionError(f"unhandled builtin {key}")

    def _proper_list(self, t):
        store = self.store
        items = []
        t = store.deref(t)
        while type(t) is Compound and t.name == "." and len(t.args) == 2:
            items.append(store.resolve(t.args[0]))
            t = store.deref(t.args[1])
        if type(t) is Var:
            raise PrologRuntimeError(INSTANTIATION, "list is not sufficiently instantiated")
        if not (type(t) is Atom and t.name == "[]"):
            raise PrologRuntimeError(TYPE_ERROR, "list expected")
        return items


_EMPTY = object()


def eval_int(store, t) -> int:
    v = store.deref(t)
    if type(v) is Var:
        raise PrologRuntimeError(INSTANTIATION, "arguments are not sufficiently instantiated")
    if type(v) is not Int:
        raise PrologRuntimeError(TYPE_ERROR, f"integer expected, got `{format_term(v)}`")
    return v.value


def _sorted(store, items, dedup=False):
    from functools import cmp_to_key
    out = sorted(items, key=cmp_to_key(lambda a, b: compare_terms(store, a, b)))
    if dedup:
        uniq = []
        for item in out:
            if not uniq or compare_terms(store, uniq[-1], item) != 0:
                uniq.append(item)
        out = uniq
    return out
