"""plunit-style test files: parsing, running and expected-vs-actual diffs."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .analyzers.callgraph import goal_calls
from .engine import (DEPTH_LIMIT, STEP_LIMIT, Engine, EngineLimits, PrologRuntimeError)
from .engine.machine import BUILTINS
from .syntax.errors import LineMap, make_error
from .syntax.parser import parse_program
from .syntax.terms import (Atom, Compound, NIL, Program, SourceSpan, Var, conjunction,
                           flatten_conjunction, list_items, make_list, variables, variant)
from .syntax.writer import format_term

PASS = "Pass"
FAIL = "Fail"
ERROR = "Error"
DIVERGED = "Diverged"

NO_SOLUTION = "no solution"
OPTIONS = ("fail", "nondet")
_COMPARISONS = {"==", "=", "=:="}


@dataclass(frozen=True)
class TestCase:
    suite: str
    name: str
    body: object
    options: frozenset = frozenset()
    all_of: Optional[tuple] = None          # (template, expected list) from all(V == L)
    targets: frozenset = frozenset()
    span: Optional[SourceSpan] = None

    @property
    def id(self) -> str:
        return f"{self.suite}:{self.name}"

    @property
    def body_text(self) -> str:
        return format_term(self.body)


@dataclass
class TestFile:
    cases: list = field(default_factory=list)
    helpers: Program = field(default_factory=Program)
    errors: list = field(default_factory=list)


@dataclass
class AssertionDiff:
    expected: object
    actual: Union[object, str]
    path: Optional[tuple] = None            # None: no divergence
    rendered: str = ""

    @property
    def is_empty(self) -> bool:
        return self.path is None

    def to_dict(self) -> dict:
        return {"expected": format_term(self.expected),
                "actual": self.actual if isinstance(self.actual, str)
                else format_term(self.actual),
                "path": None if self.path is None else format_path(self.path),
                "rendered": self.rendered}


@dataclass
class TestResult:
    case: TestCase
    verdict: str
    diff: Optional[AssertionDiff] = None
    open_choice_warning: bool = False
    steps_used: int = 0
    error: Optional[PrologRuntimeError] = None
    next_answer: Optional[dict] = None      # bindings of the second answer, if any
    call_chain: tuple = ()
    unknowns: tuple = ()                    # (name, arity) keys called but undefined

    @property
    def passed(self) -> bool:
        return self.verdict == PASS


# -- parsing ------------------------------------------------------------------

def _label(term) -> str:
    return term.name if isinstance(term, Atom) else format_term(term)


def _parse_options(term, lines, span):
    items, tail = list_items(term)
    if tail != NIL:
        raise _option_error(lines, "test options must be a list", span)
    options, all_of = set(), None
    for item in items:
        if isinstance(item, Atom) and item.name in OPTIONS:
            options.add(item.name)
        elif (isinstance(item, Compound) and item.name == "all" and len(item.args) == 1
              and isinstance(item.args[0], Compound) and item.args[0].name == "=="
              and len(item.args[0].args) == 2):
            all_of = item.args[0].args
        else:
            raise _option_error(lines, f"unknown test option `{format_term(item)}`",
                                item.span or span)
    if "fail" in options and all_of is not None:
        raise _option_error(lines, "options `fail` and `all` cannot be combined", span)
    return frozenset(options), all_of


class _OptionError(Exception):
    def __init__(self, err):
        self.err = err


def _option_error(lines, message, span):
    return _OptionError(make_error(lines, message, span.start_offset, span.end_offset))


def infer_targets(suite: str, body) -> frozenset:
    """Predicates a test exercises.

    A called predicate named like the suite wins; otherwise every
    non-builtin predicate called directly from the body.
    """
    called = [key for key, _, _ in goal_calls(body)]
    named = {k for k in called if k[0] == suite}
    if named:
        return frozenset(named)
    return frozenset(k for k in called if k not in BUILTINS)


def parse_test_file(source: str) -> TestFile:
    """Split a test file into test cases and helper clauses.

    Syntax errors and suite-structure errors are collected in ``errors``.
    """
    program, errors = parse_program(source)
    lines = LineMap(source)
    result = TestFile(errors=list(errors))
    items = [(d.span.start_offset, 0, d) for d in program.directives if d.span is not None]
    items += [(c.span.start_offset, 1, c) for c in program.clauses]
    items.sort(key=lambda t: (t[0], t[1]))
    suite, suite_span, seen = None, None, set()
    helpers = []

    def error(message, span):
        result.errors.append(make_error(lines, message, span.start_offset, span.end_offset))

    for _, kind, item in items:
        if kind == 0:
            if isinstance(item, Compound) and item.name in ("begin_tests", "end_tests") \
                    and len(item.args) in (1, 2):
                name = _label(item.args[0])
                if item.name == "begin_tests":
                    if suite is not None:
                        error(f"test suite `{name}` starts inside suite `{suite}`", item.span)
                    suite, suite_span = name, item.span
                elif suite is None:
                    error(f"end_tests({name}) without matching begin_tests", item.span)
                elif name != suite:
                    error(f"end_tests({name}) does not match begin_tests({suite})", item.span)
                else:
                    suite = None
            continue
        clause = item
        head = clause.head
        if suite is None or not (isinstance(head, Compound) and head.name == "test"
                                 and len(head.args) in (1, 2)):
            helpers.append(clause)
            continue
        name = _label(head.args[0])
        options, all_of = frozenset(), None
        if len(head.args) == 2:
            try:
                options, all_of = _parse_options(head.args[1], lines, clause.span)
            except _OptionError as exc:
                result.errors.append(exc.err)
                continue
        if (suite, name) in seen:
            error(f"duplicate test `{name}` in suite `{suite}`", clause.span)
            continue
        seen.add((suite, name))
        body = conjunction(clause.body)
        result.cases.append(TestCase(suite, name, body, options, all_of,
                                     infer_targets(suite, body), clause.span))
    if suite is not None:
        error("unterminated test suite", suite_span)
    result.helpers = Program(helpers)
    result.errors.sort(key=lambda e: (e.span.start_offset, e.span.end_offset))
    return result


# -- diffs --------------------------------------------------------------------

def _is_cons(t) -> bool:
    return isinstance(t, Compound) and t.name == "." and len(t.args) == 2


def _divergence(expected, actual):
    """Path to the first mismatch plus the two subterms there, or None."""
    if isinstance(actual, str):
        return (), expected, actual
    if _is_cons(expected) or _is_cons(actual):
        i = 0
        while _is_cons(expected) and _is_cons(actual):
            found = _divergence(expected.args[0], actual.args[0])
            if found is not None:
                sub, e, a = found
                return (("index", i),) + sub, e, a
            expected, actual = expected.args[1], actual.args[1]
            i += 1
        if expected == actual:
            return None
        return ((("tail", i - 1),) if i else ()), expected, actual
    if isinstance(expected, Compound) and isinstance(actual, Compound) \
            and expected.name == actual.name and len(expected.args) == len(actual.args):
        for n, (e, a) in enumerate(zip(expected.args, actual.args), start=1):
            found = _divergence(e, a)
            if found is not None:
                sub, e2, a2 = found
                return (("arg", n),) + sub, e2, a2
        return None
    if expected == actual:
        return None
    return (), expected, actual


def format_path(path) -> str:
    if not path:
        return "top level"
    parts = []
    for kind, n in path:
        if kind == "index":
            parts.append(f"list index {n}")
        elif kind == "tail":
            parts.append(f"list tail after index {n}")
        else:
            parts.append(f"arg {n}")
    return " > ".join(parts)


def subterm_at(term, path):
    """Follow a divergence path into ``term``."""
    for kind, n in path:
        if kind == "arg":
            term = term.args[n - 1]
            continue
        for _ in range(n if kind == "index" else n + 1):
            term = term.args[1]
        if kind == "index":
            term = term.args[0]
    return term


def diff_outputs(expected, actual) -> AssertionDiff:
    """First position where ``actual`` departs from ``expected``."""
    found = _divergence(expected, actual)
    if found is None:
        return AssertionDiff(expected, actual)
    path, e, a = found
    shown = a if isinstance(a, str) else f"`{format_term(a)}`"
    rendered = f"at {format_path(path)}: expected `{format_term(e)}`, actual {shown}"
    return AssertionDiff(expected, actual, path, rendered)


# -- running ------------------------------------------------------------------

def _first_answer(engine, goal, names):
    """First binding dict for ``names``, NO_SOLUTION, or None when undecided."""
    solver = engine.query(goal)
    try:
        sol = next(solver, None)
    except PrologRuntimeError:
        return None
    if sol is None:
        return NO_SOLUTION if solver.status not in (STEP_LIMIT, DEPTH_LIMIT) else None
    return {n: sol.bindings[n] for n in names if n in sol.bindings}


def expectation(program: Program, body, limits: EngineLimits):
    """Expected and actual values for a failing test body, when one can be told.

    ``..., V == Expected`` compares the value the preceding goals give ``V``;
    otherwise the last goal's final argument is treated as the expected
    output and the goal is re-run with that argument left open.
    """
    goals = flatten_conjunction(body)
    last = goals[-1]
    if isinstance(last, Compound) and last.name in _COMPARISONS and len(last.args) == 2:
        left, right = last.args
        var, expected = (left, right) if isinstance(left, Var) else (right, left)
        if not isinstance(var, Var) or isinstance(expected, Var) or var.name.startswith("_"):
            return None
        prefix = goals[:-1]
        if not prefix:
            return None
        answer = _first_answer(Engine(program, limits), conjunction(prefix), [var.name])
        if answer is None:
            return None
        if answer == NO_SOLUTION:
            return expected, NO_SOLUTION
        return expected, answer.get(var.name, var)
    if isinstance(last, Compound) and last.name not in ("\\+", ",", ";", "->") \
            and not isinstance(last.args[-1], Var):
        top = max((v.id for v in variables(body)), default=-1)
        hole = Var("Actual\u0000", top + 1)
        probe = Compound(last.name, last.args[:-1] + (hole,), last.span)
        answer = _first_answer(Engine(program, limits), conjunction(goals[:-1] + [probe]),
                               [hole.name])
        if answer is None:
            return None
        if answer == NO_SOLUTION:
            return last.args[-1], NO_SOLUTION
        return last.args[-1], answer[hole.name]
    return None


def run_test(program: Program, case: TestCase, limits: EngineLimits = EngineLimits(),
             trace=None) -> TestResult:
    """Run one test case in a fresh engine over ``program``."""
    engine = Engine(program, limits, trace=trace)
    result = _run_test(engine, program, case, limits)
    result.unknowns = tuple(sorted(engine.unknowns))
    return result


def _run_test(engine, program, case, limits):
    result = TestResult(case, FAIL)
    if case.all_of is not None:
        return _run_all(engine, case, *case.all_of, limits, result)
    solver = engine.query(case.body)
    try:
        first = next(solver, None)
    except PrologRuntimeError as err:
        result.verdict, result.error = ERROR, err
        result.steps_used, result.call_chain = solver.steps, err.call_chain
        return result
    result.steps_used = solver.steps
    if first is None:
        return _no_first(program, case, solver, result, limits)
    if "fail" in case.options:
        return result
    result.verdict = PASS
    if first.open_alternatives and "nondet" not in case.options:
        # the second answer only feeds the warning text; the verdict is settled
        result.open_choice_warning = True
        try:
            second = next(solver, None)
        except PrologRuntimeError:
            second = None
        if second is not None:
            result.next_answer = dict(second.bindings)
    return result


def _no_first(program, case, solver, result, limits):
    if solver.status == STEP_LIMIT:
        result.verdict = DIVERGED
        result.call_chain = solver.call_chain
        return result
    if solver.status == DEPTH_LIMIT:
        result.verdict = ERROR
        result.error = PrologRuntimeError("depth_limit", "call depth limit exceeded",
                                          None, solver.call_chain)
        result.call_chain = solver.call_chain
        return result
    if "fail" in case.options:
        result.verdict = PASS
        return result
    result.verdict = FAIL
    found = expectation(program, case.body, limits)
    if found is not None:
        result.diff = diff_outputs(*found)
    return result


def _run_all(engine, case, template, expected, limits, result):
    solver = engine.query(case.body)
    values = []
    try:
        for _ in solver:
            values.append(solver.store.resolve(template))
            if len(values) >= limits.max_solutions:
                break
    except PrologRuntimeError as err:
        result.verdict, result.error = ERROR, err
        result.steps_used, result.call_chain = solver.steps, err.call_chain
        return result
    result.steps_used = solver.steps
    if solver.status == STEP_LIMIT:
        result.verdict = DIVERGED
        result.call_chain = solver.call_chain
        return result
    actual = make_list(values)
    if variant(actual, expected):
        result.verdict = PASS
    else:
        result.verdict = FAIL
        result.diff = diff_outputs(expected, actual)
    return result


def run_suite(submission: Program, tests, limits: EngineLimits = EngineLimits(),
              helpers: Optional[Program] = None, trace=None) -> list:
    """Run every test in declaration order, each in its own engine."""
    program = submission.extended(helpers) if helpers is not None else submission
    return [run_test(program, case, limits, trace) for case in tests]
