import random

from hypothesis import given, settings
from hypothesis import strategies as st

from plgrader.engine import EngineLimits
from plgrader.harness import (DIVERGED, ERROR, FAIL, NO_SOLUTION, PASS, diff_outputs,
                               format_path, infer_targets, parse_test_file, run_suite, run_test,
                               subterm_at)
from plgrader.syntax import Atom, Compound, Int, parse_program_strict, parse_query, parse_term

MULT = """mult([], _, []).
mult([E1 | L1], N, [E2 | L2]) :- E2 is E1 * N, mult(L1, N, L2).
"""
SHORT_MULT = "mult([_], _, []).\nmult([E1 | L1], N, [E2 | L2]) :- E2 is E1 * N, mult(L1, N, L2).\n"
LIMITS = EngineLimits(max_steps=10_000)


def suite(body):
    return parse_test_file(f":- begin_tests(t).\n{body}\n:- end_tests(t).\n")


def one(program, test_line, limits=LIMITS):
    tf = suite(test_line)
    assert not tf.errors, tf.errors
    return run_test(parse_program_strict(program).extended(tf.helpers), tf.cases[0], limits)


class TestParsing:
    def test_cases_and_ids(self):
        tf = parse_test_file(":- begin_tests(mult).\ntest(a) :- mult([], 1, []).\n"
                             "test(b, [fail]) :- mult([1], 1, []).\n:- end_tests(mult).\n")
        assert tf.errors == []
        assert [c.id for c in tf.cases] == ["mult:a", "mult:b"]
        assert tf.cases[1].options == frozenset({"fail"})
        assert tf.cases[0].targets == frozenset({("mult", 3)})

    def test_helpers_outside_tests(self):
        tf = parse_test_file("helper(1).\n:- begin_tests(s).\ntest(x) :- helper(1).\n"
                             ":- end_tests(s).\n")
        assert tf.helpers.predicates() == [("helper", 1)]

    def test_all_option(self):
        tf = suite("test(x, [all(X == [1,2])]) :- member(X, [1,2]).")
        template, expected = tf.cases[0].all_of
        assert expected == parse_term("[1,2]")

    def test_errors(self):
        assert parse_test_file(":- begin_tests(a).\ntest(x) :- true.\n").errors
        assert parse_test_file(":- end_tests(a).\n").errors
        assert parse_test_file(":- begin_tests(a).\n:- end_tests(b).\n").errors
        assert suite("test(x, [bogus]) :- true.").errors
        assert suite("test(x, [fail, all(X == [])]) :- true.").errors
        assert suite("test(x) :- true.\ntest(x) :- true.").errors
        assert parse_test_file(":- begin_tests(a).\n:- begin_tests(b).\n").errors

    def test_error_has_position(self):
        tf = suite("test(x, [bogus]) :- true.")
        assert tf.errors[0].span.start_line == 2


class TestTargets:
    def test_suite_name_wins(self):
        body = parse_query("helper(X), mult([1], 2, X)")
        assert infer_targets("mult", body) == frozenset({("mult", 3)})

    def test_all_user_calls_otherwise(self):
        body = parse_query("a(X), b(X), X > 1")
        assert infer_targets("s", body) == frozenset({("a", 1), ("b", 1)})


class TestVerdicts:
    def test_pass(self):
        r = one(MULT, "test(x) :- mult([1,2,3], 2, [2,4,6]).")
        assert r.verdict == PASS and not r.open_choice_warning

    def test_fail_with_diff_from_last_argument(self):
        r = one(SHORT_MULT, "test(x) :- mult([1,2,3], 2, [2,4,6]).")
        assert r.verdict == FAIL
        assert r.diff.rendered == "at list tail after index 1: expected `[6]`, actual `[]`"

    def test_fail_with_diff_from_comparison(self):
        r = one(SHORT_MULT, "test(x) :- mult([1,2,3], 2, X), X == [2,4,6].")
        assert r.verdict == FAIL and r.diff.path is not None

    def test_fail_without_any_answer(self):
        r = one(MULT, "test(x) :- mult([1,2], 2, [2]).")
        assert r.verdict == FAIL
        assert r.diff.actual == NO_SOLUTION or r.diff.path is not None

    def test_fail_option(self):
        assert one(MULT, "test(x, [fail]) :- mult([1], 2, [3]).").verdict == PASS
        assert one(MULT, "test(x, [fail]) :- mult([1], 2, [2]).").verdict == FAIL

    def test_error(self):
        r = one("p(X) :- Y is X + 1, Y > 0.\n", "test(x) :- p(_).")
        assert r.verdict == ERROR and r.error.kind == "instantiation"

    def test_diverged(self):
        r = one("loop :- loop.\n", "test(x) :- loop.")
        assert r.verdict == DIVERGED
        assert r.steps_used == LIMITS.max_steps
        assert r.call_chain[-1] == ("loop", 0)

    def test_depth_limit_is_an_error(self):
        r = one("grow(X) :- grow(f(X)), true.\n", "test(x) :- grow(a).",
                EngineLimits(max_steps=1_000_000, max_depth=300))
        assert r.verdict == ERROR and r.error.kind == "depth_limit"

    def test_open_choice_point_warning(self):
        r = one("max(X, Y, X) :- X >= Y.\nmax(_, Y, Y).\n", "test(x) :- max(3, 2, M), M =:= 3.")
        assert r.verdict == PASS and r.open_choice_warning

    def test_nondet_silences_warning(self):
        r = one("max(X, Y, X) :- X >= Y.\nmax(_, Y, Y).\n",
                "test(x, [nondet]) :- max(3, 2, M), M =:= 3.")
        assert r.verdict == PASS and not r.open_choice_warning

    def test_all_option(self):
        src = "p(1).\np(2).\n"
        assert one(src, "test(x, [all(X == [1,2])]) :- p(X).").verdict == PASS
        r = one(src, "test(x, [all(X == [1,2,3])]) :- p(X).")
        assert r.verdict == FAIL and r.diff is not None

    def test_unknowns_recorded(self):
        r = one("mult(A, B, C) :- multiply(A, B, C).\n", "test(x) :- mult([], 1, []).")
        assert r.unknowns == (("multiply", 3),)


class TestIsolation:
    TESTS = """:- begin_tests(mult).
test(a) :- mult([1], 2, [2]).
test(b) :- mult([1,2], 2, X), X == [2,4].
test(c, [fail]) :- mult([1], 2, [3]).
test(d) :- mult([], 0, []).
test(e) :- mult([5], 0, [1]).
:- end_tests(mult).
"""

    def test_order_does_not_change_verdicts(self):
        tf = parse_test_file(self.TESTS)
        program = parse_program_strict(MULT)
        base = {r.case.id: (r.verdict, r.steps_used) for r in run_suite(program, tf.cases, LIMITS)}
        rng = random.Random(7)
        for _ in range(5):
            cases = list(tf.cases)
            rng.shuffle(cases)
            got = {r.case.id: (r.verdict, r.steps_used) for r in run_suite(program, cases, LIMITS)}
            assert got == base


# -- output diffs ----------------------------------------------------------------

leaf = st.one_of(st.sampled_from([Atom("a"), Atom("b"), Atom("[]")]), st.integers(0, 3).map(Int))
dterms = st.recursive(
    leaf, lambda ch: st.one_of(
        st.builds(lambda n, a: Compound(n, tuple(a)), st.sampled_from(["f", "g"]),
                  st.lists(ch, min_size=1, max_size=3)),
        st.builds(lambda h, t: Compound(".", (h, t)), ch, ch)),
    max_leaves=10)


class TestDiffOutputs:
    def test_examples(self):
        d = diff_outputs(parse_term("f(a, b)"), parse_term("f(a, c)"))
        assert d.rendered == "at arg 2: expected `b`, actual `c`"
        d = diff_outputs(parse_term("[1,2,3]"), parse_term("[1,5,3]"))
        assert format_path(d.path) == "list index 1"

    def test_no_solution(self):
        d = diff_outputs(parse_term("[1]"), NO_SOLUTION)
        assert d.actual == NO_SOLUTION and not d.is_empty

    @settings(max_examples=300, deadline=None)
    @given(dterms)
    def test_identical_terms_have_empty_diff(self, t):
        assert diff_outputs(t, t).is_empty

    @settings(max_examples=300, deadline=None)
    @given(dterms, dterms)
    def test_path_points_at_a_real_difference(self, a, b):
        d = diff_outputs(a, b)
        if a == b:
            assert d.is_empty
            return
        assert not d.is_empty
        assert subterm_at(a, d.path) != subterm_at(b, d.path)

    @settings(max_examples=300, deadline=None)
    @given(dterms, dterms)
    def test_path_exists_in_expected(self, a, b):
        d = diff_outputs(a, b)
        if not d.is_empty:
            subterm_at(a, d.path)
