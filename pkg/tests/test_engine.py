import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plgrader.engine import (CHOICE_POINTS_REMAIN, DEPTH_LIMIT, EXHAUSTED, STEP_LIMIT, Engine,
                              EngineLimits, PrologRuntimeError, apply_subst, unify)
from plgrader.syntax import (Atom, Compound, Int, Var, format_term, parse_program_strict,
                              parse_query, variant)

MULT = """mult([], _, []).
mult([E1 | L1], N, [E2 | L2]) :- E2 is E1 * N, mult(L1, N, L2).
"""
MAX_NOCUT = "max(X, Y, X) :- X >= Y.\nmax(_, Y, Y).\n"
MAX_CUT = "max(X, Y, X) :- X >= Y, !.\nmax(_, Y, Y).\n"


def run(src, query, **limits):
    engine = Engine(parse_program_strict(src), EngineLimits(**limits))
    return engine, engine.solve(parse_query(query))


def answers(src, query, **limits):
    _, outcome = run(src, query, **limits)
    return [{k: format_term(v) for k, v in s.bindings.items()} for s in outcome.solutions]


class TestResolution:
    def test_facts_in_clause_order(self):
        src = "p(1).\np(2).\np(3).\n"
        assert answers(src, "p(X)") == [{"X": "1"}, {"X": "2"}, {"X": "3"}]

    def test_rules_and_backtracking(self):
        src = "edge(a,b).\nedge(b,c).\npath(X,Y) :- edge(X,Y).\npath(X,Y) :- edge(X,Z), path(Z,Y).\n"
        assert answers(src, "path(a, Y)") == [{"Y": "b"}, {"Y": "c"}]

    def test_mult(self):
        assert answers(MULT, "mult([1,2,3], 2, X)") == [{"X": "[2, 4, 6]"}]

    def test_failure_has_no_solutions(self):
        _, outcome = run(MULT, "mult([1], 2, [3])")
        assert outcome.solutions == [] and outcome.status == EXHAUSTED

    def test_cut_commits(self):
        assert answers(MAX_CUT, "max(3, 2, M)") == [{"M": "3"}]
        assert answers(MAX_NOCUT, "max(3, 2, M)") == [{"M": "3"}, {"M": "2"}]

    def test_cut_is_local_to_the_clause(self):
        src = "a(X) :- b(X), !.\nb(1).\nb(2).\nc(X) :- a(X).\nc(9).\n"
        assert answers(src, "c(X)") == [{"X": "1"}, {"X": "9"}]

    def test_negation_as_failure(self):
        src = "p(1).\n"
        assert answers(src, "\\+ p(2)") == [{}]
        assert answers(src, "\\+ p(1)") == []

    def test_if_then_else(self):
        assert answers("", "( 1 > 2 -> X = a ; X = b )") == [{"X": "b"}]
        assert answers("", "( member(Y, [1,2]) -> X = Y ; X = none )") == [{"X": "1", "Y": "1"}]

    def test_disjunction(self):
        assert answers("", "( X = 1 ; X = 2 )") == [{"X": "1"}, {"X": "2"}]

    def test_findall_and_between(self):
        assert answers("", "findall(X, between(1, 4, X), L)") == [{"X": "X", "L": "[1, 2, 3, 4]"}]

    def test_library(self):
        assert answers("", "append(X, Y, [1,2])") == [
            {"X": "[]", "Y": "[1, 2]"}, {"X": "[1]", "Y": "[2]"}, {"X": "[1, 2]", "Y": "[]"}]
        assert answers("", "length([a,b,c], N), reverse([1,2,3], R)") == [
            {"N": "3", "R": "[3, 2, 1]"}]
        assert answers("add(X, A0, A) :- A is A0 + X.\n", "foldl(add, [1,2,3], 0, S)") == [
            {"S": "6"}]

    def test_maplist_with_closure(self):
        src = "double(X, Y) :- Y is 2 * X.\n"
        assert answers(src, "maplist(double, [1,2], L)") == [{"L": "[2, 4]"}]

    def test_user_definition_shadows_library(self):
        src = "member(x, _).\n"
        assert answers(src, "member(Y, [1])") == [{"Y": "x"}]

    def test_call_with_extra_arguments(self):
        src = "add(X, Y, Z) :- Z is X + Y.\n"
        assert answers(src, "call(add(1), 2, Z)") == [{"Z": "3"}]


class TestArithmetic:
    @pytest.mark.parametrize("expr,value", [
        ("7 // 2", "3"), ("-7 // 2", "-3"), ("7 mod 3", "1"), ("-7 mod 3", "2"),
        ("7 / 2", "3.5"), ("6 / 2", "3"), ("2 * 3 + 4", "10"), ("abs(-3)", "3"),
    ])
    def test_evaluation(self, expr, value):
        assert answers("", f"X is {expr}") == [{"X": value}]

    def test_comparison(self):
        assert answers("", "1 + 1 =:= 2") == [{}]
        assert answers("", "1 =\\= 1") == []

    def test_unbound_is_an_error(self):
        with pytest.raises(PrologRuntimeError) as info:
            run("", "X is Y + 1")
        assert info.value.kind == "instantiation"

    def test_division_by_zero(self):
        with pytest.raises(PrologRuntimeError) as info:
            run("", "X is 1 / 0")
        assert info.value.kind == "zero_divisor"

    def test_type_error(self):
        with pytest.raises(PrologRuntimeError) as info:
            run("", "X is foo + 1")
        assert info.value.kind == "type_error"


class TestChoicePoints:
    def test_indexing_leaves_no_choice_point(self):
        _, outcome = run(MULT, "mult([1,2,3], 2, X)")
        assert not outcome.has_open_alternatives(0)
        assert outcome.status == EXHAUSTED

    def test_open_alternative_without_cut(self):
        _, outcome = run(MAX_NOCUT, "max(3, 2, M)", max_solutions=1)
        assert outcome.has_open_alternatives(0)
        assert outcome.status == CHOICE_POINTS_REMAIN

    def test_cut_closes_alternatives(self):
        _, outcome = run(MAX_CUT, "max(3, 2, M)")
        assert len(outcome.solutions) == 1 and not outcome.has_open_alternatives(0)

    def test_max_solutions(self):
        _, outcome = run("nat(0).\nnat(N) :- nat(M), N is M + 1.\n", "nat(X)", max_solutions=5)
        assert [format_term(s["X"]) for s in outcome.solutions] == ["0", "1", "2", "3", "4"]
        assert outcome.status == CHOICE_POINTS_REMAIN

    def test_bad_solution_index(self):
        _, outcome = run("p.", "p")
        with pytest.raises(IndexError):
            outcome.has_open_alternatives(3)


class TestLimits:
    def test_step_limit(self):
        _, outcome = run("loop :- loop.\n", "loop", max_steps=10_000)
        assert outcome.status == STEP_LIMIT
        assert outcome.steps_used == 10_000
        assert outcome.call_chain[-1] == ("loop", 0)

    def test_depth_limit(self):
        src = "grow(X) :- grow(f(X)), true.\n"
        _, outcome = run(src, "grow(a)", max_depth=500)
        assert outcome.status == DEPTH_LIMIT

    def test_tail_recursion_within_depth(self):
        src = "count(0) :- !.\ncount(N) :- M is N - 1, count(M).\n"
        _, outcome = run(src, "count(50000)", max_depth=100)
        assert len(outcome.solutions) == 1

    def test_invalid_limits(self):
        with pytest.raises(ValueError):
            EngineLimits(max_steps=0)


class TestUnknownPredicates:
    def test_recorded_once_and_fail(self):
        engine, outcome = run("p :- q.\np :- q.\np.\n", "p")
        assert len(outcome.solutions) == 1
        assert list(engine.unknowns) == [("q", 0)]
        assert engine.unknowns[("q", 0)].kind == "unknown_predicate"


class TestTrace:
    def test_ports(self):
        events = []
        engine = Engine(parse_program_strict("p(1).\np(2).\n"), trace=lambda *e: events.append(e))
        engine.solve(parse_query("p(X), X > 5"))
        ports = {port for port, _, _ in events}
        assert {"call", "exit", "redo", "fail"} <= ports


class TestOccursCheck:
    def test_on_by_default(self):
        assert answers("", "X = f(X)") == []

    def test_can_be_disabled(self):
        engine = Engine(parse_program_strict(""), occurs_check=False)
        outcome = engine.solve(parse_query("X = f(Y), Y = a"))
        assert format_term(outcome.solutions[0]["X"]) == "f(a)"


# -- unification properties ----------------------------------------------------

leaf = st.one_of(st.sampled_from([Atom("a"), Atom("b"), Int(1), Int(2)]),
                 st.integers(0, 3).map(lambda i: Var(f"V{i}", i)))
uterms = st.recursive(
    leaf, lambda ch: st.builds(lambda n, a: Compound(n, tuple(a)), st.sampled_from(["f", "g"]),
                               st.lists(ch, min_size=1, max_size=2)), max_leaves=8)


class TestUnifyProperties:
    @settings(max_examples=300, deadline=None)
    @given(uterms, uterms)
    def test_unifier_makes_terms_equal(self, a, b):
        s = unify(a, b)
        if s is not None:
            assert apply_subst(a, s) == apply_subst(b, s)

    @settings(max_examples=300, deadline=None)
    @given(uterms, uterms)
    def test_symmetric(self, a, b):
        s1, s2 = unify(a, b), unify(b, a)
        assert (s1 is None) == (s2 is None)
        if s1 is not None:
            assert variant(apply_subst(a, s1), apply_subst(a, s2))

    @settings(max_examples=200, deadline=None)
    @given(uterms)
    def test_reflexive(self, a):
        assert unify(a, a) == {}
