from hypothesis import given, settings
from hypothesis import strategies as st

from plgrader.analyzers import (HIGHER_ORDER, NON_RECURSIVE, RECURSIVE, build_call_graph,
                                 check_required_technique, classify_solution_type, edit_distance,
                                 suggest_predicates, synthesize_warnings)
from plgrader.engine import EngineLimits
from plgrader.harness import parse_test_file, run_suite
from plgrader.syntax import parse_program_strict

MULT = """mult([], _, []).
mult([E1 | L1], N, [E2 | L2]) :- E2 is E1 * N, mult(L1, N, L2).
"""


def verdict(src, key):
    return classify_solution_type(build_call_graph(parse_program_strict(src)), key)


class TestSolutionType:
    def test_direct_recursion(self):
        v = verdict(MULT, ("mult", 3))
        assert v.verdict == RECURSIVE
        assert v.recursion_evidence[0].start_line == 2

    def test_higher_order(self):
        src = "add(X, A0, A) :- A is A0 + X.\nsum(L, S) :- foldl(add, L, 0, S).\n"
        v = verdict(src, ("sum", 2))
        assert v.verdict == HIGHER_ORDER and v.is_higher_order

    def test_maplist_closure_with_bound_arguments(self):
        src = "scale(N, X, Y) :- Y is X * N.\nmult(L, N, R) :- maplist(scale(N), L, R).\n"
        graph = build_call_graph(parse_program_strict(src))
        assert ("scale", 3) in graph.callees(("mult", 3))
        assert classify_solution_type(graph, ("mult", 3)).verdict == HIGHER_ORDER

    def test_non_recursive(self):
        assert verdict("p(X) :- q(X).\nq(1).\n", ("p", 1)).verdict == NON_RECURSIVE

    def test_recursion_through_private_helper(self):
        src = "len(L, N) :- len_acc(L, 0, N).\nlen_acc([], N, N).\n" \
              "len_acc([_|T], A, N) :- A1 is A + 1, len_acc(T, A1, N).\n"
        assert verdict(src, ("len", 2)).verdict == RECURSIVE

    def test_shared_recursive_helper_is_not_owned(self):
        src = "len(L, N) :- cnt(L, N).\nother(L) :- cnt(L, _).\n" \
              "cnt([], 0).\ncnt([_|T], N) :- cnt(T, M), N is M + 1.\n"
        assert verdict(src, ("len", 2)).verdict == NON_RECURSIVE

    def test_mutual_recursion(self):
        src = "even(0).\neven(N) :- N > 0, M is N - 1, odd(M).\n" \
              "odd(N) :- N > 0, M is N - 1, even(M).\n"
        assert verdict(src, ("even", 1)).verdict == RECURSIVE

    def test_recursion_inside_control_constructs(self):
        src = "p(X) :- ( X > 0 -> Y is X - 1, p(Y) ; true ).\n"
        assert verdict(src, ("p", 1)).verdict == RECURSIVE
        src = "q(X) :- \\+ q(X).\n"
        assert verdict(src, ("q", 1)).verdict == RECURSIVE

    def test_undefined_predicate(self):
        import pytest
        with pytest.raises(KeyError):
            verdict("p.\n", ("zz", 0))


class TestTechnique:
    def test_violations(self):
        ho = {("mult", 3): verdict("s(N,X,Y) :- Y is X*N.\nmult(L,N,R) :- maplist(s(N),L,R).\n",
                                   ("mult", 3))}
        out = check_required_technique(ho, {("mult", 3): RECURSIVE})
        assert len(out) == 1 and "higher-order" in out[0].message
        rec = {("mult", 3): verdict(MULT, ("mult", 3))}
        assert check_required_technique(rec, {("mult", 3): RECURSIVE}) == []
        out = check_required_technique(rec, {("mult", 3): HIGHER_ORDER})
        assert out and "line 2" in out[0].message

    def test_undefined_required_predicate(self):
        out = check_required_technique({}, {("mult", 3): RECURSIVE})
        assert out[0].actual == "Undefined"


# brute-force reachability over random call relations
NAMES = ["p", "q", "r", "s", "t"]
relations = st.dictionaries(st.sampled_from(NAMES), st.lists(st.sampled_from(NAMES), max_size=3),
                            min_size=1)


def program_from(rel):
    lines = []
    for caller in NAMES:
        if caller not in rel:
            continue
        body = ", ".join(f"{c}(X)" for c in rel[caller]) or "true"
        lines.append(f"{caller}(X) :- {body}.")
    return "\n".join(lines) + "\n"


def closure(rel):
    reach = {n: set(rel.get(n, ())) for n in NAMES}
    changed = True
    while changed:
        changed = False
        for n in NAMES:
            new = set().union(*(reach[m] for m in reach[n])) | reach[n]
            if new != reach[n]:
                reach[n] = new
                changed = True
    return reach


class TestRecursionProperty:
    @settings(max_examples=300, deadline=None)
    @given(relations)
    def test_self_reachability_matches_closure(self, rel):
        graph = build_call_graph(parse_program_strict(program_from(rel)))
        reach = closure(rel)
        for n in rel:
            assert ((n, 1) in graph.reachable((n, 1))) == (n in reach[n])

    @settings(max_examples=300, deadline=None)
    @given(relations)
    def test_self_cycle_implies_recursive(self, rel):
        graph = build_call_graph(parse_program_strict(program_from(rel)))
        reach = closure(rel)
        for n in rel:
            if n in reach[n]:
                assert classify_solution_type(graph, (n, 1)).verdict == RECURSIVE


# -- suggestions -----------------------------------------------------------------

def levenshtein(a, b):
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


words = st.text(alphabet="abcmult_", max_size=8)


class TestSuggestions:
    def test_multiply_suggests_mult(self):
        s = suggest_predicates(("multiply", 3), {("mult", 3)})
        assert s.best[:2] == ("mult", 3)

    def test_unrelated_names(self):
        assert suggest_predicates(("foo", 1), {("bar", 2)}).candidates == ()

    def test_typo(self):
        s = suggest_predicates(("lenght", 2), {("length", 2), ("last", 2)})
        assert s.best == ("length", 2, 2)

    def test_arity_mismatch_needs_close_name(self):
        assert suggest_predicates(("mult", 2), {("mult", 3)}).best[:2] == ("mult", 3)
        assert suggest_predicates(("mlt", 2), {("mult", 3)}).best == ("mult", 3, 1)
        assert suggest_predicates(("mutl", 2), {("mult", 3)}).candidates == ()

    def test_ranked_and_bounded(self):
        defined = {("mul", 3), ("mult", 3), ("mults", 3), ("malt", 3), ("melt", 3)}
        s = suggest_predicates(("mult", 3), defined | {("mult", 3)})
        assert len(s.candidates) <= 3
        assert [d for _, _, d in s.candidates] == sorted(d for _, _, d in s.candidates)

    @settings(max_examples=300, deadline=None)
    @given(words, words)
    def test_edit_distance_matches_brute_force(self, a, b):
        assert edit_distance(a, b) == levenshtein(a, b)

    @settings(max_examples=300, deadline=None)
    @given(words, words)
    def test_edit_distance_symmetric(self, a, b):
        assert edit_distance(a, b) == edit_distance(b, a)


class TestWarnings:
    def test_synthesis(self):
        tests = parse_test_file(":- begin_tests(max).\ntest(a) :- max(3, 2, 3).\n"
                                "test(b) :- loop.\ntest(c) :- multiply(1).\n:- end_tests(max).\n")
        program = parse_program_strict("max(X, Y, X) :- X >= Y.\nmax(_, Y, Y).\n"
                                       "loop :- loop.\nmultiplx(_).\n")
        results = run_suite(program, tests.cases, EngineLimits(max_steps=5000))
        unknowns = sorted({k for r in results for k in r.unknowns})
        warnings = synthesize_warnings(results, unknowns, set(program.predicates()))
        kinds = [w.kind for w in warnings]
        assert kinds == sorted(kinds)
        assert {"OpenChoicePoint", "Divergence", "UnknownPredicate"} == set(kinds)
        unknown = next(w for w in warnings if w.kind == "UnknownPredicate")
        assert unknown.message == "unknown predicate multiply/1; did you mean multiplx/1?"
        diverged = next(w for w in warnings if w.kind == "Divergence")
        assert "possible infinite loop in loop/0" in diverged.message

    def test_deduplicated(self):
        tests = parse_test_file(":- begin_tests(s).\ntest(a) :- q.\ntest(b) :- q.\n"
                                ":- end_tests(s).\n")
        results = run_suite(parse_program_strict("p.\n"), tests.cases)
        unknowns = [k for r in results for k in r.unknowns]
        assert len(synthesize_warnings(results, unknowns)) == 1
