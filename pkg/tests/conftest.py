from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"
ASSIGNMENT = FIXTURES / "assignment"
BUGS = FIXTURES / "bugs"

BASE = "mult([], _, []).\n"
REC = "mult([E1 | L1], N, [E2 | L2]) :- E2 is E1 * N, mult(L1, N, L2).\n"
CUT_MAX = "max(X, Y, X) :- X >= Y, !.\nmax(_, Y, Y).\n"
NOCUT_MAX = "max(X, Y, X) :- X >= Y.\nmax(_, Y, Y).\n"

MULT_TESTS = """:- begin_tests(mult).
test(empty) :- mult([], 5, []).
test(three) :- mult([1,2,3], 2, X), X == [2,4,6].
test(negative) :- mult([-1,4], -3, [3,-12]).
:- end_tests(mult).
"""

MAX_TESTS = """:- begin_tests(max).
test(first) :- max(3, 2, M), M =:= 3.
test(second) :- max(2, 7, M), M =:= 7.
test(equal) :- max(4, 4, 4).
:- end_tests(max).
"""

VARIANTS = {
    "mult": {
        "correct": BASE + REC,
        "no_base": REC,
        "wrong_op": BASE + "mult([E1 | L1], N, [E2 | L2]) :- E2 = E1 * N, mult(L1, N, L2).\n",
    },
    "max": {
        "correct": CUT_MAX,
        "nocut": NOCUT_MAX,
        "swapped": "max(X, Y, Y) :- X >= Y, !.\nmax(X, _, X).\n",
        "only_first": "max(X, Y, X) :- X >= Y.\n",
        "only_second": "max(_, Y, Y).\n",
    },
}

# pass-sets per variant, worked out by hand from the test bodies
VARIANT_PASSES = {
    ("mult", "correct"): {"empty", "three", "negative"},
    ("mult", "no_base"): set(),
    ("mult", "wrong_op"): {"empty"},
    ("max", "correct"): {"first", "second", "equal"},
    ("max", "nocut"): {"first", "second", "equal"},
    ("max", "swapped"): {"equal"},
    ("max", "only_first"): {"first", "equal"},
    ("max", "only_second"): {"second", "equal"},
}

HISTORIES = {
    "mult": {
        "m1": ["no_base", "correct"],
        "m2": ["wrong_op", "wrong_op", "correct"],
        "m3": ["correct"],
        "m4": ["no_base", "wrong_op", "no_base", "correct"],
    },
    "max": {
        "x1": ["only_first", "only_second", "correct", "correct"],
        "x2": ["swapped", "only_first", "correct"],
        "x3": ["correct", "only_second"],
        "x4": ["nocut"],
        "x5": ["only_second", "only_first", "correct", "swapped", "correct"],
        "x6": ["swapped", "swapped", "nocut", "correct", "only_first"],
    },
}

CORPUS_SIZE = sum(len(v) for students in HISTORIES.values() for v in students.values())
T0 = 1_700_000_000


def build_corpus(root: Path) -> Path:
    """Write the synthetic corpus under ``root`` and return it."""
    tests = {"mult": MULT_TESTS, "max": MAX_TESTS}
    for assignment, students in HISTORIES.items():
        adir = root / assignment
        adir.mkdir(parents=True)
        (adir / "tests.plt").write_text(tests[assignment], encoding="utf-8")
        for student, versions in students.items():
            sdir = adir / student
            sdir.mkdir()
            for i, v in enumerate(versions):
                (sdir / f"{T0 + 3600 * i}.pl").write_text(VARIANTS[assignment][v],
                                                          encoding="utf-8")
    return root


@pytest.fixture
def corpus(tmp_path):
    return build_corpus(tmp_path / "corpus")


@pytest.fixture
def assignment_dir():
    return ASSIGNMENT


# one line per acceptance criterion, printed after the run
ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
