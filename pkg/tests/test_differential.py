import json
import sys
import time
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tools"))

import differential  # noqa: E402

FIXTURE = json.loads(differential.FIXTURE.read_text(encoding="utf-8"))
CASES = FIXTURE["cases"]


def mismatches(cases):
    bad = []
    for case in cases:
        theirs = differential.normalize_swipl(case["swipl_answer"])
        ours = differential.run_plgrader(case)
        if not differential.same_answers(theirs, ours):
            bad.append((case["id"], differential.describe(theirs), differential.describe(ours)))
    return bad


class TestFrozenOracle:
    def test_fixture_matches_generator(self):
        fresh = differential.generate_cases()
        assert [(c["program"], c["query"]) for c in fresh] == \
            [(c["program"], c["query"]) for c in CASES]

    def test_enough_cases(self):
        assert len(CASES) >= 200

    def test_programs_are_small(self):
        from plgrader.syntax import parse_program_strict
        assert all(len(parse_program_strict(c["program"]).clauses) <= 6 for c in CASES)

    def test_cases_exercise_answers(self):
        kinds = [differential.normalize_swipl(c["swipl_answer"])[0] for c in CASES]
        multi = [c for c in CASES if differential.normalize_swipl(c["swipl_answer"])[0] == "ok"
                 and len(differential.normalize_swipl(c["swipl_answer"])[1]) >= 2]
        assert kinds.count("ok") >= 150
        assert len(multi) >= 15

    def test_full_agreement(self):
        start = time.perf_counter()
        bad = mismatches(CASES)
        assert bad == []
        assert time.perf_counter() - start < 60


@pytest.mark.skipif(not differential.swipl_available(), reason="node or swipl-wasm not installed")
class TestLiveOracle:
    def test_live_sample_agrees(self):
        sample = CASES[::20]
        answers = differential.run_swipl(sample)
        for case in sample:
            assert differential.same_answers(
                differential.normalize_swipl(answers[case["id"]]),
                differential.normalize_swipl(case["swipl_answer"])), case["id"]
