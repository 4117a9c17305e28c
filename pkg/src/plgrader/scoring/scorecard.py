"""All-or-nothing predicate scoring."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .spec import AssignmentSpec, SpecError


@dataclass(frozen=True)
class PredicateScore:
    predicate: str
    suite: str
    passed: int
    total: int
    points: int
    awarded: int

    def to_dict(self) -> dict:
        return {"predicate": self.predicate, "suite": self.suite, "passed": self.passed,
                "total": self.total, "points": self.points, "awarded": self.awarded}


@dataclass(frozen=True)
class Scorecard:
    assignment: str
    predicates: tuple = ()
    total_points: int = 0
    max_points: int = 0
    tests_passed: int = 0
    tests_total: int = 0
    warnings: int = 0
    timestamp: Optional[str] = None
    extra: dict = field(default_factory=dict)

    @property
    def all_passed(self) -> bool:
        return self.tests_passed == self.tests_total

    def to_dict(self) -> dict:
        return {"assignment": self.assignment,
                "predicates": [p.to_dict() for p in self.predicates],
                "total_points": self.total_points, "max_points": self.max_points,
                "tests_passed": self.tests_passed, "tests_total": self.tests_total,
                "warnings": self.warnings, "timestamp": self.timestamp}


def score_submission(results, spec: AssignmentSpec, warnings: int = 0,
                     timestamp: Optional[str] = None) -> Scorecard:
    """A predicate earns its points only when every test of its suite passes.

    Tests from suites outside the assignment spec count towards the test totals only.
    """
    suites = [p.suite for p in spec.predicates]
    if len(set(suites)) != len(suites):
        raise SpecError("a suite is attributed to more than one predicate")
    present = {r.case.suite for r in results}
    scores = []
    for p in spec.predicates:
        if p.suite not in present:
            raise SpecError(f"suite `{p.suite}` for {p.indicator} has no test results")
        mine = [r for r in results if r.case.suite == p.suite]
        passed = sum(r.passed for r in mine)
        awarded = p.points if passed == len(mine) else 0
        scores.append(PredicateScore(p.indicator, p.suite, passed, len(mine), p.points, awarded))
    return Scorecard(spec.assignment, tuple(scores), sum(s.awarded for s in scores),
                     sum(p.points for p in spec.predicates), sum(r.passed for r in results),
                     len(results), warnings, timestamp)
