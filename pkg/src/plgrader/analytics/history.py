"""Labels for consecutive submissions of one student to one assignment."""
from __future__ import annotations

from dataclasses import dataclass

FIRST = "FirstSubmission"
BUG_FIXED = "BugFixed"
BUG_INTRODUCED = "BugIntroduced"
MIXED = "Mixed"
NO_CHANGE = "NoChange"
CATEGORIES = (FIRST, BUG_FIXED, BUG_INTRODUCED, MIXED, NO_CHANGE)


@dataclass(frozen=True)
class SubmissionRecord:
    student: str
    assignment: str
    timestamp: int
    source: str = ""
    pass_set: frozenset = frozenset()
    clause_count: int = 0


@dataclass(frozen=True)
class HistoryLabel:
    category: str
    correct: bool

    @property
    def outcome(self) -> str:
        return "Correct" if self.correct else "Incorrect"

    def __str__(self):
        return f"{self.category}/{self.outcome}"


def compare_pass_sets(previous, current, ever_passed=None) -> str:
    """Category of ``current`` relative to the previous pass-set.

    ``ever_passed`` is the union of all earlier pass-sets (defaults to
    ``previous``); losing a test that passed in any earlier version while
    gaining a new one counts as Mixed.
    """
    previous, current = set(previous), set(current)
    ever = previous if ever_passed is None else set(ever_passed) | previous
    if current == previous:
        return NO_CHANGE
    if current - previous and ever - current:
        return MIXED
    if current > previous:
        return BUG_FIXED
    if current < previous:
        return BUG_INTRODUCED
    return MIXED


def classify_history(history, full_tests) -> list:
    """One label per submission, comparing each pass-set with the earlier ones."""
    if not history:
        raise ValueError("empty submission history")
    full = frozenset(full_tests)
    labels = []
    previous = None
    ever = set()
    for record in history:
        if previous is not None and record.timestamp <= previous.timestamp:
            raise ValueError(f"submission timestamps of {record.student} are not increasing")
        if previous is None:
            category = FIRST
        else:
            category = compare_pass_sets(previous.pass_set, record.pass_set, ever)
        labels.append(HistoryLabel(category, frozenset(record.pass_set) == full))
        ever |= set(record.pass_set)
        previous = record
    return labels
