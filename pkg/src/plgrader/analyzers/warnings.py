"""Informational warnings derived from test results and analyses."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..syntax.writer import format_term
from .suggest import suggest_predicates

OPEN_CHOICE_POINT = "OpenChoicePoint"
UNKNOWN_PREDICATE = "UnknownPredicate"
DIVERGENCE = "Divergence"


@dataclass(frozen=True)
class FeedbackWarning:
    kind: str
    subject: str
    message: str
    suggestion: Optional[object] = None

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "subject": self.subject, "message": self.message}
        if self.suggestion is not None:
            out["suggestion"] = self.suggestion.to_dict()
        return out


def _indicator(key) -> str:
    return f"{key[0]}/{key[1]}"


def open_choice_message(result) -> str:
    text = (f"test {result.case.id}: `{result.case.body_text}` succeeded but left a choice "
            "point open; more answers may exist")
    if result.next_answer is not None:
        shown = ", ".join(f"{n} = {format_term(v)}" for n, v in result.next_answer.items())
        text += f" (next answer: {shown or 'true'})"
    return text + ". Check that this is intended."


def unknown_message(key, suggestion) -> str:
    text = f"unknown predicate {_indicator(key)}"
    if suggestion is not None and suggestion.candidates:
        names = " or ".join(f"{n}/{a}" for n, a, _ in suggestion.candidates)
        text += f"; did you mean {names}?"
    return text


def divergence_message(result) -> str:
    chain = result.call_chain
    culprit = _indicator(chain[-1]) if chain else "the test body"
    return (f"test {result.case.id}: possible infinite loop in {culprit} "
            f"(step limit of {result.steps_used} reached)")


def synthesize_warnings(results, unknowns, defined=()) -> list:
    """Warnings for open choice points, unknown predicates and diverging tests.

    ``unknowns`` holds (name, arity) keys; ``defined`` is the set of
    predicates offered as suggestions. The list is deduplicated and sorted
    by (kind, subject).
    """
    found = {}
    for r in results:
        if r.open_choice_warning:
            found.setdefault((OPEN_CHOICE_POINT, r.case.id),
                             FeedbackWarning(OPEN_CHOICE_POINT, r.case.id, open_choice_message(r)))
        if r.verdict == "Diverged":
            found.setdefault((DIVERGENCE, r.case.id),
                             FeedbackWarning(DIVERGENCE, r.case.id, divergence_message(r)))
    for key in unknowns:
        suggestion = suggest_predicates(key, defined)
        subject = _indicator(key)
        found.setdefault((UNKNOWN_PREDICATE, subject),
                         FeedbackWarning(UNKNOWN_PREDICATE, subject, unknown_message(key, suggestion),
                                 suggestion))
    return [found[k] for k in sorted(found)]
