"""Rule-based bug labels for a diff from a failing version to its fix."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..engine.machine import BUILTINS
from ..syntax.parser import INFIX_OPS, PREFIX_OPS
from ..syntax.terms import Atom, Compound, Float, Int, Program, SourceSpan, Var, walk
from .diff import (ADDED, ARITY, CLAUSE_ADDED, CLAUSE_REMOVED, DELETE, FUNCTOR, INSERT, MOVE,
                   PERMUTE, REMOVED, REPLACE, norm)

INCOMPLETE = "Incomplete"
WRONG_ARGUMENT = "WrongArgument"
RULE_GOAL_PROBLEMS = "RuleGoalProblems"
OPERATOR_ERROR = "OperatorError"
WRONG_PREDICATE_NAME = "WrongPredicateName"
DOMAIN_LOGIC_PROBLEM = "DomainLogicProblem"
CUT_PROBLEM = "CutProblem"
WRONG_VARIABLE_CONSTANT = "WrongVariableConstant"
OTHER = "Other"

SUBTYPES = {
    INCOMPLETE: ("MissingPredicate", "MissingClause"),
    WRONG_ARGUMENT: ("ArgumentOrderSwap", "MissingArgument", "ExtraArgument", "Other"),
    RULE_GOAL_PROBLEMS: ("ExtraGoal", "MissingGoal", "GoalOrderSwap"),
    OPERATOR_ERROR: ("WrongOperator", "ListTerminatorsIssue", "MissingNegation"),
    WRONG_PREDICATE_NAME: (),
    DOMAIN_LOGIC_PROBLEM: (),
    CUT_PROBLEM: ("MissingCut", "ExtraCut", "WrongPlacement"),
    WRONG_VARIABLE_CONSTANT: ("WrongVariableName", "WrongConstant"),
    OTHER: (),
}

# edits beyond this many in one clause count as a rewrite
MAX_LOCAL_EDITS = 3

OPERATORS = set(INFIX_OPS) | set(PREFIX_OPS)


@dataclass(frozen=True)
class BugLabel:
    type: str
    subtype: Optional[str] = None
    predicate: str = ""
    evidence: Optional[SourceSpan] = None

    def __post_init__(self):
        allowed = SUBTYPES[self.type]
        if self.subtype is not None and self.subtype not in allowed:
            raise ValueError(f"{self.subtype} is not a subtype of {self.type}")

    def __str__(self):
        return self.type if self.subtype is None else f"{self.type}/{self.subtype}"

    def to_dict(self) -> dict:
        out = {"type": self.type, "subtype": self.subtype, "predicate": self.predicate}
        if self.evidence is not None:
            out["line"] = self.evidence.start_line
            out["column"] = self.evidence.start_col
        return out


def _span(*terms):
    for t in terms:
        span = getattr(t, "span", None)
        if span is not None:
            return span
    return None


def _is_cut(t) -> bool:
    return t == Atom("!")


def _is_negation(t) -> bool:
    return isinstance(t, Compound) and t.name == "\\+" and len(t.args) == 1


def _is_constant(t) -> bool:
    return isinstance(t, (Atom, Int, Float))


def _is_operator_like(name: str, arity: int) -> bool:
    return name in OPERATORS or (name, arity) in BUILTINS


def _var_count(clause, var_name: str) -> int:
    terms = [clause.head] + list(clause.body)
    return sum(1 for t in terms for sub in walk(t)
               if isinstance(sub, Var) and sub.name == var_name)


def _before_cut(clause):
    goals = [norm(g) for g in clause.body]
    return goals[:goals.index(Atom("!"))] if Atom("!") in goals else None


def _cut_moved(old, new) -> bool:
    """Both versions cut, but after different goals."""
    a, b = _before_cut(old), _before_cut(new)
    return a is not None and b is not None and a != b


def _inside_user_call(edit) -> bool:
    """The edit sits in an argument of a call to a non-builtin predicate."""
    goal = edit.goal
    if edit.path[0] == "head" or not isinstance(goal, Compound) or len(edit.path) < 3:
        return False
    return not _is_operator_like(goal.name, len(goal.args))


def label_edit(edit, clause_old, clause_new, predicate: str) -> BugLabel:
    """First matching rule for one atomic edit."""
    where = _span(edit.new, edit.old, edit.goal, clause_new, clause_old)

    def label(kind, sub=None):
        return BugLabel(kind, sub, predicate, where)

    # goals inserted, deleted or moved
    if edit.op == INSERT:
        if _is_cut(edit.new):
            return label(CUT_PROBLEM, "MissingCut")
        if _is_negation(edit.new):
            return label(OPERATOR_ERROR, "MissingNegation")
        return label(RULE_GOAL_PROBLEMS, "MissingGoal")
    if edit.op == DELETE:
        if _is_cut(edit.old):
            return label(CUT_PROBLEM, "ExtraCut")
        return label(RULE_GOAL_PROBLEMS, "ExtraGoal")
    if edit.op == MOVE:
        if _is_cut(edit.new) or _cut_moved(clause_old, clause_new):
            return label(CUT_PROBLEM, "WrongPlacement")
        return label(RULE_GOAL_PROBLEMS, "GoalOrderSwap")
    if edit.op == REPLACE and len(edit.path) == 2 and _is_negation(edit.new) \
            and norm(edit.new.args[0]) == norm(edit.old):
        return label(OPERATOR_ERROR, "MissingNegation")
    # renamed functors: operators first, so `=` -> `is` is not read as a rename
    if edit.op == FUNCTOR:
        old, new = edit.old, edit.new
        if _is_operator_like(old.name, len(old.args)) and \
                _is_operator_like(new.name, len(new.args)):
            return label(OPERATOR_ERROR, "WrongOperator")
        return label(WRONG_PREDICATE_NAME)
    # arguments
    if edit.op == PERMUTE:
        return label(WRONG_ARGUMENT, "ArgumentOrderSwap")
    if edit.op == ARITY:
        more = len(edit.new.args) > len(edit.old.args)
        return label(WRONG_ARGUMENT, "MissingArgument" if more else "ExtraArgument")
    if edit.op == REPLACE:
        if edit.list_tail:
            return label(OPERATOR_ERROR, "ListTerminatorsIssue")
        old, new = edit.old, edit.new
        if _inside_user_call(edit) and isinstance(old, Var) \
                and _var_count(clause_old, old.name) > 1:
            return label(WRONG_ARGUMENT, "Other")
        if isinstance(old, Var) and isinstance(new, Var):
            return label(WRONG_VARIABLE_CONSTANT, "WrongVariableName")
        if _is_constant(old) and _is_constant(new):
            return label(WRONG_VARIABLE_CONSTANT, "WrongConstant")
        return label(WRONG_ARGUMENT, "Other")
    return label(OTHER)


def _counted(edit, rename) -> bool:
    """Renames that follow from a predicate rename are one change, not many."""
    if rename is None or edit.op != FUNCTOR:
        return True
    old_key, new_key = rename
    return not (edit.old.name == old_key[0] and edit.new.name == new_key[0])


def classify_bug(diffs, old: Program, new: Program) -> list:
    """Bug labels for ``old`` -> ``new`` (the fixed version), sorted and deduplicated.

    Labels carry the predicate and an evidence span in the fixed program
    when one exists.
    """
    if not diffs:
        raise ValueError("the programs do not differ")
    labels = set()
    for d in diffs:
        pred = d.indicator
        if d.kind == ADDED:
            labels.add(BugLabel(INCOMPLETE, "MissingPredicate", pred,
                                _span(d.clause_edits[0].new) if d.clause_edits else None))
            continue
        if d.kind == REMOVED:
            labels.add(BugLabel(OTHER, None, pred))
            continue
        rename = (d.renamed_from, d.predicate) if d.renamed_from is not None else None
        if rename is not None:
            first = d.clause_edits[0] if d.clause_edits else None
            labels.add(BugLabel(WRONG_PREDICATE_NAME, None, pred,
                                _span(first.new if first else None)))
        rewritten = []
        for ce in d.clause_edits:
            if ce.kind == CLAUSE_ADDED:
                labels.add(BugLabel(INCOMPLETE, "MissingClause", pred, _span(ce.new)))
                continue
            if ce.kind == CLAUSE_REMOVED:
                labels.add(BugLabel(OTHER, None, pred, _span(ce.old)))
                continue
            edits = [e for e in ce.edits if _counted(e, rename)]
            if len(edits) > MAX_LOCAL_EDITS:
                rewritten.append(ce)
                continue
            for e in edits:
                labels.add(label_edit(e, ce.old, ce.new, pred))
        if rewritten:
            same_heads = all(norm(ce.old.head) == norm(ce.new.head) for ce in rewritten)
            kind = DOMAIN_LOGIC_PROBLEM if same_heads and len(rewritten) >= 2 else OTHER
            labels.add(BugLabel(kind, None, pred, _span(rewritten[0].new)))
    return sorted(labels, key=lambda b: (b.type, b.subtype or "", b.predicate,
                                         b.evidence.start_offset if b.evidence else -1))


def top_level_types(labels) -> list:
    return sorted({b.type for b in labels})
