"""Static and dynamic analyses behind warnings and technique checks."""
from .callgraph import (HIGHER_ORDER, NON_RECURSIVE, RECURSIVE, CallGraph, CallSite,
                        SolutionTypeVerdict, TechniqueViolation, build_call_graph,
                        check_required_technique, classify_solution_type, goal_calls)
from .suggest import Suggestion, edit_distance, suggest_predicates
from .warnings import (DIVERGENCE, OPEN_CHOICE_POINT, UNKNOWN_PREDICATE, FeedbackWarning,
                       synthesize_warnings)

__all__ = [
    "CallGraph", "CallSite", "DIVERGENCE", "HIGHER_ORDER", "NON_RECURSIVE",
    "OPEN_CHOICE_POINT", "RECURSIVE", "SolutionTypeVerdict", "Suggestion",
    "TechniqueViolation", "UNKNOWN_PREDICATE", "FeedbackWarning", "build_call_graph",
    "check_required_technique", "classify_solution_type", "edit_distance", "goal_calls",
    "suggest_predicates", "synthesize_warnings",
]
