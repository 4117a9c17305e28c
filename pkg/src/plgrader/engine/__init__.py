from .arith import eval_arith
from .errors import PrologRuntimeError
from .library import library_predicates
from .machine import (BUILTINS, CHOICE_POINTS_REMAIN, DEPTH_LIMIT, EXHAUSTED, STEP_LIMIT,
                      Engine, EngineLimits, Solution, SolveOutcome, has_open_alternatives)
from .unify import Bindings, apply_subst, unify

__all__ = [
    "BUILTINS", "Bindings", "CHOICE_POINTS_REMAIN", "DEPTH_LIMIT", "EXHAUSTED", "Engine",
    "EngineLimits", "PrologRuntimeError", "STEP_LIMIT", "Solution", "SolveOutcome",
    "apply_subst", "eval_arith", "has_open_alternatives", "library_predicates", "unify",
]
