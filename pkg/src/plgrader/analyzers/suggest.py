"""Name suggestions for calls to unknown predicates."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from rapidfuzz.distance import Levenshtein

MAX_SUGGESTIONS = 3


def edit_distance(a: str, b: str) -> int:
    return Levenshtein.distance(a, b)


def threshold(name: str) -> int:
    return max(2, math.ceil(len(name) / 2))


@dataclass(frozen=True)
class Suggestion:
    unknown: tuple
    candidates: tuple = field(default_factory=tuple)    # (name, arity, distance)

    @property
    def best(self):
        return self.candidates[0] if self.candidates else None

    def to_dict(self) -> dict:
        return {"unknown": f"{self.unknown[0]}/{self.unknown[1]}",
                "candidates": [{"predicate": f"{n}/{a}", "distance": d}
                               for n, a, d in self.candidates]}


def suggest_predicates(unknown: tuple, defined) -> Suggestion:
    """Defined predicates whose names are close to ``unknown``'s name.

    A candidate needs the same arity unless its name is within one edit.
    """
    name, arity = unknown
    limit = threshold(name)
    found = []
    for cand_name, cand_arity in set(defined):
        if (cand_name, cand_arity) == (name, arity):
            continue
        d = edit_distance(name, cand_name)
        if d <= limit and (cand_arity == arity or d <= 1):
            found.append((d, cand_name, cand_arity))
    found.sort()
    return Suggestion(unknown, tuple((n, a, d) for d, n, a in found[:MAX_SUGGESTIONS]))
