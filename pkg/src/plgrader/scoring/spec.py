"""Assignment specifications: points, suites and required techniques per predicate."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import jsonschema

from ..engine import EngineLimits
from ..schemas import validate


class SpecError(ValueError):
    """An assignment specification is malformed or inconsistent with its tests."""


@dataclass(frozen=True)
class PredicateSpec:
    name: str
    arity: int
    points: int
    suite: str
    technique: Optional[str] = None

    @property
    def key(self) -> tuple:
        return (self.name, self.arity)

    @property
    def indicator(self) -> str:
        return f"{self.name}/{self.arity}"


@dataclass(frozen=True)
class AssignmentSpec:
    assignment: str
    predicates: tuple = ()
    limits: EngineLimits = field(default_factory=EngineLimits)
    reveal_bodies: bool = True

    def by_suite(self) -> dict:
        return {p.suite: p for p in self.predicates}

    def required_techniques(self) -> dict:
        return {p.key: p.technique for p in self.predicates if p.technique}

    def check_tests(self, cases) -> None:
        """Reject predicates worth points that no test exercises."""
        suites = {c.suite for c in cases}
        for p in self.predicates:
            if p.points > 0 and p.suite not in suites:
                raise SpecError(f"{p.indicator} is worth {p.points} points but suite "
                                f"`{p.suite}` has no tests")


def spec_from_dict(data: dict) -> AssignmentSpec:
    try:
        validate(data, "assignment")
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "top level"
        raise SpecError(f"invalid assignment spec at {where}: {exc.message}") from None
    preds = []
    seen_keys, seen_suites = set(), set()
    for entry in data["predicates"]:
        p = PredicateSpec(entry["name"], entry["arity"], entry["points"],
                          entry.get("suite", entry["name"]), entry.get("technique"))
        if p.key in seen_keys:
            raise SpecError(f"predicate {p.indicator} listed twice")
        if p.suite in seen_suites:
            raise SpecError(f"suite `{p.suite}` attributed to more than one predicate")
        seen_keys.add(p.key)
        seen_suites.add(p.suite)
        preds.append(p)
    limits = EngineLimits(**data.get("limits", {}))
    return AssignmentSpec(data["assignment"], tuple(preds), limits,
                          data.get("reveal_bodies", True))


def load_spec(path) -> AssignmentSpec:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError) as exc:
        raise SpecError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})") from None
    return spec_from_dict(data)
