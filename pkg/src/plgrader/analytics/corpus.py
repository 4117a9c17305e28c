"""Submission corpora laid out as ``<assignment>/<student>/<unix-ts>.pl``.

Each assignment directory holds a ``tests.plt`` and optionally a
``spec.json`` whose limits are used when running the submissions.
"""
from __future__ import annotations

import re
from pathlib import Path

from ..engine import EngineLimits
from ..harness import parse_test_file, run_suite
from ..scoring.spec import load_spec
from ..syntax.parser import parse_program
from .history import SubmissionRecord

SUBMISSION = re.compile(r"^(\d+)\.pl$")


class CorpusError(ValueError):
    """The corpus directory does not follow the expected layout."""


def assignment_dirs(root) -> list:
    root = Path(root)
    if not root.is_dir():
        raise CorpusError(f"{root} is not a directory")
    return sorted(p for p in root.iterdir() if p.is_dir() and (p / "tests.plt").is_file())


def load_assignment(path, limits=None):
    """Records of one assignment plus the ids of its full test set."""
    path = Path(path)
    tests = parse_test_file((path / "tests.plt").read_text(encoding="utf-8"))
    if tests.errors:
        raise CorpusError(f"{path / 'tests.plt'}: {tests.errors[0]}")
    if limits is None:
        spec_path = path / "spec.json"
        limits = load_spec(spec_path).limits if spec_path.is_file() else EngineLimits()
    records = []
    for student in sorted(p for p in path.iterdir() if p.is_dir()):
        files = sorted((int(m.group(1)), f) for f in student.iterdir()
                       if (m := SUBMISSION.match(f.name)))
        for ts, f in files:
            source = f.read_text(encoding="utf-8")
            program, _ = parse_program(source)
            results = run_suite(program, tests.cases, limits, tests.helpers)
            passed = frozenset(r.case.id for r in results if r.passed)
            records.append(SubmissionRecord(student.name, path.name, ts, source, passed,
                                            len(program.clauses)))
    return records, frozenset(c.id for c in tests.cases)


def load_corpus(root, assignment=None, limits=None):
    """``(records, full test ids per assignment)`` for a corpus directory."""
    records, full = [], {}
    dirs = assignment_dirs(root)
    if assignment is not None:
        dirs = [d for d in dirs if d.name == assignment]
        if not dirs:
            raise CorpusError(f"no assignment `{assignment}` with a tests.plt in {root}")
    for d in dirs:
        recs, ids = load_assignment(d, limits)
        records += recs
        full[d.name] = ids
    return records, full
