"""The ``plgrader`` command: check, rank, history, classify-bug and stats."""
from __future__ import annotations

import argparse
import json
import os
import signal
import sys
from contextlib import contextmanager
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

import filelock

from .analytics import (CorpusError, category_table, classify_bug, corpus_stats,
                        diff_programs, label_histories, load_corpus, stats_table,
                        top_level_types)
from .analyzers import (build_call_graph, check_required_technique, classify_solution_type,
                        synthesize_warnings)
from .harness import parse_test_file, run_suite
from .schemas import validate
from .scoring import (LeaderboardEntry, LeaderboardError, SpecError, dump_document,
                      load_board, load_spec, rank_table, render_report, score_submission,
                      update_board_file)
from .syntax.errors import render_errors
from .syntax.parser import parse_program

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


class InputError(Exception):
    """Unreadable or malformed input; exit status 2."""


class CheckTimeout(Exception):
    pass


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _write(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _use_color(choice: str, stream) -> bool:
    if choice == "always":
        return True
    if choice == "never":
        return False
    return hasattr(stream, "isatty") and stream.isatty()


def _emit_json(doc: dict, schema: str) -> None:
    validate(doc, schema)
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n")


@contextmanager
def _deadline(seconds: float):
    """Raise CheckTimeout after ``seconds`` of wall-clock time (main thread only)."""
    if not seconds or seconds <= 0 or not hasattr(signal, "SIGALRM"):
        yield
        return

    def expire(signum, frame):
        raise CheckTimeout()

    previous = signal.signal(signal.SIGALRM, expire)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, previous)


def _timestamp(args, program_path: Path) -> str:
    if args.timestamp:
        return args.timestamp
    mtime = program_path.stat().st_mtime
    return datetime.fromtimestamp(int(mtime), timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _trace_printer(port, depth, goal):
    sys.stderr.write(f"{'  ' * min(depth, 40)}{port}: {goal}\n")


# -- check --------------------------------------------------------------------

def check_document(program_path, spec_path, tests_path, max_steps=None, timestamp=None,
                   trace=None):
    """Run the whole pipeline; return ``(markdown, document, syntax errors, source)``."""
    spec = load_spec(spec_path)
    tests = parse_test_file(_read(tests_path))
    if tests.errors:
        raise InputError(f"{tests_path}: {tests.errors[0]}")
    spec.check_tests(tests.cases)
    limits = spec.limits if max_steps is None else replace(spec.limits, max_steps=max_steps)
    source = _read(program_path)
    program, syntax_errors = parse_program(source)

    results = run_suite(program, tests.cases, limits, tests.helpers, trace)
    unknowns = sorted({k for r in results for k in r.unknowns})
    defined = set(program.predicates())
    warnings = synthesize_warnings(results, unknowns, defined)
    suggestions = [w.suggestion for w in warnings if w.suggestion is not None]

    graph = build_call_graph(program)
    verdicts = {key: classify_solution_type(graph, key)
                for key in spec.required_techniques() if graph.is_user(key)}
    violations = check_required_technique(verdicts, spec.required_techniques())

    card = score_submission(results, spec, len(warnings), timestamp)
    md, doc = render_report(card, results, warnings, syntax_errors, suggestions, violations,
                            spec.reveal_bodies, str(program_path))
    return md, doc, syntax_errors, source


def _summary(doc: dict) -> str:
    card = doc["scorecard"]
    lines = [f"{doc['assignment']}: {card['tests_passed']}/{card['tests_total']} tests passed, "
             f"{card['total_points']}/{card['max_points']} points"]
    lines += [f"  {t['id']}: {t['verdict']}" for t in doc["tests"] if t["verdict"] != "Pass"]
    lines += [f"  warning: {w['message']}" for w in doc["warnings"]]
    lines += [f"  technique: {v['message']}" for v in doc["technique"]]
    if doc["syntax_errors"]:
        lines.append(f"  {len(doc['syntax_errors'])} syntax error(s)")
    return "\n".join(lines) + "\n"


def _check_status(doc: dict) -> int:
    clean = (doc["scorecard"]["tests_passed"] == doc["scorecard"]["tests_total"]
             and not doc["warnings"] and not doc["syntax_errors"] and not doc["technique"])
    return EXIT_OK if clean else EXIT_FAILURES


def cmd_check(args) -> int:
    program_path = Path(args.program)
    if not program_path.is_file():
        raise InputError(f"cannot read {program_path}")
    trace = _trace_printer if args.trace else None
    try:
        with _deadline(args.timeout):
            md, doc, errors, source = check_document(
                program_path, args.spec, args.tests, args.max_steps,
                _timestamp(args, program_path), trace)
    except CheckTimeout:
        sys.stderr.write(f"{program_path}: Diverged: evaluation exceeded the time limit of "
                         f"{args.timeout:g} s; possible infinite loop\n")
        return EXIT_FAILURES
    if errors:
        sys.stderr.write(render_errors(source, errors, _use_color(args.color, sys.stderr))
                         + "\n")
    if args.report:
        out = Path(args.report)
        out.mkdir(parents=True, exist_ok=True)
        validate(doc, "report")
        _write(out / "report.md", md)
        _write(out / "report.json", dump_document(doc))
    if args.json:
        _emit_json(doc, "report")
    else:
        sys.stdout.write(_summary(doc))
    return _check_status(doc)


# -- rank ---------------------------------------------------------------------

def _entry_from_scorecard(path, student: str) -> LeaderboardEntry:
    try:
        data = json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON ({exc.msg})") from None
    card = data.get("scorecard", data) if isinstance(data, dict) else None
    if not isinstance(card, dict) or not {"total_points", "tests_passed"} <= card.keys():
        raise InputError(f"{path}: no scorecard with total_points and tests_passed")
    stamp = card.get("timestamp") or datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    return LeaderboardEntry(student, int(card["total_points"]), int(card["tests_passed"]),
                            str(stamp))


def rank_document(board, changed: bool) -> dict:
    return {"changed": changed,
            "board": [{"rank": i, "student": e.student, "points": e.points,
                       "tests_passed": e.tests_passed, "timestamp": e.timestamp}
                      for i, e in enumerate(board, start=1)]}


def cmd_rank(args) -> int:
    board_path = Path(args.board)
    changed = False
    if args.add:
        if not args.student:
            raise InputError("--add needs --student")
        entry = _entry_from_scorecard(args.add, args.student)
        before = load_board(board_path)
        try:
            board = update_board_file(board_path, entry, args.lock_timeout)
        except filelock.Timeout:
            sys.stderr.write(f"could not lock {board_path} within {args.lock_timeout:g} s\n")
            return EXIT_INTERNAL
        changed = board != before
    else:
        board = load_board(board_path)
    if args.json:
        _emit_json(rank_document(board, changed), "rank")
    elif args.show or not args.add:
        sys.stdout.write(rank_table(board))
    else:
        sys.stdout.write("leaderboard updated\n" if changed else "leaderboard unchanged\n")
    return EXIT_OK


# -- history, classify-bug, stats --------------------------------------------

def history_document(records, full_tests, assignment=None) -> dict:
    labelled = label_histories(records, full_tests)
    categories = {}
    rows = []
    for record, label in labelled:
        rows.append({"assignment": record.assignment, "student": record.student,
                     "timestamp": record.timestamp, "category": label.category,
                     "outcome": label.outcome, "passed": len(record.pass_set),
                     "total": len(full_tests[record.assignment])})
        counts = categories.setdefault(label.category, {"Correct": 0, "Incorrect": 0})
        counts[label.outcome] += 1
    return {"assignment": assignment, "submissions": rows, "categories": categories}


def render_history(doc: dict) -> str:
    lines = []
    for r in doc["submissions"]:
        lines.append(f"{r['assignment']}/{r['student']}/{r['timestamp']}: "
                     f"{r['category']}/{r['outcome']} ({r['passed']}/{r['total']} tests)")
    lines.append("")
    for category in sorted(doc["categories"]):
        counts = doc["categories"][category]
        lines.append(f"{category}: {counts['Correct']} correct, "
                     f"{counts['Incorrect']} incorrect")
    return "\n".join(lines) + "\n"


def _corpus(args):
    try:
        return load_corpus(args.corpus, getattr(args, "assignment", None))
    except (CorpusError, SpecError) as exc:
        raise InputError(str(exc)) from None


def cmd_history(args) -> int:
    records, full = _corpus(args)
    doc = history_document(records, full, args.assignment)
    if args.json:
        _emit_json(doc, "history")
    else:
        sys.stdout.write(render_history(doc))
    return EXIT_OK


def classify_document(old_path, new_path) -> dict:
    old, _ = parse_program(_read(old_path))
    new, _ = parse_program(_read(new_path))
    diffs = diff_programs(old, new)
    labels = classify_bug(diffs, old, new) if diffs else []
    return {"old": str(old_path), "new": str(new_path),
            "diffs": [d.to_dict() for d in diffs],
            "labels": [b.to_dict() for b in labels],
            "types": top_level_types(labels)}


def render_classification(doc: dict) -> str:
    if not doc["diffs"]:
        return "the programs do not differ\n"
    lines = []
    for d in doc["diffs"]:
        head = f"{d['predicate']}: {d['kind']}"
        if "renamed_from" in d:
            head += f" (renamed from {d['renamed_from']})"
        lines.append(head)
        for ce in d["clause_edits"]:
            lines.append(f"  {ce['kind']}: {ce['old'] or '-'}  =>  {ce['new'] or '-'}")
            lines += [f"    {e}" for e in ce["edits"]]
    lines.append("")
    for b in doc["labels"]:
        label = b["type"] if b["subtype"] is None else f"{b['type']}/{b['subtype']}"
        where = f" at line {b['line']}" if "line" in b else ""
        lines.append(f"bug: {label} in {b['predicate']}{where}")
    return "\n".join(lines) + "\n"


def cmd_classify_bug(args) -> int:
    doc = classify_document(args.old, args.new)
    if args.json:
        _emit_json(doc, "classify")
    else:
        sys.stdout.write(render_classification(doc))
    return EXIT_OK if doc["diffs"] else EXIT_FAILURES


def cmd_stats(args) -> int:
    records, full = _corpus(args)
    doc = corpus_stats(records, full)
    if args.figures:
        from .analytics.plots import render_figures
        doc["figures"] = [str(p) for p in render_figures(doc, args.figures)]
    if args.json:
        _emit_json(doc, "stats")
    else:
        sys.stdout.write(stats_table(doc) + "\n" + category_table(doc))
        for path in doc.get("figures", []):
            sys.stdout.write(f"wrote {path}\n")
    return EXIT_OK


# -- entry point --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plgrader",
                                     description="Grade Prolog assignments and explain the failures.")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="test, analyze and score one submission")
    check.add_argument("program")
    check.add_argument("--spec", required=True, help="assignment spec (JSON)")
    check.add_argument("--tests", required=True, help="test file (.plt)")
    check.add_argument("--json", action="store_true", help="print the report document")
    check.add_argument("--report", metavar="DIR", help="write report.md and report.json")
    check.add_argument("--trace", action="store_true", help="print resolution steps to stderr")
    check.add_argument("--max-steps", type=int, help="override the per-test step limit")
    check.add_argument("--color", choices=("auto", "always", "never"),
                       default=os.environ.get("PLGRADER_COLOR", "auto"))
    check.add_argument("--timeout", type=float, default=60.0, metavar="SECS")
    check.add_argument("--timestamp", help="timestamp recorded in the scorecard")
    check.set_defaults(func=cmd_check)

    rank = sub.add_parser("rank", help="update or show a leaderboard")
    rank.add_argument("--board", required=True)
    rank.add_argument("--add", metavar="SCORECARD", help="report.json or scorecard JSON")
    rank.add_argument("--student")
    rank.add_argument("--show", action="store_true")
    rank.add_argument("--json", action="store_true")
    rank.add_argument("--lock-timeout", type=float, default=10.0, metavar="SECS")
    rank.set_defaults(func=cmd_rank)

    history = sub.add_parser("history", help="label submission histories in a corpus")
    history.add_argument("corpus")
    history.add_argument("--assignment")
    history.add_argument("--json", action="store_true")
    history.set_defaults(func=cmd_history)

    classify = sub.add_parser("classify-bug", help="label the fix between two versions")
    classify.add_argument("old")
    classify.add_argument("new")
    classify.add_argument("--json", action="store_true")
    classify.set_defaults(func=cmd_classify_bug)

    stats = sub.add_parser("stats", help="outcome statistics for a corpus")
    stats.add_argument("corpus")
    stats.add_argument("--json", action="store_true")
    stats.add_argument("--figures", metavar="DIR", help="also render PNG figures here")
    stats.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "color", "auto") not in ("auto", "always", "never"):
        args.color = "auto"
    try:
        return args.func(args)
    except (InputError, SpecError, LeaderboardError, OSError) as exc:
        sys.stderr.write(f"plgrader: {exc}\n")
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        sys.stderr.write(f"plgrader: internal error: {type(exc).__name__}: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
