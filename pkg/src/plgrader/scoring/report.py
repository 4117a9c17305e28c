"""Student-facing feedback report as markdown plus a structured document."""
from __future__ import annotations

import json

from ..analyzers.warnings import divergence_message
from ..syntax.writer import format_term

SCHEMA_VERSION = 1


def _indicator(key) -> str:
    return f"{key[0]}/{key[1]}"


def _test_entry(result, reveal_bodies: bool) -> dict:
    case = result.case
    entry = {"id": case.id, "suite": case.suite, "name": case.name,
             "verdict": result.verdict, "steps_used": result.steps_used,
             "open_choice_warning": result.open_choice_warning,
             "targets": sorted(_indicator(k) for k in case.targets),
             "body": case.body_text if reveal_bodies else None,
             "diff": result.diff.to_dict() if result.diff is not None else None,
             "error": result.error.to_dict() if result.error is not None else None,
             "note": None}
    if result.verdict == "Diverged":
        entry["note"] = divergence_message(result)
    if result.next_answer is not None:
        entry["next_answer"] = {n: format_term(v) for n, v in result.next_answer.items()}
    return entry


def build_document(scorecard, results, warnings, syntax_errors, suggestions, violations,
                   reveal_bodies: bool, submission: str = None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "assignment": scorecard.assignment,
        "submission": submission,
        "reveal_bodies": reveal_bodies,
        "syntax_errors": [e.to_dict() for e in sorted(
            syntax_errors, key=lambda e: (e.span.start_offset, e.span.end_offset))],
        "tests": [_test_entry(r, reveal_bodies) for r in results],
        "warnings": [w.to_dict() for w in warnings],
        "suggestions": [s.to_dict() for s in suggestions],
        "technique": [{"predicate": _indicator(v.predicate), "required": v.required,
                       "actual": v.actual, "message": v.message} for v in violations],
        "scorecard": scorecard.to_dict(),
    }


def _md_cell(text: str) -> str:
    return text.replace("|", "\\|")


def render_markdown(doc: dict) -> str:
    out = [f"# Feedback report: {doc['assignment']}", ""]
    if doc["submission"]:
        out += [f"Submission: `{doc['submission']}`", ""]

    out += ["## Syntax errors", ""]
    if not doc["syntax_errors"]:
        out += ["No syntax errors.", ""]
    for e in doc["syntax_errors"]:
        out += [f"Line {e['line']}, column {e['column']}: {e['message']}", "", "```",
                e["snippet"], "```", ""]

    out += ["## Test results", ""]
    if not doc["tests"]:
        out += ["No tests were run.", ""]
    else:
        out += ["| Test | Verdict | Steps |", "| --- | --- | ---: |"]
        out += [f"| `{_md_cell(t['id'])}` | {t['verdict']} | {t['steps_used']} |"
                for t in doc["tests"]]
        out.append("")
        for t in doc["tests"]:
            if t["verdict"] == "Pass":
                continue
            line = f"- `{t['id']}` {t['verdict'].lower()}"
            if t["body"] is not None:
                line += f": `{t['body']}`"
            out.append(line)
            if t["note"]:
                out.append(f"  - {t['note']}")
            if t["error"]:
                out.append(f"  - error: {t['error']['message']}")
        if any(t["verdict"] != "Pass" for t in doc["tests"]):
            out.append("")

    diffs = [t for t in doc["tests"] if t["diff"] is not None and t["diff"]["path"] is not None]
    out += ["## Differences", ""]
    if not diffs:
        out += ["No differences to show.", ""]
    for t in diffs:
        d = t["diff"]
        out += [f"### `{t['id']}`", "", f"- expected: `{d['expected']}`",
                f"- actual: {d['actual'] if d['actual'] == 'no solution' else '`' + d['actual'] + '`'}",
                f"- first difference {d['rendered']}", ""]

    out += ["## Warnings", ""]
    if not doc["warnings"]:
        out += ["No warnings.", ""]
    out += [f"- {w['message']}" for w in doc["warnings"]]
    if doc["warnings"]:
        out.append("")

    out += ["## Solution type", ""]
    if not doc["technique"]:
        out += ["All required techniques are used.", ""]
    out += [f"- {v['message']}" for v in doc["technique"]]
    if doc["technique"]:
        out.append("")

    card = doc["scorecard"]
    out += ["## Score", "", "| Predicate | Tests passed | Points |", "| --- | ---: | ---: |"]
    out += [f"| {p['predicate']} | {p['passed']}/{p['total']} | {p['awarded']}/{p['points']} |"
            for p in card["predicates"]]
    out += [f"| **Total** | {card['tests_passed']}/{card['tests_total']} | "
            f"{card['total_points']}/{card['max_points']} |", ""]
    if card["timestamp"]:
        out += [f"Evaluated at {card['timestamp']}.", ""]
    return "\n".join(out)


def render_report(scorecard, results, warnings, syntax_errors, suggestions, violations,
                  reveal_bodies: bool = True, submission: str = None):
    """Return ``(markdown, document)``; both depend only on the arguments."""
    doc = build_document(scorecard, results, warnings, syntax_errors, suggestions,
                         violations, reveal_bodies, submission)
    return render_markdown(doc), doc


def dump_document(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
