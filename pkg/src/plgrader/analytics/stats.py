"""Per-assignment outcome counts and history-category totals for a corpus."""
from __future__ import annotations

from itertools import groupby

from .history import CATEGORIES, classify_history


def _histories(records):
    key = lambda r: (r.assignment, r.student)  # noqa: E731
    for (assignment, student), group in groupby(sorted(records, key=lambda r: (
            r.assignment, r.student, r.timestamp)), key=key):
        yield assignment, student, list(group)


def label_histories(records, full_tests) -> list:
    """``(record, label)`` pairs in (assignment, student, timestamp) order."""
    out = []
    for assignment, _, history in _histories(records):
        labels = classify_history(history, full_tests[assignment])
        out.extend(zip(history, labels))
    return out


def corpus_stats(records, full_tests) -> dict:
    """Counts per assignment and per (history category, outcome)."""
    labelled = label_histories(records, full_tests)
    assignments = {}
    categories = {c: {"Correct": 0, "Incorrect": 0} for c in CATEGORIES}
    for record, label in labelled:
        row = assignments.setdefault(record.assignment, {"assignment": record.assignment,
                                                         "correct": 0, "incorrect": 0,
                                                         "total": 0, "clauses": 0})
        row["correct" if label.correct else "incorrect"] += 1
        row["total"] += 1
        row["clauses"] += record.clause_count
        categories[label.category][label.outcome] += 1
    rows = []
    for name in sorted(assignments):
        row = assignments[name]
        clauses = row.pop("clauses")
        row["avg_clauses"] = round(clauses / row["total"], 4) if row["total"] else 0.0
        rows.append(row)
    return {"submissions": len(labelled), "assignments": rows, "categories": categories}


def stats_table(doc: dict) -> str:
    """Aligned text table with Correct, Incorrect, Total and Avg. Clauses columns."""
    header = ("Assignment", "Correct", "Incorrect", "Total", "Avg. Clauses")
    rows = [header] + [(r["assignment"], str(r["correct"]), str(r["incorrect"]),
                        str(r["total"]), f"{r['avg_clauses']:.2f}") for r in doc["assignments"]]
    total = sum(r["total"] for r in doc["assignments"])
    clauses = sum(r["avg_clauses"] * r["total"] for r in doc["assignments"])
    rows.append(("Total", str(sum(r["correct"] for r in doc["assignments"])),
                 str(sum(r["incorrect"] for r in doc["assignments"])), str(total),
                 f"{clauses / total:.2f}" if total else "0.00"))
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    lines = []
    for n, r in enumerate(rows):
        cells = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        lines.append("  ".join(cells))
        if n == 0 or n == len(rows) - 2:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def category_table(doc: dict) -> str:
    rows = [("Category", "Correct", "Incorrect", "Total")]
    for c in CATEGORIES:
        counts = doc["categories"][c]
        rows.append((c, str(counts["Correct"]), str(counts["Incorrect"]),
                     str(counts["Correct"] + counts["Incorrect"])))
    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    return "\n".join("  ".join([r[0].ljust(widths[0])] +
                               [c.rjust(w) for c, w in zip(r[1:], widths[1:])])
                     for r in rows) + "\n"
