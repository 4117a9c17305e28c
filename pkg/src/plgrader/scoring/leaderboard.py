"""Leaderboard of best scores per pseudonymous student id."""
from __future__ import annotations

import json
import os
import tempfile
from dataclasses import asdict, dataclass
from pathlib import Path

import jsonschema
from filelock import FileLock

from ..schemas import validate


class LeaderboardError(ValueError):
    """The leaderboard file is malformed."""


@dataclass(frozen=True)
class LeaderboardEntry:
    student: str
    points: int
    tests_passed: int
    timestamp: str

    def sort_key(self):
        return (-self.points, -self.tests_passed, self.timestamp, self.student)


def update_leaderboard(board, entry: LeaderboardEntry) -> list:
    """Return a new board where ``entry`` replaces the student's entry if strictly better."""
    out = []
    replaced = False
    for old in board:
        if old.student != entry.student:
            out.append(old)
            continue
        replaced = True
        better = (entry.points, entry.tests_passed) > (old.points, old.tests_passed)
        out.append(entry if better else old)
    if not replaced:
        out.append(entry)
    return sorted(out, key=LeaderboardEntry.sort_key)


def board_from_json(data) -> list:
    try:
        validate(data, "leaderboard")
    except jsonschema.ValidationError as exc:
        raise LeaderboardError(f"malformed leaderboard: {exc.message}") from None
    board = [LeaderboardEntry(**item) for item in data]
    if len({e.student for e in board}) != len(board):
        raise LeaderboardError("malformed leaderboard: duplicate student id")
    return sorted(board, key=LeaderboardEntry.sort_key)


def board_to_json(board) -> str:
    return json.dumps([asdict(e) for e in board], indent=2) + "\n"


def load_board(path) -> list:
    path = Path(path)
    if not path.exists():
        return []
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise LeaderboardError(f"malformed leaderboard: {exc}") from None
    return board_from_json(data)


def save_board(path, board) -> None:
    """Write atomically: a temporary file in the same directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(board_to_json(board))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def update_board_file(path, entry: LeaderboardEntry, timeout: float = 10.0) -> list:
    """Locked read-modify-write of a leaderboard file.

    Raises ``filelock.Timeout`` when the lock cannot be taken in time. The
    file is left untouched when the entry does not improve the board.
    """
    path = Path(path)
    with FileLock(str(path) + ".lock", timeout=timeout):
        board = load_board(path)
        updated = update_leaderboard(board, entry)
        if updated != board or not path.exists():
            save_board(path, updated)
        return updated


def rank_table(board) -> str:
    rows = [("Rank", "Student", "Points", "Tests", "Since")]
    rows += [(str(i), e.student, str(e.points), str(e.tests_passed), e.timestamp)
             for i, e in enumerate(board, start=1)]
    widths = [max(len(r[i]) for r in rows) for i in range(5)]
    left = {1, 4}
    lines = []
    for r in rows:
        cells = [c.ljust(w) if i in left else c.rjust(w)
                 for i, (c, w) in enumerate(zip(r, widths))]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"
