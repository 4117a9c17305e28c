"""Scorecards, the leaderboard and the feedback report."""
from .leaderboard import (LeaderboardEntry, LeaderboardError, load_board, rank_table,
                          save_board, update_board_file, update_leaderboard)
from .report import SCHEMA_VERSION, dump_document, render_report
from .scorecard import PredicateScore, Scorecard, score_submission
from .spec import AssignmentSpec, PredicateSpec, SpecError, load_spec, spec_from_dict

__all__ = [
    "AssignmentSpec", "LeaderboardEntry", "LeaderboardError", "PredicateScore",
    "PredicateSpec", "SCHEMA_VERSION", "Scorecard", "SpecError", "dump_document",
    "load_board", "load_spec", "rank_table", "render_report", "save_board",
    "score_submission", "spec_from_dict", "update_board_file", "update_leaderboard",
]
