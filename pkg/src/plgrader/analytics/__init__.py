"""Submission histories, structural diffs, bug labels and corpus statistics."""
from .bugs import SUBTYPES, BugLabel, classify_bug, top_level_types
from .corpus import CorpusError, load_corpus
from .diff import ClauseEdit, Edit, PredicateDiff, diff_programs
from .history import (BUG_FIXED, BUG_INTRODUCED, CATEGORIES, FIRST, MIXED, NO_CHANGE,
                      HistoryLabel, SubmissionRecord, classify_history, compare_pass_sets)
from .stats import category_table, corpus_stats, label_histories, stats_table

__all__ = [
    "BUG_FIXED", "BUG_INTRODUCED", "BugLabel", "CATEGORIES", "ClauseEdit", "CorpusError",
    "Edit", "FIRST", "HistoryLabel", "MIXED", "NO_CHANGE", "PredicateDiff", "SUBTYPES",
    "SubmissionRecord", "category_table", "classify_bug", "classify_history",
    "compare_pass_sets", "corpus_stats", "diff_programs", "label_histories", "load_corpus",
    "stats_table", "top_level_types",
]
