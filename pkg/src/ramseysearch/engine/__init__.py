"""Backtracking search engine: spaces, runs, checkpoints and work splitting."""

from .checkpoint import Checkpoint, CheckpointError, checkpoint_resume, checkpoint_save
from .search import (
    SearchError,
    SearchRun,
    SearchSpace,
    Split,
    TargetReport,
    chunk_slice,
    enumerate_prefixes,
    gap_histogram,
    run_search,
    target_report,
)

__all__ = [
    "Checkpoint",
    "CheckpointError",
    "SearchError",
    "SearchRun",
    "SearchSpace",
    "Split",
    "TargetReport",
    "checkpoint_resume",
    "checkpoint_save",
    "chunk_slice",
    "enumerate_prefixes",
    "gap_histogram",
    "run_search",
    "target_report",
]
