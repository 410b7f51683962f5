"""Backtracking searches for sequences and colorings avoiding double arithmetic progressions."""

from __future__ import annotations

from .core import Coloring, CoverWord, GapWord, IncreasingSequence, find_additive_power, find_double_ap
from .engine import SearchRun, SearchSpace, Split, run_search, target_report
from .filters import FilterSpec, make_filter
from .oracle import WStarQuery, w_star
from .script import parse, run_script

__all__ = [
    "Coloring", "CoverWord", "FilterSpec", "GapWord", "IncreasingSequence", "SearchRun", "SearchSpace",
    "Split", "WStarQuery", "find_additive_power", "find_double_ap", "make_filter", "parse",
    "run_script", "run_search", "target_report", "w_star",
]
