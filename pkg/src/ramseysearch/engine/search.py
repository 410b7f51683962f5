"""Backtracking search over sequences, colorings and covers.

Counting model: the seed is one generated node at depth 0. Every child is
counted when it is generated and is immediately filter-checked; only passing
children are extended, and nodes at ``max_depth`` are never extended.

A node is identified by its choice path, the child indices taken from the
seed. Depths are relative to the seed; reported lengths add the seed length.
"""

from __future__ import annotations

import copy
import hashlib
import json
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .. import core
from ..filters import Filter, FilterSpec, make_filter, passes_all
from . import kernel

KINDS = ("sequences", "colorings", "covers")
DEFAULT_CAPACITY = 1 << 16
NO_LIMIT = 1 << 62


class SearchError(ValueError):
    pass


@dataclass(frozen=True)
class SearchSpace:
    """What the search extends and in which order.

    ``alphabet`` is the ordered gap alphabet of a sequence space; ``size`` is
    the color count of a coloring space or the set count of a cover space.
    ``seed`` is a gap word, a tuple of color ids, or a tuple of sets.
    """

    kind: str
    alphabet: tuple[int, ...] = ()
    size: int = 0
    seed: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SearchError(f"unknown search space {self.kind!r}; expected one of {', '.join(KINDS)}")
        object.__setattr__(self, "alphabet", tuple(int(a) for a in self.alphabet))
        if self.kind == "sequences":
            if not self.alphabet:
                raise SearchError("a sequence space needs a nonempty gap alphabet")
            if len(set(self.alphabet)) != len(self.alphabet) or min(self.alphabet) < 1:
                raise SearchError("gap alphabet must be distinct positive integers")
            object.__setattr__(self, "seed", tuple(core.GapWord(self.seed)))
        elif self.kind == "colorings":
            if self.size < 1:
                raise SearchError("a coloring space needs at least one color")
            seed = core.Coloring(tuple(self.seed), self.size)
            object.__setattr__(self, "seed", seed.assignment)
        else:
            if not 1 <= self.size <= 8:
                raise SearchError("a cover space needs between 1 and 8 sets")
            seed = core.CoverWord(tuple(self.seed), self.size)
            object.__setattr__(self, "seed", seed.assignment)

    def children(self) -> list:
        """Extension elements in generation order."""
        if self.kind == "sequences":
            return list(self.alphabet)
        if self.kind == "colorings":
            return list(range(1, self.size + 1))
        return [frozenset(q + 1 for q in range(self.size) if (m >> q) & 1) for m in range(1, 1 << self.size)]

    def encode(self, element) -> int:
        if self.kind == "sequences":
            return int(element)
        if self.kind == "colorings":
            return 1 << (element - 1)
        return sum(1 << (q - 1) for q in element)

    def class_count(self) -> int:
        return 0 if self.kind == "sequences" else self.size

    def build(self, path: Sequence[int]) -> tuple:
        ch = self.children()
        return self.seed + tuple(ch[i] for i in path)

    def as_object(self, elements: tuple):
        if self.kind == "sequences":
            return core.GapWord(elements)
        if self.kind == "colorings":
            return core.Coloring(elements, self.size)
        return core.CoverWord(elements, self.size)

    def render(self, elements: tuple) -> str:
        if self.kind == "sequences":
            gaps = " ".join(map(str, elements))
            terms = " ".join(map(str, core.gaps_to_sequence(elements)))
            return f"gaps [{gaps}] sequence [{terms}]"
        return render_classes(self.as_object(elements).classes())

    def to_config(self) -> dict:
        seed = [sorted(s) for s in self.seed] if self.kind == "covers" else list(self.seed)
        return {"kind": self.kind, "alphabet": list(self.alphabet), "size": self.size, "seed": seed}


def render_classes(classes: Sequence[Sequence[int]]) -> str:
    return "[" + " ".join("[" + " ".join(map(str, c)) + "]" for c in classes) + "]"


@dataclass(frozen=True)
class Split:
    """Chunk ``index`` of ``count`` contiguous slices of the passing nodes at ``depth``."""

    depth: int
    index: int
    count: int

    def __post_init__(self):
        if self.depth < 0 or self.count < 1 or not 0 <= self.index < self.count:
            raise SearchError(f"invalid split {self}")


@dataclass
class SearchRun:
    space: SearchSpace
    filters: tuple[FilterSpec, ...] = ()
    targets: tuple[str, ...] = ("max-length",)
    max_depth: Optional[int] = None
    max_iterations: Optional[int] = None
    split: Optional[Split] = None

    # live state
    started: bool = False
    complete: bool = False
    truncated: bool = False
    iterations: int = 0
    generated: list[int] = field(default_factory=list)
    passing: list[int] = field(default_factory=list)
    best_path: Optional[tuple[int, ...]] = None
    root_index: int = 0
    cursor: Optional[tuple[int, ...]] = None
    elapsed: float = 0.0

    def config(self, with_chunk: bool = True) -> dict:
        split = None
        if self.split is not None:
            split = {"depth": self.split.depth, "count": self.split.count}
            if with_chunk:
                split["index"] = self.split.index
        return {
            "space": self.space.to_config(),
            "filters": [{"name": f.name, "params": dict(sorted(f.params.items()))} for f in self.filters],
            "max_depth": self.max_depth,
            "split": split,
        }

    def digest(self, with_chunk: bool = True) -> str:
        """Hash of everything that shapes the traversal (not the iteration cap)."""
        text = json.dumps(self.config(with_chunk), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()

    @property
    def best_depth(self) -> int:
        return -1 if self.best_path is None else len(self.best_path)

    @property
    def max_length(self) -> Optional[int]:
        """Length of the deepest passing object, seed included."""
        if self.best_path is None:
            return None
        return len(self.space.seed) + len(self.best_path)

    def best_object(self) -> Optional[tuple]:
        return None if self.best_path is None else self.space.build(self.best_path)

    @property
    def capped(self) -> bool:
        return (not self.complete and self.max_iterations is not None
                and self.iterations >= self.max_iterations)

    def copy(self) -> "SearchRun":
        return copy.deepcopy(self)


def build_filters(run: SearchRun) -> list[Filter]:
    out = []
    for spec in run.filters:
        f = make_filter(spec)
        if run.space.kind not in f.spaces:
            raise SearchError(f"filter {spec.name} does not apply to {run.space.kind}")
        out.append(f)
    return out


# -- traversal backends ------------------------------------------------------


@dataclass
class _Frame:
    """Mutable counters shared by both backends for one traversal call."""

    nxt: np.ndarray
    gen: np.ndarray
    pas: np.ndarray
    best_path: np.ndarray
    best_depth: np.ndarray


def _python_traverse(space, filters, max_depth, max_iter, iterations, fr: _Frame, base, dcur, collect_depth, collected):
    """Reference implementation of :func:`kernel.traverse` driven by the filter objects."""
    children = space.children()
    nxt, gen, pas = fr.nxt, fr.gen, fr.pas
    obj = list(space.seed) + [children[nxt[j] - 1] for j in range(dcur)]
    bd = int(fr.best_depth[0])
    d = dcur
    status = kernel.STATUS_COMPLETE
    while True:
        if d >= max_depth or nxt[d] >= len(children):
            if d <= base:
                break
            obj.pop()
            d -= 1
            continue
        if iterations >= max_iter:
            status = kernel.STATUS_PAUSED
            break
        ci = int(nxt[d])
        nxt[d] = ci + 1
        child = children[ci]
        iterations += 1
        gen[d + 1] += 1
        current = tuple(obj)
        if all(f.incremental(current, child) for f in filters):
            obj.append(child)
            d += 1
            pas[d] += 1
            nxt[d] = 0
            if d > bd:
                bd = d
                fr.best_path[:d] = nxt[:d] - 1
            if d == collect_depth:
                collected.append(tuple(int(x) - 1 for x in nxt[:d]))
    fr.best_depth[0] = bd
    return status, iterations, d


class _Traversal:
    """Dispatches one traversal call to the compiled kernel or the Python reference."""

    def __init__(self, run: SearchRun, filters: list[Filter], backend: str):
        if backend not in ("numba", "python"):
            raise SearchError(f"unknown backend {backend!r}")
        self.run = run
        self.filters = filters
        self.backend = backend
        space = run.space
        self.max_depth = run.max_depth if run.max_depth is not None else DEFAULT_CAPACITY
        self.children = np.array([space.encode(c) for c in space.children()], dtype=np.int64)
        self.seed = np.array([space.encode(e) for e in space.seed], dtype=np.int64)
        codes, kparams, gapb = [], [], np.zeros(max(space.class_count(), 1), dtype=np.int64)
        for f in filters:
            code, k, bounds = f.kernel_code()
            codes.append(code)
            kparams.append(k)
            for q, g in enumerate(bounds[: len(gapb)]):
                if g:
                    gapb[q] = g if gapb[q] == 0 else min(gapb[q], g)
        self.codes = np.array(codes, dtype=np.int64)
        self.kparams = np.array(kparams, dtype=np.int64)
        self.gapb = gapb

    def frame(self, generated, passing, best_path) -> _Frame:
        n = self.max_depth + 2
        gen = np.zeros(n, dtype=np.int64)
        pas = np.zeros(n, dtype=np.int64)
        gen[: len(generated)] = generated
        pas[: len(passing)] = passing
        bp = np.zeros(n, dtype=np.int64)
        bdepth = np.array([-1], dtype=np.int64)
        if best_path is not None:
            bp[: len(best_path)] = best_path
            bdepth[0] = len(best_path)
        return _Frame(np.zeros(n, dtype=np.int64), gen, pas, bp, bdepth)

    def __call__(self, fr: _Frame, iterations, max_iter, base, dcur, collect_depth=-1, collect_rows=0):
        """Returns ``(status, iterations, depth, collected)``."""
        if self.backend == "python":
            collected: list = []
            status, iterations, d = _python_traverse(
                self.run.space, self.filters, self.max_depth, max_iter, iterations, fr, base, dcur,
                collect_depth, collected)
            return status, iterations, d, collected
        out = np.zeros((collect_rows, max(collect_depth, 1)), dtype=np.int64)
        status, iterations, d, n = kernel.traverse(
            self.run.space.kind == "sequences", self.children, self.codes, self.kparams, self.gapb,
            self.run.space.class_count(), self.seed, self.max_depth, max_iter, iterations,
            fr.nxt, base, dcur, fr.gen, fr.pas, fr.best_path, fr.best_depth, collect_depth, out)
        rows = [tuple(int(x) for x in out[i, :collect_depth]) for i in range(min(n, collect_rows))]
        return int(status), int(iterations), int(d), rows


def _trim(a: np.ndarray) -> list[int]:
    nz = np.nonzero(a)[0]
    return [int(x) for x in a[: nz[-1] + 1]] if len(nz) else []


def _best_from(fr: _Frame) -> Optional[tuple[int, ...]]:
    bd = int(fr.best_depth[0])
    return None if bd < 0 else tuple(int(x) for x in fr.best_path[:bd])


# -- public operations -------------------------------------------------------


def enumerate_prefixes(run: SearchRun, depth: int, backend: str = "numba") -> list[tuple[int, ...]]:
    """Choice paths of all passing nodes at ``depth``, in traversal order."""
    if depth < 0:
        raise SearchError("prefix depth must be non-negative")
    if run.max_depth is not None and depth > run.max_depth:
        raise SearchError(f"split depth {depth} exceeds max depth {run.max_depth}")
    filters = build_filters(run)
    _check_seed(run, filters)
    if depth == 0:
        return [()]
    top = run.copy()
    top.max_depth = depth
    trav = _Traversal(top, filters, backend)
    fr = trav.frame([], [], None)
    _, _, _, rows = trav(fr, 1, NO_LIMIT, 0, 0)
    count = int(fr.pas[depth])
    fr = trav.frame([], [], None)
    _, _, _, rows = trav(fr, 1, NO_LIMIT, 0, 0, collect_depth=depth, collect_rows=count)
    return rows


def chunk_slice(n_items: int, index: int, count: int) -> range:
    """Contiguous slice ``index`` of ``count``; earlier slices take the remainder."""
    size, extra = divmod(n_items, count)
    start = index * size + min(index, extra)
    return range(start, start + size + (1 if index < extra else 0))


def _check_seed(run: SearchRun, filters: list[Filter]) -> None:
    ok, failed, hit = passes_all(filters, run.space.as_object(run.space.seed))
    if not ok:
        raise SearchError(f"seed fails filter {failed.display_name} (witness {hit.positions})")


def _start(run: SearchRun, filters: list[Filter], trav: _Traversal, backend: str) -> list[tuple[int, ...]]:
    _check_seed(run, filters)
    if run.split is None:
        run.iterations = 1
        run.generated = [1]
        run.passing = [1]
        run.best_path = ()
    elif run.split.index == 0:
        # chunk 0 also owns the tree above the split depth
        top = run.copy()
        top.max_depth = run.split.depth
        ttrav = _Traversal(top, filters, backend)
        fr = ttrav.frame([1], [1], ())
        _, run.iterations, _, _ = ttrav(fr, 1, NO_LIMIT, 0, 0)
        run.generated, run.passing = _trim(fr.gen), _trim(fr.pas)
        run.best_path = _best_from(fr)
    run.started = True


def _roots(run: SearchRun, backend: str) -> list[tuple[int, ...]]:
    if run.split is None:
        return [()]
    prefixes = enumerate_prefixes(run, run.split.depth, backend)
    return [prefixes[i] for i in chunk_slice(len(prefixes), run.split.index, run.split.count)]


def run_search(run: SearchRun, *, backend: str = "numba", pause_at: Optional[int] = None) -> SearchRun:
    """Run (or continue) a search; returns a new run with updated counters.

    ``pause_at`` stops the traversal once that many iterations have been
    counted, leaving a resumable cursor, without marking the run capped.
    """
    run = run.copy()
    if run.complete:
        return run
    if run.split is not None and run.max_depth is not None and run.split.depth > run.max_depth:
        raise SearchError(f"split depth {run.split.depth} exceeds max depth {run.max_depth}")
    filters = build_filters(run)
    trav = _Traversal(run, filters, backend)
    t0 = time.perf_counter()
    if not run.started:
        _start(run, filters, trav, backend)
    roots = _roots(run, backend)
    limit = NO_LIMIT
    if run.max_iterations is not None:
        limit = min(limit, run.max_iterations)
    if pause_at is not None:
        limit = min(limit, pause_at)

    paused = False
    while run.root_index < len(roots):
        prefix = roots[run.root_index]
        base = len(prefix)
        fr = trav.frame(run.generated, run.passing, run.best_path)
        fr.nxt[:base] = np.array(prefix, dtype=np.int64) + 1
        if run.cursor is None:
            dcur = base
        else:
            fr.nxt[base: base + len(run.cursor)] = run.cursor
            dcur = base + len(run.cursor) - 1
        status, run.iterations, d, _ = trav(fr, run.iterations, limit, base, dcur)
        run.generated, run.passing = _trim(fr.gen), _trim(fr.pas)
        run.best_path = _best_from(fr)
        if status == kernel.STATUS_PAUSED:
            run.cursor = tuple(int(x) for x in fr.nxt[base: d + 1])
            paused = True
            break
        run.root_index += 1
        run.cursor = None
    if not paused:
        run.complete = True
        run.cursor = None
        run.truncated = run.max_depth is None and len(run.generated) > DEFAULT_CAPACITY
    run.elapsed += time.perf_counter() - t0
    return run


@dataclass(frozen=True)
class TargetReport:
    max_length: Optional[int]
    best: Optional[tuple]
    rendered: str
    counts: list[tuple[int, int, int]]  # (length, passing, generated)
    iterations: int
    complete: bool

    @property
    def counts_per_length(self) -> list[int]:
        return [c for _, c, _ in self.counts]


def target_report(run: SearchRun) -> TargetReport:
    best = run.best_object()
    seed_len = len(run.space.seed)
    gen = list(run.generated) + [0] * (len(run.passing) - len(run.generated))
    pas = list(run.passing) + [0] * (len(gen) - len(run.passing))
    counts = [(seed_len + d, pas[d], gen[d]) for d in range(len(gen))]
    return TargetReport(
        max_length=run.max_length,
        best=best,
        rendered="" if best is None else run.space.render(best),
        counts=counts,
        iterations=run.iterations,
        complete=run.complete,
    )


def gap_histogram(run: SearchRun) -> list[tuple[int, int]]:
    """(gap, frequency) over the alphabet for the best sequence found."""
    if run.space.kind != "sequences":
        raise SearchError("gap histograms need a sequence search")
    best = run.best_object() or ()
    freq = Counter(best)
    return [(g, freq.get(g, 0)) for g in sorted(run.space.alphabet)]
