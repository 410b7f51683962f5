"""Brute-force computation of w* values and checks of printed witnesses.

The enumeration here is a plain recursion written independently of the
search engine, so engine results can be checked against it.

w*(r, k) is the least m such that every r-coloring of [1, m] has a color
class containing a double k-AP (the class read as an increasing sequence,
indexed by position within the class). The gapped variant w*(k; a_1..a_r)
only considers colorings whose class i has consecutive members at most a_i
apart; w*(r, k; d) bounds every class by d.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import core

WITHIN = "within"
BOUNDARY = "boundary"


@dataclass(frozen=True)
class WStarQuery:
    """One w* value to compute.

    ``gaps`` holds one bound per color (``None`` = unbounded); plain queries
    have no bounds and uniform-gap queries repeat ``d``.
    """

    kind: str
    colors: int
    k: int
    gaps: tuple[Optional[int], ...] = ()
    bound: int = 1000

    def __post_init__(self):
        if self.kind not in ("plain", "gapped", "uniform-gap"):
            raise ValueError(f"unknown query kind {self.kind!r}")
        if self.colors < 1 or self.k < 3 or self.bound < 1:
            raise ValueError("need colors >= 1, k >= 3 and bound >= 1")
        if self.gaps and len(self.gaps) != self.colors:
            raise ValueError("one gap bound per color is required")
        if any(g is not None and g < 1 for g in self.gaps):
            raise ValueError("gap bounds must be >= 1")

    @classmethod
    def plain(cls, r: int, k: int, bound: int = 1000) -> "WStarQuery":
        return cls("plain", r, k, (), bound)

    @classmethod
    def gapped(cls, k: int, gaps: Sequence[Optional[int]], bound: int = 1000) -> "WStarQuery":
        return cls("gapped", len(gaps), k, tuple(gaps), bound)

    @classmethod
    def uniform(cls, r: int, k: int, d: int, bound: int = 1000) -> "WStarQuery":
        return cls("uniform-gap", r, k, (d,) * r, bound)

    def label(self) -> str:
        if self.kind == "plain":
            return f"w*({self.colors},{self.k})"
        if self.kind == "uniform-gap":
            return f"w*({self.colors},{self.k};{self.gaps[0]})"
        return f"w*({self.k};{','.join('inf' if g is None else str(g) for g in self.gaps)})"


@dataclass(frozen=True)
class WStarResult:
    query: WStarQuery
    value: Optional[int]  # None: a valid coloring of length >= bound exists
    witness: tuple[int, ...]  # longest double-AP-free admissible coloring found

    def __str__(self) -> str:
        if self.value is None:
            return f"{self.query.label()} > {self.query.bound}"
        return f"{self.query.label()} = {self.value}"


def _closes_double_ap(members: list[int], k: int) -> bool:
    """Does the last member complete a double k-AP inside its class?"""
    n = len(members) - 1
    top = members[n]
    for d in range(1, n // (k - 1) + 1):
        step = top - members[n - d]
        if all(members[n - j * d] - members[n - (j + 1) * d] == step for j in range(1, k - 1)):
            return True
    return False


class _Enumerator:
    def __init__(self, r: int, k: int, gaps: Sequence[Optional[int]], bound: int, semantics: str):
        self.r = r
        self.k = k
        self.gaps = list(gaps) if gaps else [None] * r
        self.bound = bound
        self.semantics = semantics
        self.classes: list[list[int]] = [[] for _ in range(r)]
        self.colors: list[int] = []
        self.best: tuple[int, ...] = ()
        self.target: Optional[int] = None

    def _closable(self, m: int) -> bool:
        """Boundary semantics: every class is nonempty and its last member is within a_i of m+1."""
        for c in range(self.r):
            g = self.gaps[c]
            if g is None:
                continue
            last = self.classes[c][-1] if self.classes[c] else 0
            if m + 1 - last > g:
                return False
        return True

    def extend(self, p: int) -> bool:
        """Depth-first over colorings of [1, p-1] extended at p; True stops the search."""
        if self.target is None:
            if p - 1 > len(self.best):
                self.best = tuple(self.colors)
                if len(self.best) >= self.bound:
                    return True
        elif p - 1 == self.target:
            if self._closable(self.target):
                self.best = tuple(self.colors)
                return True
            return False
        for c in range(self.r):
            members = self.classes[c]
            g = self.gaps[c]
            if g is not None:
                last = members[-1] if members else (0 if self.semantics == BOUNDARY else None)
                if last is not None and p - last > g:
                    continue
            if self.semantics == BOUNDARY and any(
                q != c and self.gaps[q] is not None
                and p + 1 - (self.classes[q][-1] if self.classes[q] else 0) > self.gaps[q]
                for q in range(self.r)
            ):
                # some other bounded class can no longer be reached in time
                continue
            members.append(p)
            self.colors.append(c + 1)
            if len(members) < self.k or not _closes_double_ap(members, self.k):
                if self.extend(p + 1):
                    members.pop()
                    self.colors.pop()
                    return True
            members.pop()
            self.colors.pop()
        return False


def _recursion_guard(depth: int) -> None:
    need = depth + 200
    if sys.getrecursionlimit() < need:
        sys.setrecursionlimit(need)


def max_free_coloring(r: int, k: int, gaps: Sequence[Optional[int]] = (), bound: int = 1000) -> tuple[int, ...]:
    """Longest admissible coloring with no monochromatic double k-AP (capped at ``bound``)."""
    _recursion_guard(bound)
    e = _Enumerator(r, k, gaps, bound, WITHIN)
    e.extend(1)
    return e.best


def free_coloring_of_length(r: int, k: int, gaps: Sequence[Optional[int]], m: int,
                            semantics: str = WITHIN) -> Optional[tuple[int, ...]]:
    """Some admissible double-k-AP-free coloring of exactly [1, m], or None."""
    _recursion_guard(m)
    e = _Enumerator(r, k, gaps, m + 1, semantics)
    e.target = m
    return e.best if e.extend(1) else None


def w_star(q: WStarQuery, semantics: str = WITHIN) -> WStarResult:
    """Exhaustive w* computation.

    Under ``within`` semantics admissibility is prefix-closed, so the value
    is one more than the longest free coloring. ``boundary`` semantics also
    bound the distance from 0 to the first member and from the last member
    to m+1; that is not prefix-closed, so each m is decided separately.
    """
    if semantics == WITHIN:
        best = max_free_coloring(q.colors, q.k, q.gaps, q.bound)
        if len(best) >= q.bound:
            return WStarResult(q, None, best)
        return WStarResult(q, len(best) + 1, best)
    if semantics != BOUNDARY:
        raise ValueError(f"unknown gap semantics {semantics!r}")
    witness: tuple[int, ...] = ()
    for m in range(1, q.bound + 1):
        found = free_coloring_of_length(q.colors, q.k, q.gaps, m, BOUNDARY)
        if found is None:
            return WStarResult(q, m, witness)
        witness = found
    return WStarResult(q, None, witness)


# -- witnesses ---------------------------------------------------------------


@dataclass(frozen=True)
class ClassStats:
    color: int
    size: int
    max_gap: Optional[int]


@dataclass(frozen=True)
class WitnessReport:
    passed: bool
    length: int
    k: int
    classes: tuple[ClassStats, ...]
    witness: Optional[tuple[int, core.ApWitness]]

    def lines(self) -> list[str]:
        out = [f"{'PASS' if self.passed else 'FAIL'}: coloring of [1,{self.length}], double {self.k}-APs"]
        for s in self.classes:
            gap = "-" if s.max_gap is None else str(s.max_gap)
            out.append(f"  color {s.color - 1}: size {s.size}, max gap {gap}")
        if self.witness is not None:
            color, hit = self.witness
            out.append(f"  witness in color {color - 1}: positions {' '.join(map(str, hit.values))}")
        return out


def verify_witness_coloring(text: str, k: int = 3) -> WitnessReport:
    c = core.Coloring.from_string(text)
    hit = core.find_mono_double_ap(c, k)
    stats = []
    for color, members in enumerate(c.classes(), 1):
        gaps = [b - a for a, b in zip(members, members[1:])]
        stats.append(ClassStats(color, len(members), max(gaps) if gaps else None))
    return WitnessReport(hit is None, len(c), k, tuple(stats), hit)


# -- block transform ---------------------------------------------------------


def block_transform(x: Sequence[int], m: int) -> core.IncreasingSequence:
    """``z_i = x_{im+1} - x_1``: partial sums of the length-m block gaps of ``x``."""
    if m < 1:
        raise ValueError("block length must be positive")
    if len(x) < 2 * m + 1:
        raise ValueError(f"need at least {2 * m + 1} terms for block length {m}, got {len(x)}")
    x = core.IncreasingSequence(x)
    return core.IncreasingSequence(x[i * m] - x[0] for i in range(1, (len(x) - 1) // m + 1))


def pullback_double_ap(witness: Sequence[int], m: int) -> tuple[int, ...]:
    """Map a double 3-AP ``(p, q, r)`` of ``block_transform(x, m)`` to indices of ``x``."""
    if len(witness) != 3:
        raise ValueError("expected a 3-term witness")
    p, q, r = witness
    if not (1 <= p < q < r and p + r == 2 * q):
        raise ValueError(f"{tuple(witness)} is not an equally spaced index triple")
    return (p * m + 1, q * m + 1, r * m + 1)


# -- additive powers ---------------------------------------------------------


def max_additive_power_free_length(alphabet: Sequence[int], p: int = 2, bound: int = 50) -> tuple[int, tuple[int, ...]]:
    """Longest additive-p-power-free word over ``alphabet`` (at most ``bound``)."""
    symbols = sorted(set(alphabet))
    best: tuple[int, ...] = ()
    word: list[int] = []
    sums = [0]

    def free_at_end() -> bool:
        n = len(word)
        for b in range(1, n // p + 1):
            total = sums[n] - sums[n - b]
            if all(sums[n - j * b] - sums[n - (j + 1) * b] == total for j in range(1, p)):
                return False
        return True

    def grow() -> bool:
        nonlocal best
        if len(word) > len(best):
            best = tuple(word)
            if len(best) >= bound:
                return True
        for s in symbols:
            word.append(s)
            sums.append(sums[-1] + s)
            if free_at_end() and grow():
                return True
            word.pop()
            sums.pop()
        return False

    _recursion_guard(bound)
    grow()
    return len(best), best
