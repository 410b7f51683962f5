"""Domain objects, representation conversions and pattern detectors.

Positions and indices are 1-based throughout, matching how colorings of
``[1, n]`` and sequence terms ``a_1, a_2, ...`` are usually written.
Detectors return the witness with the least last position, breaking ties by
the least common difference (or block length).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence


class GapWord(tuple):
    """A finite word of positive integers, usually the gaps of a sequence."""

    def __new__(cls, symbols: Iterable[int] = (), alphabet: Optional[Iterable[int]] = None):
        self = super().__new__(cls, (int(x) for x in symbols))
        self.alphabet = frozenset(alphabet) if alphabet is not None else None
        for x in self:
            if x < 1:
                raise ValueError(f"gap symbols must be positive, got {x}")
            if self.alphabet is not None and x not in self.alphabet:
                raise ValueError(f"symbol {x} is not in the alphabet")
        return self


class IncreasingSequence(tuple):
    """Strictly increasing positive integers."""

    def __new__(cls, terms: Iterable[int] = ()):
        self = super().__new__(cls, (int(x) for x in terms))
        if self and self[0] < 1:
            raise ValueError("sequence terms must be positive")
        for a, b in zip(self, self[1:]):
            if a >= b:
                raise ValueError(f"sequence is not strictly increasing at {a}, {b}")
        return self


@dataclass(frozen=True)
class Coloring:
    """A total assignment of ``[1, n]`` to color ids ``1..color_count``."""

    assignment: tuple[int, ...]
    color_count: int

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(int(c) for c in self.assignment))
        if self.color_count < 1:
            raise ValueError("color_count must be at least 1")
        for p, c in enumerate(self.assignment, 1):
            if not 1 <= c <= self.color_count:
                raise ValueError(f"position {p} has color {c} outside 1..{self.color_count}")

    def __len__(self) -> int:
        return len(self.assignment)

    @classmethod
    def from_string(cls, text: str, color_count: Optional[int] = None) -> "Coloring":
        """Parse a digit string: ``'0'`` is color 1, ``'1'`` color 2, and so on."""
        assignment = parse_digit_coloring(text)
        if color_count is None:
            color_count = max(assignment, default=1)
            color_count = max(color_count, 2)
        return cls(assignment, color_count)

    @classmethod
    def from_classes(cls, classes: Sequence[Iterable[int]]) -> "Coloring":
        """Build a coloring from its color classes; they must partition ``[1, n]``."""
        owner: dict[int, int] = {}
        for color, members in enumerate(classes, 1):
            for p in members:
                if p in owner:
                    raise ValueError(f"position {p} appears in two color classes")
                owner[p] = color
        n = len(owner)
        if set(owner) != set(range(1, n + 1)):
            raise ValueError("color classes do not cover an initial interval [1, n]")
        return cls(tuple(owner[p] for p in range(1, n + 1)), len(classes))

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.color_count)]
        for p, c in enumerate(self.assignment, 1):
            out[c - 1].append(p)
        return out

    def to_string(self) -> str:
        if self.color_count > 10:
            raise ValueError("digit strings support at most 10 colors")
        return "".join(str(c - 1) for c in self.assignment)


@dataclass(frozen=True)
class CoverWord:
    """A word over nonempty subsets of ``{1..set_count}``; classes may overlap."""

    assignment: tuple[frozenset, ...]
    set_count: int

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(frozenset(s) for s in self.assignment))
        for p, s in enumerate(self.assignment, 1):
            if not s:
                raise ValueError(f"position {p} carries an empty subset")
            if not s <= set(range(1, self.set_count + 1)):
                raise ValueError(f"position {p} names a set outside 1..{self.set_count}")

    def __len__(self) -> int:
        return len(self.assignment)

    @classmethod
    def from_classes(cls, classes: Sequence[Iterable[int]]) -> "CoverWord":
        members = [set(c) for c in classes]
        n = max((max(c) for c in members if c), default=0)
        assignment = []
        for p in range(1, n + 1):
            s = frozenset(q for q, c in enumerate(members, 1) if p in c)
            if not s:
                raise ValueError(f"position {p} is not covered")
            assignment.append(s)
        return cls(tuple(assignment), len(classes))

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.set_count)]
        for p, s in enumerate(self.assignment, 1):
            for q in s:
                out[q - 1].append(p)
        return out


@dataclass(frozen=True)
class ApWitness:
    """Positions of a detected pattern.

    For progression kinds the positions are the progression itself (indices
    into the sequence or color class). For additive powers they are the
    ``p + 1`` block boundaries ``i, i+b, ..., i+p*b``: block ``j`` covers
    symbols ``i+(j-1)b .. i+jb-1``, so the boundaries are exactly the indices
    of the corresponding double progression in the partial-sum sequence.
    """

    positions: tuple[int, ...]
    kind: str
    block_length: Optional[int] = None
    values: Optional[tuple[int, ...]] = field(default=None, compare=False)

    @property
    def step(self) -> int:
        return self.positions[1] - self.positions[0]


# -- conversions -------------------------------------------------------------


def gaps_to_sequence(w: Sequence[int], start: int = 1) -> IncreasingSequence:
    if start < 1:
        raise ValueError("start must be at least 1")
    terms = [start]
    for x in w:
        terms.append(terms[-1] + x)
    return IncreasingSequence(terms)


def sequence_to_gaps(s: Sequence[int]) -> GapWord:
    if len(s) < 1:
        raise ValueError("sequence must have at least one term")
    s = IncreasingSequence(s)
    return GapWord(b - a for a, b in zip(s, s[1:]))


def sequence_to_characteristic_word(s: Sequence[int], length: int) -> str:
    s = IncreasingSequence(s)
    if s and length < s[-1]:
        raise ValueError(f"length {length} is shorter than the largest term {s[-1]}")
    members = set(s)
    return "".join("1" if i in members else "0" for i in range(1, length + 1))


def characteristic_word_to_sequence(word: str) -> IncreasingSequence:
    return IncreasingSequence(i for i, ch in enumerate(word, 1) if ch == "1")


# -- detectors ---------------------------------------------------------------


def _check_k(k: int, least: int) -> None:
    if k < least:
        raise ValueError(f"progression length must be at least {least}, got {k}")


def _double_ap_ending_at(s: Sequence[int], q: int, k: int) -> Optional[int]:
    """Least index step d of a double k-AP whose last index is q (1-based)."""
    d = 1
    while q - (k - 1) * d >= 1:
        top = s[q - 1]
        diff = top - s[q - d - 1]
        j = 2
        while j < k and s[q - (j - 1) * d - 1] - s[q - j * d - 1] == diff:
            j += 1
        if j == k:
            return d
        d += 1
    return None


def find_double_ap(s: Sequence[int], k: int = 3) -> Optional[ApWitness]:
    """Find ``p_1 < ... < p_k`` equally spaced with ``s[p_i]`` also equally spaced."""
    _check_k(k, 3)
    for q in range(1, len(s) + 1):
        d = _double_ap_ending_at(s, q, k)
        if d is not None:
            pos = tuple(q - (k - 1 - i) * d for i in range(k))
            return ApWitness(pos, "double", values=tuple(s[p - 1] for p in pos))
    return None


def append_passes_double_ap(s: Sequence[int], new_term: int, k: int = 3) -> bool:
    _check_k(k, 3)
    if s and new_term <= s[-1]:
        raise ValueError(f"extension {new_term} does not exceed last term {s[-1]}")
    ext = list(s) + [new_term]
    return _double_ap_ending_at(ext, len(ext), k) is None


def prefix_sums(w: Sequence[int]) -> list[int]:
    out = [0]
    for x in w:
        out.append(out[-1] + x)
    return out


def _power_ending_at(ps: Sequence[int], end: int, p: int) -> Optional[int]:
    """Least block length b of an additive p-power ending at symbol ``end``."""
    for b in range(1, end // p + 1):
        total = ps[end] - ps[end - b]
        j = 1
        while j < p and ps[end - j * b] - ps[end - (j + 1) * b] == total:
            j += 1
        if j == p:
            return b
    return None


def additive_power_kind(p: int) -> str:
    return {2: "additive-square", 3: "additive-cube"}.get(p, f"additive-{p}-power")


def find_additive_power(w: Sequence[int], p: int = 2) -> Optional[ApWitness]:
    """Find ``p`` adjacent blocks of equal length and equal sum."""
    if p < 2:
        raise ValueError(f"additive power must be at least 2, got {p}")
    ps = prefix_sums(w)
    for end in range(1, len(w) + 1):
        b = _power_ending_at(ps, end, p)
        if b is not None:
            start = end - p * b + 1
            pos = tuple(start + j * b for j in range(p + 1))
            return ApWitness(pos, additive_power_kind(p), block_length=b)
    return None


def append_passes_additive_power(w: Sequence[int], symbol: int, p: int = 2) -> bool:
    ps = prefix_sums(list(w) + [symbol])
    return _power_ending_at(ps, len(w) + 1, p) is None


def _ap_positions(q: int, d: int, k: int) -> tuple[int, ...]:
    return tuple(q - (k - 1 - i) * d for i in range(k))


def find_mono_ap(c: Coloring, k: int = 3) -> Optional[ApWitness]:
    _check_k(k, 2)
    a = c.assignment
    for q in range(1, len(a) + 1):
        color = a[q - 1]
        d = 1
        while q - (k - 1) * d >= 1:
            if all(a[q - j * d - 1] == color for j in range(1, k)):
                return ApWitness(_ap_positions(q, d, k), "monochromatic")
            d += 1
    return None


def find_rainbow_ap(c: Coloring, k: int) -> Optional[ApWitness]:
    _check_k(k, 2)
    if k > c.color_count:
        raise ValueError(f"a rainbow {k}-AP needs at least {k} colors, have {c.color_count}")
    a = c.assignment
    for q in range(1, len(a) + 1):
        d = 1
        while q - (k - 1) * d >= 1:
            if len({a[q - j * d - 1] for j in range(k)}) == k:
                return ApWitness(_ap_positions(q, d, k), "rainbow")
            d += 1
    return None


def find_mono_double_ap(c: Coloring | CoverWord, k: int = 3) -> Optional[tuple[int, ApWitness]]:
    """Search each color class, read as an increasing sequence, for a double k-AP.

    The witness positions index into the class; ``values`` holds the
    corresponding positions in ``[1, n]``.
    """
    _check_k(k, 3)
    for color, members in enumerate(c.classes(), 1):
        if len(members) < k:
            continue
        hit = find_double_ap(members, k)
        if hit is not None:
            return color, hit
    return None


def class_gaps(c: Coloring | CoverWord, color: int) -> GapWord:
    count = c.color_count if isinstance(c, Coloring) else c.set_count
    if not 1 <= color <= count:
        raise ValueError(f"color {color} outside 1..{count}")
    members = c.classes()[color - 1]
    return GapWord(b - a for a, b in zip(members, members[1:]))


# -- text formats ------------------------------------------------------------


def parse_digit_coloring(text: str) -> tuple[int, ...]:
    """Digits ``0-9`` map to colors ``1-10``; whitespace is ignored."""
    cleaned = "".join(text.split())
    if cleaned.endswith("."):
        cleaned = cleaned[:-1]
    if not cleaned or not cleaned.isdigit():
        bad = next((ch for ch in cleaned if not ch.isdigit()), "")
        raise ValueError(f"malformed coloring string (unexpected {bad!r})" if bad else "empty coloring string")
    return tuple(int(ch) + 1 for ch in cleaned)


def parse_int_list(text: str) -> list[int]:
    """Parse integers separated by whitespace and/or commas, optionally bracketed."""
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    parts = [t for t in re.split(r"[\s,]+", body) if t]
    try:
        return [int(t) for t in parts]
    except ValueError as exc:
        raise ValueError(f"malformed integer list: {text!r}") from exc
