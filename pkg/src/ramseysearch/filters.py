"""Named pruning predicates for the search spaces.

Every filter offers a full check on a finished object and an incremental
check that only looks at patterns ending at a newly appended element. The
compiled search kernel mirrors the incremental checks; the ``kernel_code``
of each filter tells it which one to run.

Objects per space:

* ``sequences``: a gap word (tuple of positive ints). Progression filters
  read it as the sequence with start value 1.
* ``colorings``: a :class:`~ramseysearch.core.Coloring`, a tuple of color ids
  or a digit string.
* ``covers``: a :class:`~ramseysearch.core.CoverWord` or a tuple of sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Sequence

from . import core
from .core import ApWitness, Coloring, CoverWord

# kernel filter codes
K_ADDITIVE_POWER = 1
K_MONO_DOUBLE_AP = 2
K_MONO_AP = 3
K_RAINBOW_AP = 4
K_MAX_CLASS_GAPS = 5


class FilterError(ValueError):
    pass


@dataclass(frozen=True)
class FilterSpec:
    name: str
    params: Mapping[str, Any] = field(default_factory=dict)


def _as_coloring(obj) -> Coloring:
    if isinstance(obj, Coloring):
        return obj
    if isinstance(obj, str):
        return Coloring.from_string(obj)
    assignment = tuple(obj)
    return Coloring(assignment, max(assignment, default=1))


def _as_classes(obj) -> list[list[int]]:
    if isinstance(obj, (Coloring, CoverWord)):
        return obj.classes()
    if isinstance(obj, str):
        return Coloring.from_string(obj).classes()
    items = list(obj)
    if items and not isinstance(items[0], int):
        size = max((max(s) for s in items), default=0)
        return CoverWord(tuple(items), size).classes()
    return _as_coloring(items).classes()


def _appended_sets(appended) -> frozenset:
    if isinstance(appended, int):
        return frozenset((appended,))
    return frozenset(appended)


def _assignment(obj) -> list[frozenset]:
    """Per-position color sets, uniform over colorings and covers."""
    if isinstance(obj, CoverWord):
        return list(obj.assignment)
    if isinstance(obj, (Coloring, str)):
        return [frozenset((c,)) for c in _as_coloring(obj).assignment]
    items = list(obj)
    return [_appended_sets(x) for x in items]


class Filter:
    name = ""
    spaces: frozenset[str] = frozenset()

    def __init__(self, params: Mapping[str, Any]):
        self.params = dict(params)

    @property
    def display_name(self) -> str:
        return self.name

    def full(self, obj) -> tuple[bool, Optional[ApWitness]]:
        raise NotImplementedError

    def incremental(self, obj, appended) -> bool:
        raise NotImplementedError

    def kernel_code(self) -> tuple[int, int, tuple[int, ...]]:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<filter {self.display_name}>"


def _require_int(params, key: str, least: int, filter_name: str) -> int:
    if key not in params or params[key] is None:
        raise FilterError(f"filter {filter_name} needs parameter {key!r}")
    value = params[key]
    if not isinstance(value, int) or value < least:
        raise FilterError(f"filter {filter_name}: {key} must be an integer >= {least}, got {value!r}")
    return value


class NoDoubleAps(Filter):
    name = "no-double-aps"
    spaces = frozenset({"sequences"})

    def __init__(self, params):
        super().__init__(params)
        self.k = _require_int(params, "k", 3, self.name)

    def full(self, obj):
        hit = core.find_double_ap(core.gaps_to_sequence(obj), self.k)
        return hit is None, hit

    def incremental(self, obj, appended):
        seq = core.gaps_to_sequence(obj)
        return core.append_passes_double_ap(seq, seq[-1] + appended, self.k)

    def kernel_code(self):
        # a double k-AP in a sequence is k-1 equal adjacent blocks of its gaps
        return K_ADDITIVE_POWER, self.k - 1, ()


class NoAdditivePower(Filter):
    spaces = frozenset({"sequences"})
    power = 2

    def __init__(self, params):
        super().__init__(params)
        self.p = self.power

    def full(self, obj):
        hit = core.find_additive_power(obj, self.p)
        return hit is None, hit

    def incremental(self, obj, appended):
        return core.append_passes_additive_power(obj, appended, self.p)

    def kernel_code(self):
        return K_ADDITIVE_POWER, self.p, ()


class NoAdditiveSquares(NoAdditivePower):
    name = "no-additive-squares"
    power = 2


class NoAdditiveCubes(NoAdditivePower):
    name = "no-additive-cubes"
    power = 3


class NoAdditivePowers(NoAdditivePower):
    name = "no-additive-powers"

    def __init__(self, params):
        super().__init__(params)
        self.p = _require_int(params, "p", 2, self.name)

    @property
    def display_name(self):
        return f"no-additive-{self.p}-powers"


class NoMonoDoubleAps(Filter):
    name = "no-mono-double-aps"
    spaces = frozenset({"colorings", "covers"})

    def __init__(self, params):
        super().__init__(params)
        self.k = _require_int(params, "k", 3, self.name)

    def full(self, obj):
        for color, members in enumerate(_as_classes(obj), 1):
            if len(members) < self.k:
                continue
            hit = core.find_double_ap(members, self.k)
            if hit is not None:
                return False, hit
        return True, None

    def incremental(self, obj, appended):
        classes = _as_classes(obj) if len(obj) else []
        p = len(obj) + 1
        for q in _appended_sets(appended):
            members = classes[q - 1] if q <= len(classes) else []
            if not core.append_passes_double_ap(members, p, self.k):
                return False
        return True

    def kernel_code(self):
        return K_MONO_DOUBLE_AP, self.k, ()


class NoMonoAps(Filter):
    """No k equally spaced positions sharing a color (``no-n-aps``)."""

    name = "no-n-aps"
    spaces = frozenset({"colorings", "covers"})

    def __init__(self, params):
        super().__init__(params)
        self.k = _require_int(params, "k", 2, self.name)

    @property
    def display_name(self):
        return f"no-{self.k}-aps"

    def _ending_at(self, sets: Sequence[frozenset], q: int) -> Optional[ApWitness]:
        d = 1
        while q - (self.k - 1) * d >= 1:
            common = sets[q - 1]
            for j in range(1, self.k):
                common = common & sets[q - j * d - 1]
            if common:
                return ApWitness(tuple(q - (self.k - 1 - i) * d for i in range(self.k)), "monochromatic")
            d += 1
        return None

    def full(self, obj):
        sets = _assignment(obj)
        for q in range(1, len(sets) + 1):
            hit = self._ending_at(sets, q)
            if hit is not None:
                return False, hit
        return True, None

    def incremental(self, obj, appended):
        sets = _assignment(obj) + [_appended_sets(appended)]
        return self._ending_at(sets, len(sets)) is None

    def kernel_code(self):
        return K_MONO_AP, self.k, ()


class NoRainbowAps(Filter):
    name = "no-rainbow-aps"
    spaces = frozenset({"colorings"})

    def __init__(self, params):
        super().__init__(params)
        self.k = _require_int(params, "k", 2, self.name)
        colors = params.get("colors")
        if colors is not None and self.k > colors:
            raise FilterError(f"no-rainbow-aps: ap-length {self.k} exceeds n-colors {colors}")

    def _ending_at(self, a: Sequence[int], q: int) -> bool:
        d = 1
        while q - (self.k - 1) * d >= 1:
            if len({a[q - j * d - 1] for j in range(self.k)}) == self.k:
                return True
            d += 1
        return False

    def full(self, obj):
        c = _as_coloring(obj)
        if self.k > c.color_count:
            return True, None
        hit = core.find_rainbow_ap(c, self.k)
        return hit is None, hit

    def incremental(self, obj, appended):
        a = list(_as_coloring(obj).assignment) if len(obj) else []
        a.append(appended)
        return not self._ending_at(a, len(a))

    def kernel_code(self):
        return K_RAINBOW_AP, self.k, ()


class MaxClassGaps(Filter):
    """Consecutive members of class ``i`` differ by at most ``gaps[i]``.

    ``None`` means unbounded. Only gaps inside a class count: the distance
    from either end of the interval to a class, and empty classes, are free.
    """

    name = "max-class-gaps"
    spaces = frozenset({"colorings", "covers"})

    def __init__(self, params):
        super().__init__(params)
        gaps = params.get("gaps")
        if gaps is None:
            raise FilterError("filter max-class-gaps needs parameter 'gaps' (set max-gaps)")
        gaps = [None if g is None else int(g) for g in gaps]
        if any(g is not None and g < 1 for g in gaps):
            raise FilterError(f"max-class-gaps bounds must be >= 1, got {gaps}")
        self.gaps = tuple(gaps)

    def _bound(self, color: int) -> Optional[int]:
        return self.gaps[color - 1] if color <= len(self.gaps) else None

    def full(self, obj):
        for color, members in enumerate(_as_classes(obj), 1):
            bound = self._bound(color)
            if bound is None:
                continue
            for a, b in zip(members, members[1:]):
                if b - a > bound:
                    return False, ApWitness((a, b), "class-gap")
        return True, None

    def incremental(self, obj, appended):
        sets = _assignment(obj)
        p = len(sets) + 1
        for q in _appended_sets(appended):
            bound = self._bound(q)
            if bound is None:
                continue
            last = next((i for i in range(len(sets), 0, -1) if q in sets[i - 1]), None)
            if last is not None and p - last > bound:
                return False
        return True

    def kernel_code(self):
        return K_MAX_CLASS_GAPS, 0, tuple(0 if g is None else g for g in self.gaps)


REGISTRY: dict[str, type[Filter]] = {
    cls.name: cls
    for cls in (NoDoubleAps, NoAdditiveSquares, NoAdditiveCubes, NoAdditivePowers, NoMonoDoubleAps, NoMonoAps, NoRainbowAps, MaxClassGaps)
}


def make_filter(spec: FilterSpec) -> Filter:
    try:
        cls = REGISTRY[spec.name]
    except KeyError:
        raise FilterError(f"unknown filter {spec.name!r}; known: {', '.join(sorted(REGISTRY))}") from None
    return cls(spec.params)


def passes_all(filters: Sequence[Filter], obj) -> tuple[bool, Optional[Filter], Optional[ApWitness]]:
    """Full check of every filter in order, stopping at the first failure."""
    for f in filters:
        ok, hit = f.full(obj)
        if not ok:
            return False, f, hit
    return True, None, None
