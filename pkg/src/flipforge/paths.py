"""Flip sequences into strata and the distance bounds derived from them."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property

from .arcs import (ArcWord, MultiArc, as_words, flip_and_transport,
                   intersection_with_triangulation)
from .errors import InvariantViolation, NotFlippable, PreconditionUnmet
from .surface import Triangulation, nxt, prv


@dataclass(frozen=True)
class FlipPath:
    """A start triangulation and the arc ids flipped in order."""
    start: Triangulation
    steps: tuple[int, ...]
    carried: tuple = field(default=(), compare=False, repr=False)

    def __len__(self):
        return len(self.steps)

    @cached_property
    def triangulations(self) -> list[Triangulation]:
        chain = [self.start]
        for arc in self.steps:
            if not chain[-1].is_flippable(arc):
                raise NotFlippable(f"step {len(chain) - 1}: arc {arc} is not flippable")
            chain.append(chain[-1].flip(arc))
        return chain

    @property
    def end(self) -> Triangulation:
        return self.triangulations[-1]

    def then(self, other: FlipPath) -> FlipPath:
        if other.start != self.end:
            raise ValueError("paths do not connect")
        return FlipPath(self.start, self.steps + other.steps, other.carried)


class FlipClass(enum.Enum):
    CONVENIENT = "convenient"
    NEUTRAL = "neutral"
    INCREASING = "increasing"


def _crossings_after_flip(T: Triangulation, words, h: int) -> int:
    _, moved = flip_and_transport(T, h, words)
    return sum(1 for w in moved for x in w.exits if w.base.arcs[x] == h)


def classify_flip(T: Triangulation, A, h: int) -> FlipClass:
    """Compare the crossings of the old and the new diagonal with A."""
    words = as_words(A)
    if not T.is_flippable(h):
        raise NotFlippable(f"arc {h} is not flippable")
    counts, _ = intersection_with_triangulation(T, words)
    after = _crossings_after_flip(T, words, h)
    if after < counts[h]:
        return FlipClass.CONVENIENT
    if after == counts[h]:
        return FlipClass.NEUTRAL
    return FlipClass.INCREASING


def _quad_arcs(T: Triangulation, h: int) -> list[int]:
    d, e = T.arc_darts[h]
    return [T.arcs[x] for x in (nxt(d), prv(d), nxt(e), prv(e))]


def select_convenient(T: Triangulation, A, walk_log: list | None = None) -> int:
    """A maximally crossed arc whose flip lowers the intersection with A.

    Starts at the lowest maximal arc; on a neutral flip moves to a maximal
    side of the quadrilateral (lowest id first, never revisiting) and backs
    up to the previous arc when every such side has been tried.  Each
    maximal arc is examined at most once, so the walk takes at most kappa
    steps; running out raises ``InvariantViolation``.
    """
    words = as_words(A)
    counts, total = intersection_with_triangulation(T, words)
    if total == 0:
        raise PreconditionUnmet("A is already contained in T")
    top = max(counts)
    m = counts.index(top)
    visited = {m}
    trail = []
    while True:
        if walk_log is not None:
            walk_log.append(m)
        if not T.is_flippable(m):
            raise InvariantViolation(f"maximal arc {m} is not flippable")
        after = _crossings_after_flip(T, words, m)
        if after < top:
            return m
        if after > top:
            raise InvariantViolation(f"flipping maximal arc {m} increases the intersection")
        trail.append(m)
        m = None
        while trail and m is None:
            options = sorted(a for a in _quad_arcs(T, trail[-1])
                             if a != -1 and counts[a] == top and a not in visited)
            if options:
                m = options[0]
            else:
                trail.pop()
        if m is None:
            raise InvariantViolation("the neutral walk found no convenient maximal arc")
        visited.add(m)


def path_to_stratum(T: Triangulation, A, check: bool = False) -> FlipPath:
    """Flip conveniently until every component of A is an arc.

    The returned path carries the components of A transported to its end,
    where they are all edge words.  With ``check`` every step asserts the
    monotonicity and persistence properties of the algorithm.
    """
    words = as_words(A)
    start = T
    steps = []
    counts, total = intersection_with_triangulation(T, words)
    while total:
        h = select_convenient(T, words)
        T2, words2 = flip_and_transport(T, h, words)
        counts2, total2 = intersection_with_triangulation(T2, words2)
        if total2 >= total:
            raise InvariantViolation(f"flip of {h} did not decrease the intersection")
        if check:
            if max(counts2) > max(counts):
                raise InvariantViolation("maximal crossing count increased")
            if counts[h] == 0:
                raise InvariantViolation("flipped an arc disjoint from A")
        steps.append(h)
        T, words, counts, total = T2, words2, counts2, total2
    return FlipPath(start, tuple(steps), tuple(words))


def arc_intersection(a: ArcWord, b: ArcWord) -> int:
    """Geometric intersection number of two arcs based at the same triangulation."""
    if a.base != b.base:
        raise ValueError("arcs based at different triangulations")
    path = path_to_stratum(a.base, [a])
    (edge,) = path.carried
    arc = edge.edge_arc()
    if arc == -1:
        return 0
    _, (moved,) = flip_and_transport_path(a.base, path.steps, [b])
    return sum(1 for x in moved.exits if moved.base.arcs[x] == arc)


def flip_and_transport_path(T: Triangulation, steps, words):
    words = as_words(words)
    for arc in steps:
        T, words = flip_and_transport(T, arc, words)
    return T, words


def is_multiarc(words) -> bool:
    """Whether the words are pairwise disjoint and pairwise distinct."""
    words = as_words(words)
    for i, a in enumerate(words):
        for b in words[i + 1:]:
            if a.same_arc(b) or arc_intersection(a, b):
                return False
    return True


def complete_to_triangulation(A) -> FlipPath:
    """A triangulation containing A, reached from A's base by convenient flips."""
    return path_to_stratum(as_words(A)[0].base, A)


def _largest_power_below(kappa: int, value: int, scale: int = 1) -> int:
    """Largest m with kappa**m * scale <= value (value >= scale, kappa >= 2)."""
    m = 0
    while kappa ** (m + 1) * scale <= value:
        m += 1
    return m


def lower_bound_distance(T: Triangulation, A) -> int:
    """Lower bound on the flip distance from T to the stratum of A."""
    words = as_words(A)
    counts, total = intersection_with_triangulation(T, words)
    n = len(words)
    if max(counts, default=0) < 2 * n:
        raise PreconditionUnmet("maximal crossing count is below 2|A|")
    if T.kappa < 2:
        raise PreconditionUnmet("bound needs at least two arcs")
    return _largest_power_below(T.kappa, total, 2 * n - 1) - 2


def pairwise_lower_bound(intersection: int, kappa: int) -> int:
    """Lower bound on d(T, S) from i(T, S); 0 when the triangulations agree."""
    if intersection == 0:
        return 0
    if kappa < 2:
        return -4
    return _largest_power_below(kappa, intersection) - 4


def step_drop_violations(T: Triangulation, A) -> list[tuple[int, int, int]]:
    """Flips for which i(T', A) < 2 max_t i(t, A) - 2|A|, as (arc, i(T',A), bound)."""
    words = as_words(A)
    counts, total = intersection_with_triangulation(T, words)
    bound = 2 * max(counts, default=0) - 2 * len(words)
    out = []
    for h in T.flippable_arcs():
        after = total - counts[h] + _crossings_after_flip(T, words, h)
        if after < bound:
            out.append((h, after, bound))
    return out


def step_drop_bound_check(T: Triangulation, A) -> bool:
    return not step_drop_violations(T, A)
