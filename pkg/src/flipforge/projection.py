"""Combing along an oriented arc and the retractions onto strata.

To comb an arc t along an oriented arc a, first flip a into the
triangulation.  Then cut t at every crossing with a and slide each cut end
along a until it reaches the head of a.  The pieces are pairwise disjoint
and each has an endpoint at the head of a.  Combing every arc of a
triangulation T yields, together with a itself, a new triangulation which
contains a.  This defines a projection of the flip graph onto the stratum
of a that moves adjacent triangulations to equal or adjacent ones.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .arcs import ArcWord, MultiArc, as_words, transport_reverse
from .errors import (BaseMismatch, InessentialArc, InvariantViolation,
                     NotRealizable, SearchBudgetExceeded)
from .explorer import (MarkedTriangulation, all_geodesics, default_budget,
                       distance, marked_intersection)
from .paths import flip_and_transport_path, path_to_stratum
from .surface import Triangulation, nxt


@dataclass(frozen=True)
class OrientedArc:
    """An arc with a chosen direction; ``forward`` keeps the word's own direction."""
    word: ArcWord
    forward: bool = True

    @property
    def oriented(self) -> ArcWord:
        return self.word if self.forward else self.word.reversed()


def _as_oriented(a) -> ArcWord:
    return a.oriented if isinstance(a, OrientedArc) else a


def _cut_and_slide(Ta: Triangulation, dart: int, word: ArcWord) -> list[ArcWord]:
    """Pieces of ``word`` cut at the edge ``dart`` (oriented tail to head), slid to the head."""
    arc = Ta.arcs[dart]
    glue = Ta.glue
    raw = []
    start, cur = word.start, []
    for x in word.exits:
        if Ta.arcs[x] == arc:
            raw.append((start, cur, nxt(x) if x == dart else x))
            y = glue[x]
            start, cur = (nxt(y) if y == dart else y), []
        else:
            cur.append(x)
    raw.append((start, cur, word.end))
    out = []
    for s, ex, e in raw:
        try:
            out.append(ArcWord.make(Ta, s, ex, e))
        except InessentialArc:
            continue
    return out


def _is_boundary_side(w: ArcWord) -> bool:
    return not w.exits and w.edge_arc() == -1


def _dedupe(words) -> list[ArcWord]:
    seen = {}
    for w in words:
        if _is_boundary_side(w):
            continue
        seen.setdefault(w.unoriented_key(), w)
    return list(seen.values())


def _crossing_count(a: ArcWord, t: ArcWord) -> tuple:
    """Put a into the triangulation; return (path, a as edge, t carried there)."""
    path = path_to_stratum(a.base, [a])
    (edge,) = path.carried
    _, (moved,) = flip_and_transport_path(a.base, path.steps, [t])
    return path, edge, moved


def comb(a_plus, t: ArcWord) -> MultiArc:
    """Comb t along the oriented arc ``a_plus``; result is over t's base."""
    a = _as_oriented(a_plus)
    if a.base != t.base:
        raise BaseMismatch("arcs based at different triangulations")
    path, edge, moved = _crossing_count(a, t)
    arc = edge.edge_arc()
    if not any(moved.base.arcs[x] == arc for x in moved.exits):
        return MultiArc((t,))
    pieces = _dedupe(_cut_and_slide(moved.base, edge.start, moved))
    back = transport_reverse(pieces, a.base, path.steps)
    return MultiArc(tuple(back))


@dataclass
class Projection:
    """Image of a triangulation under a projection, with a flip path witness."""
    start: Triangulation
    steps: tuple
    arcs: tuple = field(repr=False)

    @property
    def triangulation(self) -> Triangulation:
        T = self.start
        for arc in self.steps:
            T = T.flip(arc)
        return T


def project_words(T: Triangulation, a: ArcWord) -> Projection:
    """Project T onto the stratum of the oriented arc a (a word over T)."""
    if a.base != T:
        raise BaseMismatch("arc is not based at the triangulation")
    path = path_to_stratum(T, [a])
    (edge,) = path.carried
    Ta = edge.base
    dart = edge.start
    if edge.edge_arc() == -1:
        return Projection(T, tuple(path.steps), ())
    own = tuple(ArcWord.of_arc(T, k) for k in range(T.kappa))
    _, carried = flip_and_transport_path(T, path.steps, own)
    pieces = [edge]
    for w in carried:
        pieces.extend(_cut_and_slide(Ta, dart, w))
    arcs = _dedupe(pieces)
    if len(arcs) != T.kappa:
        raise InvariantViolation(f"combing produced {len(arcs)} arcs, expected {T.kappa}")
    second = path_to_stratum(Ta, arcs)
    return Projection(T, tuple(path.steps) + tuple(second.steps), tuple(second.carried))


def _oriented_list(A_sigma):
    if isinstance(A_sigma, MultiArc):
        return A_sigma.oriented()
    return [_as_oriented(a) for a in A_sigma]


def project_arc(T, a_plus):
    """Projection onto the stratum of one oriented arc.

    With a plain triangulation the arc is a word over it and the result is
    a ``Projection``.  With a marked triangulation the arc is a word over
    the reference and the result is the marked image.
    """
    a = _as_oriented(a_plus)
    if isinstance(T, MarkedTriangulation):
        (here,) = T.words_here([a])
        return T.follow(project_words(T.triangulation, here).steps)
    return project_words(T, a)


def project_multiarc(T, A_sigma):
    """Compose the one-arc projections in the given order, left to right."""
    comps = _oriented_list(A_sigma)
    if isinstance(T, MarkedTriangulation):
        M = T
        for a in comps:
            M = project_arc(M, a)
        return M
    if not comps:
        return Projection(T, (), ())
    steps = []
    cur = T
    for a in comps:
        _, (here,) = flip_and_transport_path(T, steps, [a])
        p = project_words(cur, here)
        steps.extend(p.steps)
        cur = p.triangulation
    _, final = flip_and_transport_path(T, steps, comps)
    if not all(w.is_edge() for w in final):
        raise NotRealizable("components are not simultaneously arcs after projecting")
    return Projection(T, tuple(steps), tuple(final))


# -- checks against exact distances -------------------------------------------

def in_stratum(M: MarkedTriangulation, A_ref) -> bool:
    """Whether M contains every component of A (words over M's reference)."""
    return all(w.is_edge() for w in M.words_here(as_words(A_ref)))


def distance_to_stratum(M: MarkedTriangulation, A_ref, budget: int | None = None) -> int:
    """Exact d(M, F_A) by breadth-first search."""
    budget = default_budget() if budget is None else budget
    A_ref = as_words(A_ref)
    if in_stratum(M, A_ref):
        return 0
    seen = {M.key}
    layer = [M]
    d = 0
    while layer:
        d += 1
        nxt_layer = []
        for X in layer:
            for _, N in X.neighbors():
                if N.key in seen:
                    continue
                if in_stratum(N, A_ref):
                    return d
                seen.add(N.key)
                nxt_layer.append(N)
                if len(seen) > budget:
                    raise SearchBudgetExceeded(f"stratum search exceeded {budget} states")
        layer = nxt_layer
    raise NotRealizable("stratum not reachable")


@dataclass
class CheckReport:
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {"checked": self.checked, "violations": [list(map(str, v)) for v in self.violations],
                "ok": self.ok}


def check_strong_convexity(A_ref, pairs, budget: int | None = None) -> CheckReport:
    """Every geodesic between two stratum points stays in the stratum."""
    report = CheckReport()
    for S, T in pairs:
        dag = all_geodesics(S, T, budget)
        report.checked += 1
        for V in dag.vertices():
            if not in_stratum(V, A_ref):
                report.violations.append((S.path, T.path, V.path))
                break
    return report


def projection_distance_checks(T: MarkedTriangulation, A_sigma, others=(),
                               budget: int | None = None) -> CheckReport:
    """Check d(T,F_A) <= d(T,pi(T)) <= 2 d(T,F_A) and d(pi S, pi T) <= i(S,T)."""
    report = CheckReport()
    comps = _oriented_list(A_sigma)
    image = project_multiarc(T, comps)
    to_stratum = distance_to_stratum(T, comps, budget)
    moved = distance(T, image, budget)
    report.checked += 1
    if not (to_stratum <= moved <= 2 * to_stratum):
        report.violations.append(("distance to projection", to_stratum, moved))
    for S in others:
        report.checked += 1
        d = distance(image, project_multiarc(S, comps), budget)
        i = marked_intersection(S, T)
        if d > i:
            report.violations.append(("lipschitz", d, i))
    return report
