"""Arcs as reduced crossing words over a base triangulation.

A word starts at a corner of the base, crosses a sequence of darts (each
stored as the dart through which the word leaves a triangle) and ends at a
corner.  A reduced word has no bigon (leaving a triangle through the side it
entered by) and no end spike (a first or last crossing of a side incident to
the word's own endpoint inside the first or last triangle).  Reduced words
are unique per isotopy class, which is what every equality test relies on.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import (BaseMismatch, DisconnectedWord, InessentialArc,
                     NotFlippable, NotInStratum)
from .surface import Triangulation, derive_signature, nxt, prv


def _check_connected(T: Triangulation, start: int, exits, end: int) -> None:
    glue = T.glue
    tri = start // 3
    for x in exits:
        if x // 3 != tri or glue[x] == -1:
            raise DisconnectedWord(f"crossing {divmod(x, 3)} does not leave triangle {tri}")
        tri = glue[x] // 3
    if end // 3 != tri:
        raise DisconnectedWord(f"end corner {divmod(end, 3)} is not in triangle {tri}")


def reduce_data(T: Triangulation, start: int, exits, end: int):
    """Remove bigons and end spikes until none is left."""
    glue = T.glue
    stack = []
    for x in exits:
        if stack and glue[stack[-1]] == x:
            stack.pop()
        else:
            stack.append(x)
    lo, hi = 0, len(stack)
    changed = True
    while changed:
        changed = False
        if lo < hi:
            x = stack[lo]
            if x == start:
                start, lo, changed = nxt(glue[x]), lo + 1, True
            elif x == prv(start):
                start, lo, changed = glue[x], lo + 1, True
        if lo < hi:
            x = stack[hi - 1]
            y = glue[x]
            if end == y:
                end, hi, changed = nxt(x), hi - 1, True
            elif end == nxt(y):
                end, hi, changed = x, hi - 1, True
    exits = tuple(stack[lo:hi])
    if not exits:
        if start == end:
            raise InessentialArc("word reduces to a loop bounding a disk")
        if end == prv(start) and glue[end] != -1:
            f = glue[end]
            start, end = f, nxt(f)
    return start, exits, end


@dataclass(frozen=True)
class ArcWord:
    """An oriented arc, isotopy class relative to ``base``."""
    start: int
    exits: tuple[int, ...]
    end: int
    base: Triangulation = field(repr=False, hash=False)

    @classmethod
    def make(cls, base: Triangulation, start: int, exits=(), end: int | None = None,
             reduce: bool = True) -> ArcWord:
        exits = tuple(exits)
        if end is None:
            raise DisconnectedWord("missing end corner")
        _check_connected(base, start, exits, end)
        if reduce:
            start, exits, end = reduce_data(base, start, exits, end)
        return cls(start, exits, end, base)

    @classmethod
    def of_arc(cls, base: Triangulation, arc: int, reverse: bool = False) -> ArcWord:
        """The arc ``arc`` of ``base``, oriented along its smaller dart."""
        d, e = base.arc_darts[arc]
        if reverse:
            d = e
        return cls(d, (), nxt(d), base)

    @classmethod
    def of_dart(cls, base: Triangulation, d: int) -> ArcWord:
        """The side carried by dart ``d`` (boundary sides included)."""
        return cls(d, (), nxt(d), base)

    @property
    def tail(self) -> int:
        return self.base.verts[self.start]

    @property
    def head(self) -> int:
        return self.base.verts[self.end]

    @property
    def crossing_arcs(self) -> list[int]:
        return [self.base.arcs[x] for x in self.exits]

    def is_edge(self) -> bool:
        return not self.exits

    def edge_arc(self) -> int:
        """Arc id of an edge word, ``-1`` for a boundary side."""
        if self.exits:
            raise ValueError("word crosses the triangulation")
        side = self.start if self.end == nxt(self.start) else self.end
        return self.base.arcs[side]

    def reversed(self) -> ArcWord:
        glue = self.base.glue
        exits = tuple(glue[x] for x in reversed(self.exits))
        start, end = self.end, self.start
        if not exits:
            return ArcWord(*reduce_data(self.base, start, exits, end), self.base)
        return ArcWord(start, exits, end, self.base)

    def unoriented_key(self):
        a, b = self.reversed(), self
        ka, kb = (a.start, a.exits, a.end), (b.start, b.exits, b.end)
        return min(ka, kb)

    def same_arc(self, other: ArcWord) -> bool:
        return self.unoriented_key() == other.unoriented_key()

    def rebased(self, base: Triangulation) -> ArcWord:
        return ArcWord(self.start, self.exits, self.end, base)


@dataclass(frozen=True)
class MultiArc:
    """Ordered pairwise disjoint arcs with a direction flag per component."""
    components: tuple[ArcWord, ...]
    orientations: tuple[bool, ...] = None

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if self.orientations is None:
            object.__setattr__(self, "orientations", (True,) * len(comps))
        else:
            object.__setattr__(self, "orientations", tuple(bool(o) for o in self.orientations))
        if len(self.orientations) != len(comps):
            raise ValueError("one orientation per component")
        if comps and any(c.base != comps[0].base for c in comps[1:]):
            raise BaseMismatch("components based at different triangulations")

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    @property
    def base(self) -> Triangulation:
        return self.components[0].base

    @classmethod
    def of_arcs(cls, base: Triangulation, arcs) -> MultiArc:
        return cls(tuple(ArcWord.of_arc(base, a) for a in arcs))

    def oriented(self) -> list[ArcWord]:
        return [c if o else c.reversed() for c, o in zip(self.components, self.orientations)]

    def with_components(self, comps) -> MultiArc:
        return MultiArc(tuple(comps), self.orientations)


def as_words(A) -> tuple[ArcWord, ...]:
    if isinstance(A, MultiArc):
        return A.components
    if isinstance(A, ArcWord):
        return (A,)
    return tuple(A)


def _require_base(T: Triangulation, words) -> None:
    for w in words:
        if w.base is not T and w.base != T:
            raise BaseMismatch("word is based at another triangulation")


def intersection_with_triangulation(T: Triangulation, A) -> tuple[list[int], int]:
    """Per-arc counts ``i(t, A)`` and the total ``i(T, A)``."""
    words = as_words(A)
    _require_base(T, words)
    counts = [0] * T.kappa
    arcs = T.arcs
    for w in words:
        for x in w.exits:
            counts[arcs[x]] += 1
    return counts, sum(counts)


def terminal_triangles(T: Triangulation, A) -> set[int]:
    """Triangles holding an endpoint of a component that crosses T."""
    words = as_words(A)
    _require_base(T, words)
    out = set()
    for w in words:
        if w.exits:
            out.add(w.start // 3)
            out.add(w.end // 3)
    return out


# -- transport across a flip ---------------------------------------------------

def _cycle(T: Triangulation, d: int):
    """Corners and sides around the quadrilateral of the arc through dart ``d``.

    Positions 0..7 run counterclockwise: 0 start of ``d``, 1 the next outer
    side, 2 the apex of the other triangle, ..., 6 the apex of ``d``'s
    triangle, 7 the side back to position 0.  Returns maps from corners and
    darts to positions, and from positions back to corners/darts per side of
    the diagonal.
    """
    e = T.glue[d]
    corner_pos = {d: 0, nxt(e): 0, prv(e): 2, e: 4, nxt(d): 4, prv(d): 6}
    dart_pos = {nxt(e): 1, prv(e): 3, nxt(d): 5, prv(d): 7}
    return corner_pos, dart_pos, d, e


def _passage_words(d: int, e: int, x: int, y: int):
    """Rebuild a passage between positions x and y of the quadrilateral
    whose diagonal is dart ``d`` (positions 4..0 side) and ``e`` (0..4 side).

    Returns ``(start_corner | None, exits, end_corner | None)``.
    """
    corner_a = {0: d, 4: nxt(d), 6: prv(d)}
    corner_b = {0: nxt(e), 4: e, 2: prv(e)}
    dart_of = {5: nxt(d), 7: prv(d), 1: nxt(e), 3: prv(e)}

    def side(pos):
        if pos in (5, 6, 7):
            return "a"
        if pos in (1, 2, 3):
            return "b"
        return None

    sx, sy = side(x), side(y)
    if sx is None and sy is None:
        # the diagonal itself, oriented from x to y
        return (corner_a[x], (), corner_a[y])
    if sx is None:
        sx = sy
    if sy is None:
        sy = sx
    start = None
    if x % 2 == 0:
        start = (corner_a if sx == "a" else corner_b)[x]
    exits = []
    if sx != sy:
        exits.append(d if sx == "a" else e)
    end = None
    if y % 2 == 0:
        end = (corner_a if sy == "a" else corner_b)[y]
    else:
        exits.append(dart_of[y])
    return start, tuple(exits), end


def _transport_one(w: ArcWord, X: Triangulation, dX: int, Y: Triangulation, dY: int, shift: int) -> ArcWord:
    glue = X.glue
    corner_pos, dart_pos, d1, d2 = _cycle(X, dX)
    t1, t2 = d1 // 3, d2 // 3
    quad = (t1, t2)
    eY = Y.glue[dY]
    exits = w.exits
    n = len(exits)
    new_start, new_end = w.start, w.end
    out = []
    i = 0
    # segment i lives in triangle tri_i; entry is start corner or glue[exits[i-1]]
    tris = [w.start // 3] + [glue[x] // 3 for x in exits]
    while i <= n:
        if tris[i] not in quad:
            if i < n:
                out.append(exits[i])
            i += 1
            continue
        # passage starting at segment i
        if i == 0:
            x = corner_pos[w.start]
        else:
            x = dart_pos[glue[exits[i - 1]]]
        j = i
        while j < n and exits[j] in (d1, d2):
            j += 1
        if j == n:
            y = corner_pos[w.end]
        else:
            y = dart_pos[exits[j]]
        s, ex, f = _passage_words(dY, eY, (x + shift) % 8, (y + shift) % 8)
        if s is not None:
            new_start = s
        if f is not None:
            new_end = f
        out.extend(ex)
        i = j + 1
    start, ex, end = reduce_data(Y, new_start, out, new_end)
    return ArcWord(start, ex, end, Y)


def flip_and_transport(T: Triangulation, arc: int, words):
    """Flip ``arc`` and carry the words across; returns ``(T', words')``."""
    words = as_words(words)
    _require_base(T, words)
    if not T.is_flippable(arc):
        raise NotFlippable(f"arc {arc} is not flippable")
    Y = T.flip(arc)
    dX = T.arc_darts[arc][0]
    dY = 3 * (dX // 3) + 2
    return Y, tuple(_transport_one(w, T, dX, Y, dY, 6) for w in words)


def transport_across_flip(word, arc: int):
    """Carry a word (or MultiArc) across the flip of ``arc`` in its base."""
    if isinstance(word, MultiArc):
        _, comps = flip_and_transport(word.base, arc, word.components)
        return word.with_components(comps)
    _, (w,) = flip_and_transport(word.base, arc, (word,))
    return w


def transport_back(words, X: Triangulation, arc: int, Y: Triangulation | None = None):
    """Carry words based at ``X.flip(arc)`` back to ``X``."""
    if Y is None:
        Y = X.flip(arc)
    words = as_words(words)
    _require_base(Y, words)
    dX = X.arc_darts[arc][0]
    dY = 3 * (dX // 3) + 2
    return tuple(_transport_one(w, Y, dY, X, dX, 2) for w in words)


def transport_along(words, T: Triangulation, steps):
    """Carry words along a sequence of flips; returns ``(endpoint, words)``."""
    words = as_words(words)
    for arc in steps:
        T, words = flip_and_transport(T, arc, words)
    return T, words


def transport_reverse(words, T: Triangulation, steps):
    """Carry words based at the end of the path ``steps`` from ``T`` back to ``T``."""
    chain = [T]
    for arc in steps:
        chain.append(chain[-1].flip(arc))
    words = as_words(words)
    words = tuple(w.rebased(chain[-1]) for w in words)
    for k in range(len(steps) - 1, -1, -1):
        words = transport_back(words, chain[k], steps[k], chain[k + 1])
    return words


# -- cutting -------------------------------------------------------------------

@dataclass(frozen=True)
class CutPiece:
    """A connected component of a triangulation cut along some of its arcs.

    ``triangles[k]`` is the parent index of component triangle ``k`` (sides
    keep their numbering), ``labels[v]`` the parent marked point of vertex
    ``v`` and ``arc_map[a]`` the parent arc id of component arc ``a``.
    """
    triangulation: Triangulation
    triangles: tuple[int, ...]
    labels: tuple[int, ...]
    arc_map: tuple[int, ...]

    def parent_dart(self, d: int) -> int:
        return 3 * self.triangles[d // 3] + d % 3

    def child_dart(self, d: int) -> int:
        return 3 * self.triangles.index(d // 3) + d % 3


def cut_pieces(T: Triangulation, arcs) -> list[CutPiece]:
    """Cut ``T`` along the given arc ids; components in order of their first triangle."""
    from .surface import corner_orbits, default_arc_ids
    cut = set(arcs)
    glue = [(-1 if (e != -1 and T.arcs[d] in cut) else e) for d, e in enumerate(T.glue)]
    n = T.n_triangles
    comp = [-1] * n
    groups = []
    for t0 in range(n):
        if comp[t0] != -1:
            continue
        comp[t0] = len(groups)
        members = [t0]
        stack = [t0]
        while stack:
            t = stack.pop()
            for j in range(3):
                e = glue[3 * t + j]
                if e != -1 and comp[e // 3] == -1:
                    comp[e // 3] = comp[t0]
                    members.append(e // 3)
                    stack.append(e // 3)
        groups.append(sorted(members))
    pieces = []
    for members in groups:
        index = {t: k for k, t in enumerate(members)}
        sub = []
        for t in members:
            for j in range(3):
                e = glue[3 * t + j]
                sub.append(-1 if e == -1 else 3 * index[e // 3] + e % 3)
        sub = tuple(sub)
        orbits = corner_orbits(sub)
        parent_label = {}
        for c, rep in enumerate(orbits):
            parent_label.setdefault(rep, (T.verts[3 * members[c // 3] + c % 3], c))
        order = sorted(parent_label, key=lambda r: parent_label[r])
        new_id = {r: k for k, r in enumerate(order)}
        verts = tuple(new_id[r] for r in orbits)
        sig = derive_signature(sub, T.sig.labeled)
        arcs_sub = default_arc_ids(sub)
        arc_map = [None] * sig.kappa
        for c, a in enumerate(arcs_sub):
            if a != -1:
                arc_map[a] = T.arcs[3 * members[c // 3] + c % 3]
        piece = Triangulation(sub, verts, arcs_sub, sig)
        pieces.append(CutPiece(piece, tuple(members), tuple(parent_label[r][0] for r in order),
                               tuple(arc_map)))
    return pieces


def cut_along(T: Triangulation, A) -> list[Triangulation]:
    """Components of T cut along the components of A, which must be arcs of T."""
    words = as_words(A)
    _require_base(T, words)
    arcs = []
    for w in words:
        if w.exits or w.edge_arc() == -1:
            raise NotInStratum("multiarc component is not an arc of the triangulation")
        arcs.append(w.edge_arc())
    return [p.triangulation for p in cut_pieces(T, arcs)]


def crossing_histogram(words) -> Counter:
    c = Counter()
    for w in as_words(words):
        c.update(w.crossing_arcs)
    return c
