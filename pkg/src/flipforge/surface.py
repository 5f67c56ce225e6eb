"""Triangulations of marked surfaces stored as triangle-side maps.

A triangulation with ``F`` triangles has ``3F`` darts.  Dart ``3*t + j`` is
side ``j`` of triangle ``t``; it runs counterclockwise from corner ``j`` to
corner ``j + 1`` so the triangle lies on its left.  Corner ``j`` of triangle
``t`` shares the index ``3*t + j`` with the dart leaving it.

``glue[d]`` is the dart glued to ``d`` (orientation reversing) or ``-1`` when
``d`` lies on the boundary.  If ``d`` is glued to ``e`` then the start of
``d`` is the end of ``e`` and vice versa.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import (BoundaryWithoutMarkedPoint, InvalidGluing, NotFlippable,
                     NotTriangulable, SignatureMismatch)


def nxt(d: int) -> int:
    """Next dart counterclockwise in the same triangle."""
    return d - d % 3 + (d + 1) % 3


def prv(d: int) -> int:
    return d - d % 3 + (d + 2) % 3


@dataclass(frozen=True)
class SurfaceSig:
    """Genus, boundary curves, interior punctures, boundary marked points."""
    g: int
    b: int
    s: int
    p: int
    labeled: bool = True

    def __post_init__(self):
        if min(self.g, self.b, self.s, self.p) < 0:
            raise NotTriangulable(f"negative entry in {self}")

    @property
    def kappa(self) -> int:
        """Number of interior arcs in any triangulation."""
        return 6 * self.g + 3 * self.b + 3 * self.s + self.p - 6

    @property
    def kappa_tilde(self) -> int:
        """Number of triangles in any triangulation."""
        return 4 * self.g + 2 * self.b + 2 * self.s + self.p - 4

    @property
    def n_marked(self) -> int:
        return self.s + self.p

    def is_triangulable(self) -> bool:
        if self.b > 0 and self.p < self.b:
            return False
        if self.g == 0 and self.b == 0 and self.s <= 2:
            return False
        if self.g == 0 and self.b == 1 and self.s == 0 and self.p < 3:
            return False
        if self.g == 0 and self.b == 1 and self.s == 1 and self.p < 1:
            return False
        return self.kappa_tilde >= 1

    def with_labeled(self, labeled: bool) -> SurfaceSig:
        return SurfaceSig(self.g, self.b, self.s, self.p, labeled)

    def __str__(self):
        mode = "labeled" if self.labeled else "unlabeled"
        return f"g={self.g},b={self.b},s={self.s},p={self.p} ({mode})"

    @classmethod
    def parse(cls, text: str, labeled: bool = True) -> SurfaceSig:
        """Parse ``"g=0,b=1,s=0,p=6"``."""
        fields = {}
        for part in text.split(","):
            key, _, value = part.partition("=")
            fields[key.strip()] = int(value)
        try:
            return cls(fields["g"], fields["b"], fields["s"], fields["p"], labeled)
        except KeyError as exc:
            raise ValueError(f"signature {text!r} misses {exc}") from None


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x != y:
            self.parent[max(x, y)] = min(x, y)


def corner_orbits(glue) -> list[int]:
    """Representative (smallest corner) of the vertex of every corner."""
    uf = _UnionFind(len(glue))
    for d, e in enumerate(glue):
        if e > d:
            uf.union(d, nxt(e))
            uf.union(nxt(d), e)
    return [uf.find(c) for c in range(len(glue))]


def boundary_successor(glue, d: int) -> int:
    """The boundary dart that follows boundary dart ``d`` along its circuit."""
    x = nxt(d)
    while glue[x] != -1:
        x = nxt(glue[x])
    return x


def boundary_circuits(glue) -> list[list[int]]:
    seen = set()
    circuits = []
    for d in range(len(glue)):
        if glue[d] != -1 or d in seen:
            continue
        circuit = []
        x = d
        while x not in seen:
            seen.add(x)
            circuit.append(x)
            x = boundary_successor(glue, x)
        circuits.append(circuit)
    return circuits


def derive_signature(glue, labeled: bool = True) -> SurfaceSig:
    """Topological type of the surface obtained from the gluing."""
    n_darts = len(glue)
    orbits = corner_orbits(glue)
    vertices = set(orbits)
    boundary_vertices = {orbits[d] for d in range(n_darts) if glue[d] == -1}
    b = len(boundary_circuits(glue))
    n_boundary_sides = sum(1 for e in glue if e == -1)
    n_arcs = (n_darts - n_boundary_sides) // 2
    euler = len(vertices) - n_arcs - n_boundary_sides + n_darts // 3
    twice_genus = 2 - b - euler
    if twice_genus < 0 or twice_genus % 2:
        raise InvalidGluing(f"gluing yields Euler characteristic {euler} with {b} boundary curves")
    p = len(boundary_vertices)
    s = len(vertices) - p
    return SurfaceSig(twice_genus // 2, b, s, p, labeled)


def _connected(glue) -> bool:
    n = len(glue) // 3
    if n == 0:
        return False
    seen = {0}
    stack = [0]
    while stack:
        t = stack.pop()
        for j in range(3):
            e = glue[3 * t + j]
            if e != -1 and e // 3 not in seen:
                seen.add(e // 3)
                stack.append(e // 3)
    return len(seen) == n


def default_arc_ids(glue) -> tuple[int, ...]:
    """Arc ids sorted by (smaller triangle, smaller side) of each glued pair."""
    arcs = [-1] * len(glue)
    k = 0
    for d, e in enumerate(glue):
        if e > d:
            arcs[d] = arcs[e] = k
            k += 1
    return tuple(arcs)


@dataclass(frozen=True)
class Triangulation:
    """An ideal triangulation of a marked surface.

    ``glue``, ``verts`` and ``arcs`` are indexed by dart.  ``verts[c]`` is the
    marked point at corner ``c`` and ``arcs[d]`` the id of the interior arc
    carried by dart ``d`` (``-1`` on the boundary).
    """
    glue: tuple[int, ...]
    verts: tuple[int, ...]
    arcs: tuple[int, ...]
    sig: SurfaceSig

    @property
    def n_triangles(self) -> int:
        return len(self.glue) // 3

    @property
    def kappa(self) -> int:
        return self.sig.kappa

    @property
    def kappa_tilde(self) -> int:
        return self.sig.kappa_tilde

    @cached_property
    def arc_darts(self) -> tuple[tuple[int, int], ...]:
        """For every arc id the pair of its darts, smaller dart first."""
        out = [None] * self.sig.kappa
        for d, e in enumerate(self.glue):
            if e > d:
                out[self.arcs[d]] = (d, e)
        return tuple(out)

    @cached_property
    def boundary_vertices(self) -> frozenset[int]:
        return frozenset(self.verts[d] for d, e in enumerate(self.glue) if e == -1)

    def arc_endpoints(self, arc: int) -> tuple[int, int]:
        d, _ = self.arc_darts[arc]
        return self.verts[d], self.verts[nxt(d)]

    def is_flippable(self, arc: int) -> bool:
        d, e = self.arc_darts[arc]
        return d // 3 != e // 3

    def flippable_arcs(self) -> list[int]:
        return [a for a in range(self.kappa) if self.is_flippable(a)]

    def flip(self, arc: int) -> Triangulation:
        """Replace ``arc`` by the other diagonal of its quadrilateral.

        The two triangles keep their indices and the new diagonal keeps the
        id ``arc``.  With ``A, B`` the ends of the old diagonal and ``C, D``
        the opposite corners, triangle ``t1`` becomes ``(C, A, D)`` and
        ``t2`` becomes ``(D, B, C)``; the new diagonal is side 2 of both.
        """
        if not 0 <= arc < self.kappa:
            raise NotFlippable(f"no arc with id {arc}")
        d1, d2 = self.arc_darts[arc]
        t1, t2 = d1 // 3, d2 // 3
        if t1 == t2:
            raise NotFlippable(f"arc {arc} is the enclosed arc of a self-folded triangle")
        glue, verts, arcs = list(self.glue), list(self.verts), list(self.arcs)
        old_glue, old_verts, old_arcs = self.glue, self.verts, self.arcs
        a, b, c = old_verts[d1], old_verts[nxt(d1)], old_verts[prv(d1)]
        dv = old_verts[prv(d2)]
        moves = {prv(d1): 3 * t1, nxt(d2): 3 * t1 + 1, prv(d2): 3 * t2, nxt(d1): 3 * t2 + 1}
        for old, new in moves.items():
            arcs[new] = old_arcs[old]
        for old, new in moves.items():
            partner = old_glue[old]
            if partner == -1:
                glue[new] = -1
            elif partner in moves:
                glue[new] = moves[partner]
            else:
                glue[new] = partner
                glue[partner] = new
        glue[3 * t1 + 2], glue[3 * t2 + 2] = 3 * t2 + 2, 3 * t1 + 2
        arcs[3 * t1 + 2] = arcs[3 * t2 + 2] = arc
        verts[3 * t1:3 * t1 + 3] = [c, a, dv]
        verts[3 * t2:3 * t2 + 3] = [dv, b, c]
        return Triangulation(tuple(glue), tuple(verts), tuple(arcs), self.sig)

    def enumerate_flips(self) -> list[tuple[int, Triangulation]]:
        return [(a, self.flip(a)) for a in self.flippable_arcs()]

    def with_arc_ids(self, arcs) -> Triangulation:
        return Triangulation(self.glue, self.verts, tuple(arcs), self.sig)

    def renumbered(self) -> Triangulation:
        """Same map with the default arc id assignment."""
        return self.with_arc_ids(default_arc_ids(self.glue))

    def validate(self) -> None:
        """Re-run every structural check (used by tests after flips)."""
        _check(self.glue, self.verts, self.sig)
        seen = {}
        for d, e in enumerate(self.glue):
            if e == -1:
                if self.arcs[d] != -1:
                    raise InvalidGluing(f"boundary dart {d} carries an arc id")
                continue
            if self.arcs[d] != self.arcs[e]:
                raise InvalidGluing(f"darts {d} and {e} carry different arc ids")
            seen.setdefault(self.arcs[d], set()).add(d)
        if sorted(seen) != list(range(self.kappa)):
            raise InvalidGluing("arc ids are not 0..kappa-1")


def _check(glue, verts, sig: SurfaceSig) -> None:
    n = len(glue)
    if n == 0 or n % 3:
        raise InvalidGluing("need a positive number of triangles")
    for d, e in enumerate(glue):
        if e == -1:
            continue
        if not 0 <= e < n:
            raise InvalidGluing(f"side {divmod(d, 3)} glued to missing side {e}")
        if e == d:
            raise InvalidGluing(f"side {divmod(d, 3)} glued to itself")
        if glue[e] != d:
            raise InvalidGluing(f"gluing of sides {divmod(d, 3)} and {divmod(e, 3)} is not an involution")
    if not _connected(glue):
        raise InvalidGluing("gluing is not connected")
    derived = derive_signature(glue, sig.labeled)
    if (derived.g, derived.b, derived.s, derived.p) != (sig.g, sig.b, sig.s, sig.p):
        raise SignatureMismatch(f"gluing describes {derived}, declared {sig}")
    if not sig.is_triangulable():
        raise NotTriangulable(str(sig))
    orbits = corner_orbits(glue)
    label_of = {}
    for c, rep in enumerate(orbits):
        if label_of.setdefault(rep, verts[c]) != verts[c]:
            raise InvalidGluing(f"corner {divmod(c, 3)} disagrees with its vertex link")
    labels = sorted(label_of.values())
    if labels != list(range(sig.n_marked)):
        raise InvalidGluing(f"marked point ids must be 0..{sig.n_marked - 1}, got {labels}")
    for circuit in boundary_circuits(glue):
        if not circuit:
            raise BoundaryWithoutMarkedPoint("empty boundary circuit")


def build_triangulation(n_triangles: int, gluings, corner_vertices, sig: SurfaceSig,
                        arc_ids=None) -> Triangulation:
    """Validate raw gluing data and return a Triangulation.

    ``gluings`` is a list of ``((t, s), (t', s'))`` pairs, ``corner_vertices``
    a list of three marked point ids per triangle.
    """
    glue = [-1] * (3 * n_triangles)
    for pair in gluings:
        (t, s), (u, r) = pair
        d, e = 3 * t + s, 3 * u + r
        for x in (d, e):
            if not 0 <= x < len(glue) or not 0 <= x % 3 < 3:
                raise InvalidGluing(f"side {x // 3, x % 3} out of range in pair {pair}")
        if glue[d] != -1 or glue[e] != -1 or d == e:
            raise InvalidGluing(f"side used twice in pair {pair}")
        glue[d], glue[e] = e, d
    if len(corner_vertices) != n_triangles:
        raise InvalidGluing("corner_vertices must list every triangle")
    verts = tuple(int(v) for row in corner_vertices for v in row)
    glue = tuple(glue)
    _check(glue, verts, sig)
    arcs = default_arc_ids(glue) if arc_ids is None else tuple(arc_ids)
    T = Triangulation(glue, verts, arcs, sig)
    if arc_ids is not None:
        T.validate()
    return T


def from_named_triangles(triangles, labeled: bool = True, sig: SurfaceSig | None = None,
                         vertex_order=None) -> Triangulation:
    """Build from ``[(corner names, side names), ...]``.

    Sides sharing a name are glued; a name used once is a boundary side.
    Corner names only fix which vertex gets which marked point id: ids are
    handed out along ``vertex_order`` (a list of corner names), then boundary
    vertices before punctures in order of first appearance.
    """
    by_name = {}
    for t, (_, names) in enumerate(triangles):
        for j, name in enumerate(names):
            by_name.setdefault(name, []).append(3 * t + j)
    glue = [-1] * (3 * len(triangles))
    for name, darts in by_name.items():
        if len(darts) > 2:
            raise InvalidGluing(f"side name {name!r} used {len(darts)} times")
        if len(darts) == 2:
            d, e = darts
            glue[d], glue[e] = e, d
    glue = tuple(glue)
    orbits = corner_orbits(glue)
    corner_names = [v for corners, _ in triangles for v in corners]
    on_boundary = {orbits[d] for d, e in enumerate(glue) if e == -1}
    first = {}
    for c, rep in enumerate(orbits):
        first.setdefault(rep, c)
    priority = {name: i for i, name in enumerate(vertex_order or [])}

    def key(rep):
        name = corner_names[first[rep]]
        return (priority.get(name, len(priority)), rep not in on_boundary, first[rep])

    label = {rep: i for i, rep in enumerate(sorted(first, key=key))}
    verts = tuple(label[r] for r in orbits)
    declared = sig or derive_signature(glue, labeled)
    _check(glue, verts, declared)
    return Triangulation(glue, verts, default_arc_ids(glue), declared)


def polygon_with_pairing(sides, labeled: bool = True, vertex_order=None) -> Triangulation:
    """Fan triangulation of a polygon whose sides are glued by name.

    ``sides`` lists side names counterclockwise; equal names are glued with
    reversed orientation, unique names become boundary.  Corner ``i`` of the
    polygon sits between side ``i - 1`` and side ``i``.
    """
    n = len(sides)
    if n < 3:
        raise NotTriangulable(f"polygon with {n} sides")
    triangles = []
    for i in range(1, n - 1):
        left = sides[0] if i == 1 else ("#diag", i)
        right = sides[n - 1] if i == n - 2 else ("#diag", i + 1)
        triangles.append(((0, i, i + 1), (left, sides[i], right)))
    return from_named_triangles(triangles, labeled, vertex_order=vertex_order)


def standard_triangulation(g: int, b: int, s: int, p=None, labeled: bool = True) -> Triangulation:
    """A fixed triangulation of the surface of genus g with b boundary curves.

    ``p`` is either the total number of boundary marked points (one per
    boundary curve except the first, which takes the rest) or a list with
    the count on each boundary curve.  Boundary points get ids first,
    counterclockwise along each boundary curve, then punctures.
    """
    if p is None:
        p = b
    counts = list(p) if isinstance(p, (list, tuple)) else ([p - (b - 1)] + [1] * (b - 1) if b else [])
    if len(counts) != b or any(k < 1 for k in counts) or (b == 0 and not isinstance(p, (list, tuple)) and p):
        raise NotTriangulable(f"cannot place {p} boundary points on {b} boundary curves")
    sig = SurfaceSig(g, b, s, sum(counts), labeled)
    if not sig.is_triangulable():
        raise NotTriangulable(str(sig))
    sides = []
    for i in range(g):
        sides += [("a", i), ("b", i), ("a", i), ("b", i)]
    punctures = s
    if b:
        sides += [("beta", 0, j) for j in range(counts[0])]
    elif g:
        punctures -= 1
    else:
        punctures -= 1
    for i in range(1, b):
        sides += [("c", i)] + [("beta", i, j) for j in range(counts[i])] + [("c", i)]
    for i in range(punctures):
        sides += [("e", i), ("e", i)]
    return polygon_with_pairing(sides, labeled)
