"""Explicit arcs and flip paths behind the upper bounds on diameters.

Three surfaces matter here.  A closed surface of genus g with n punctures
is split by a loop around a spanning tree into a genus piece and a
punctured disk.  A genus piece (genus g, one boundary curve with one
marked point) and a punctured disk (one boundary curve with one marked
point, m labeled punctures) are each flipped to a fixed canonical
triangulation by a recursion.  The recursion introduces two arcs that cut
off a triangle and two smaller pieces, solves the pieces, and for the disk
then merges the two solved halves one puncture at a time.

Every construction returns a certificate comparing the measured quantity
to its closed-form budget.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .arcs import ArcWord, cut_pieces
from .census import (build_quotient, canonical_code, isomorphism,
                     _eccentricities)
from .errors import HypothesisUnmet, InvariantViolation, SearchBudgetExceeded, ShapeMismatch
from .paths import FlipPath, path_to_stratum
from .surface import (SurfaceSig, Triangulation, boundary_circuits, boundary_successor,
                      corner_orbits, derive_signature, from_named_triangles, nxt,
                      standard_triangulation)


@dataclass
class ConstructionCertificate:
    """A constructed object with its measured size against the claimed bound."""
    obj: object
    claimed: int
    measured: int
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.measured <= self.claimed

    def as_dict(self) -> dict:
        return {"claimed": self.claimed, "measured": self.measured, "ok": self.ok,
                **{k: v for k, v in self.details.items() if isinstance(v, (int, float, str, bool, list))}}


# -- edge paths and their pushoffs ---------------------------------------------

def pushoff(T: Triangulation, darts) -> ArcWord:
    """The arc running just to the left of an edge path, between its end vertices.

    At every inner vertex the arc turns around the vertex from the incoming
    side to the outgoing side, crossing the arcs in between.
    """
    darts = list(darts)
    exits = []
    for d, e in zip(darts, darts[1:]):
        x = nxt(d)
        while x != e:
            if T.glue[x] == -1:
                raise InvariantViolation("pushoff ran into the boundary")
            exits.append(x)
            x = nxt(T.glue[x])
    return ArcWord.make(T, darts[0], exits, nxt(darts[-1]))


def _fan(T: Triangulation, d_in: int, d_out: int) -> list[int]:
    """Darts crossed turning from the end of ``d_in`` to ``d_out``."""
    out = []
    x = nxt(d_in)
    while x != d_out:
        out.append(x)
        x = nxt(T.glue[x])
    return out


def _tree_arcs(T: Triangulation, p: int) -> set[int]:
    """Breadth-first spanning tree of the vertex graph, lowest arc ids first."""
    incident = {}
    for a, (d, e) in enumerate(T.arc_darts):
        u, v = T.verts[d], T.verts[e]
        if u != v:
            incident.setdefault(u, []).append((a, v))
            incident.setdefault(v, []).append((a, u))
    seen = {p}
    queue = [p]
    tree = set()
    for v in queue:
        for a, w in sorted(incident.get(v, ())):
            if w not in seen:
                seen.add(w)
                tree.add(a)
                queue.append(w)
    return tree


def _euler_tour(T: Triangulation, tree: set[int], first: int) -> list[int]:
    tour = [first]
    while True:
        x = nxt(tour[-1])
        while T.arcs[x] not in tree:
            x = nxt(T.glue[x])
        if x == first:
            return tour
        tour.append(x)


def spanning_tree_loop(T: Triangulation, p: int = 0) -> tuple[ArcWord, ConstructionCertificate]:
    """Loop at marked point p around a spanning tree, separating all other punctures.

    Cutting along it leaves a disk holding the other n - 1 punctures and a
    genus g piece, both bounded by the loop.
    """
    sig = T.sig
    n = sig.s
    if sig.b != 0 or sig.g < 1:
        raise HypothesisUnmet("needs a closed surface of positive genus")
    if n < 2:
        raise HypothesisUnmet("needs at least two punctures; with one the loop bounds a disk")
    tree = _tree_arcs(T, p)
    if len(tree) != n - 1:
        raise InvariantViolation("vertex graph is not connected")
    starts = [d for d in range(len(T.glue)) if T.verts[d] == p and T.arcs[d] in tree]
    best = None
    for d1 in starts:
        tour = _euler_tour(T, tree, d1)
        gap = len(_fan(T, tour[-1], d1))
        if best is None or gap < best[0]:
            best = (gap, tour)
    gap, tour = best
    gamma = sum(len(_fan(T, d, e)) for d, e in zip(tour, tour[1:] + tour[:1]))
    a = pushoff(T, tour)
    claimed = 2 * (T.kappa - n + 1)
    cert = ConstructionCertificate(a, claimed, len(a.exits),
                                   {"gamma_crossings": gamma, "gap_at_base": gap, "tree_arcs": sorted(tree)})
    return a, cert


def separation_signatures(T: Triangulation, a: ArcWord) -> list[tuple[int, int, int, int]]:
    """Signatures of the pieces left after flipping a into T and cutting along it."""
    path = path_to_stratum(T, [a])
    (edge,) = path.carried
    pieces = cut_pieces(edge.base, [edge.edge_arc()])
    return sorted((P.triangulation.sig.g, P.triangulation.sig.b, P.triangulation.sig.s,
                   P.triangulation.sig.p) for P in pieces)


# -- arcs with prescribed cutting behaviour ------------------------------------

def _circuit_of_vertex(T: Triangulation) -> dict:
    out = {}
    for k, circuit in enumerate(boundary_circuits(T.glue)):
        for d in circuit:
            out[T.verts[d]] = k
    return out


def find_nonseparating_arc(T: Triangulation) -> int:
    """Lowest arc whose cut leaves a connected surface of genus one less."""
    sig = T.sig
    if sig.g < 1 or sig.b != 1 or sig.s != 0:
        raise HypothesisUnmet("needs positive genus, one boundary curve, no punctures")
    for a in range(T.kappa):
        pieces = cut_pieces(T, [a])
        if len(pieces) == 1 and pieces[0].triangulation.sig.g == sig.g - 1:
            return a
    raise InvariantViolation("every arc separates")


def find_cross_boundary_arc(T: Triangulation) -> int:
    """Lowest arc joining the two boundary curves."""
    sig = T.sig
    if sig.b != 2 or sig.s != 0:
        raise HypothesisUnmet("needs two boundary curves and no punctures")
    where = _circuit_of_vertex(T)
    for a, (d, e) in enumerate(T.arc_darts):
        if where[T.verts[d]] != where[T.verts[e]]:
            return a
    raise InvariantViolation("no arc joins the two boundary curves")


def find_arc_to_boundary(T: Triangulation) -> int:
    """Lowest arc from an interior puncture to a boundary marked point."""
    sig = T.sig
    if sig.g != 0 or sig.b != 1 or sig.s < 1:
        raise HypothesisUnmet("needs a punctured disk")
    bnd = T.boundary_vertices
    for a, (d, e) in enumerate(T.arc_darts):
        if (T.verts[d] in bnd) != (T.verts[e] in bnd):
            return a
    raise InvariantViolation("no arc reaches the boundary")


def _boundary_dart(T: Triangulation) -> int:
    (circuit,) = boundary_circuits(T.glue)
    return circuit[0]


def _split_arcs(T: Triangulation, cuts) -> tuple[ArcWord, ArcWord, int]:
    """Loops parallel to the boundary of T cut along ``cuts`` (parent arc ids).

    Returns the loop following the whole boundary, the arc following it
    without the original boundary side, and the genus of the uncut piece.
    """
    a0 = _boundary_dart(T)
    pieces = cut_pieces(T, cuts)
    (piece,) = [P for P in pieces if any(P.parent_dart(d) == a0 for d in range(len(P.triangulation.glue))
                                         if P.triangulation.glue[d] == -1)]
    sub = piece.triangulation
    start = piece.child_dart(a0)
    cycle = [start]
    x = boundary_successor(sub.glue, start)
    while x != start:
        cycle.append(x)
        x = boundary_successor(sub.glue, x)
    b = pushoff(sub, cycle)
    b2 = pushoff(sub, cycle[1:])

    def lift(w):
        return ArcWord.make(T, piece.parent_dart(w.start), [piece.parent_dart(x) for x in w.exits],
                            piece.parent_dart(w.end))

    return lift(b), lift(b2), sub


def genus_split_arcs(T: Triangulation):
    """The loop b and arc b' cutting a genus piece into a triangle and two halves.

    b encloses genus g - floor(g/2), b' encloses genus floor(g/2), and
    together with the boundary side they bound a triangle.
    """
    sig = T.sig
    g = sig.g
    if g < 2 or sig.b != 1 or sig.p != 1 or sig.s != 0:
        raise HypothesisUnmet("needs genus at least 2, one boundary curve with one marked point")
    cuts = []
    current = T
    mapping = list(range(T.kappa))
    for _ in range(g // 2):
        for finder in (find_nonseparating_arc, find_cross_boundary_arc):
            a = finder(current)
            cuts.append(mapping[a])
            (piece,) = cut_pieces(current, [a])
            mapping = [mapping[piece_arc] for piece_arc in piece.arc_map]
            current = piece.triangulation
    b, b2, sub = _split_arcs(T, cuts)
    measured = len(b.exits) + len(b2.exits)
    cert = ConstructionCertificate((b, b2), 20 * g - 4, measured,
                                   {"cuts": cuts, "inner_genus": sub.sig.g,
                                    "i_b": len(b.exits), "i_b_prime": len(b2.exits)})
    return b, b2, cert


def puncture_split_arcs(T: Triangulation):
    """The loop b and arc b' cutting a punctured disk into a triangle and two halves.

    b encloses ceil(m/2) punctures and b' encloses floor(m/2).
    """
    sig = T.sig
    m = sig.s
    if sig.g != 0 or sig.b != 1 or sig.p != 1 or m < 2:
        raise HypothesisUnmet("needs a disk with one boundary point and at least two punctures")
    cuts = []
    current = T
    mapping = list(range(T.kappa))
    for _ in range(m // 2):
        a = find_arc_to_boundary(current)
        cuts.append(mapping[a])
        (piece,) = cut_pieces(current, [a])
        mapping = [mapping[piece_arc] for piece_arc in piece.arc_map]
        current = piece.triangulation
    b, b2, sub = _split_arcs(T, cuts)
    measured = len(b.exits) + len(b2.exits)
    cert = ConstructionCertificate((b, b2), 10 * m - 10, measured,
                                   {"cuts": cuts, "inner_punctures": sub.sig.s,
                                    "i_b": len(b.exits), "i_b_prime": len(b2.exits)})
    return b, b2, cert


# -- canonical triangulations as named triangles ------------------------------

def _seashell_triangles(base: str, loop: str, punctures, tag: str) -> list:
    """Layered triangles of a punctured disk bounded by ``loop`` at vertex ``base``."""
    tris = []
    v, a = base, loop
    for k, q in enumerate(punctures[:-1]):
        u, w, nxt_loop = f"{tag}u{k}", f"{tag}v{k}", f"{tag}a{k + 1}"
        tris.append(((v, v, q), (a, u, w)))
        tris.append(((v, q, q), (w, nxt_loop, u)))
        v, a = q, nxt_loop
    tris.append(((v, punctures[-1], v), (f"{tag}w", f"{tag}w", a)))
    return tris


def _puncture_names(labels):
    return [f"p{j}" for j in labels]


def canonical_seashell(n: int, labeled: bool = True) -> Triangulation:
    """Layered triangulation of a disk with n punctures labeled 1..n."""
    if n < 1:
        raise HypothesisUnmet("needs at least one puncture")
    names = _puncture_names(range(1, n + 1))
    tris = _seashell_triangles("p0", "a0", names, "")
    return from_named_triangles(tris, labeled, vertex_order=["p0"] + names)


@dataclass(frozen=True)
class MergedForm:
    """Layers for ``prefix`` punctures, then a triangle at the last of them
    whose two free sides enclose ``first`` and ``second`` as layered disks."""
    prefix: tuple
    first: tuple
    second: tuple

    @property
    def base(self) -> str:
        return f"p{self.prefix[-1]}" if self.prefix else "p0"

    def triangles(self) -> list:
        names = _puncture_names(self.prefix)
        tris = []
        v, a = "p0", "a0"
        for k, q in enumerate(names):
            u, w, loop = f"u{k}", f"v{k}", f"a{k + 1}"
            tris.append(((v, v, q), (a, u, w)))
            tris.append(((v, q, q), (w, loop, u)))
            v, a = q, loop
        first, second = _puncture_names(self.first), _puncture_names(self.second)
        if first and second:
            tris.append(((v, v, v), (a, "S1", "S2")))
            tris += _seashell_triangles(v, "S1", first, "L")
            tris += _seashell_triangles(v, "S2", second, "R")
        elif first or second:
            tris += _seashell_triangles(v, a, first or second, "L" if first else "R")
        return tris

    def triangulation(self, labeled: bool = True) -> Triangulation:
        order = ["p0"] + _puncture_names(sorted(self.prefix + self.first + self.second))
        return from_named_triangles(self.triangles(), labeled, vertex_order=order)

    def region(self) -> set:
        """Side names that the next merge may flip."""
        names = {"S1", "S2"}
        for tag, side in (("L", self.first), ("R", self.second)):
            if len(side) >= 2:
                names |= {f"{tag}u0", f"{tag}v0"}
            elif side:
                names.add(f"{tag}w")
        return names

    def successors(self) -> list:
        """The two possible forms after moving the next puncture into the prefix."""
        nxt_label = min(self.first + self.second)
        if nxt_label in self.first:
            rest, other = self.first[1:], self.second
        else:
            rest, other = self.second[1:], self.first
        prefix = self.prefix + (nxt_label,)
        if not rest or not other:
            return [MergedForm(prefix, rest + other, ())]
        return [MergedForm(prefix, rest, other), MergedForm(prefix, other, rest)]

    @property
    def finished(self) -> bool:
        return not (self.first and self.second)


def _named_arc_ids(triangles, T: Triangulation, target: Triangulation, names) -> set[int]:
    """Arc ids in ``target`` of the named sides of ``T`` (built from ``triangles``)."""
    iso = isomorphism(target, T)
    if iso is None:
        raise ShapeMismatch("triangulation does not have the expected shape")
    out = set()
    for t, (_, sides) in enumerate(triangles):
        for j, name in enumerate(sides):
            if name in names:
                out.add(target.arcs[iso[3 * t + j]])
    return out


def _bfs_to_codes(T: Triangulation, targets: dict, allowed=None, max_depth: int | None = None,
                  budget: int = 10 ** 6):
    """Shortest flip sequence from T to any triangulation whose code is in ``targets``."""
    labeled = T.sig.labeled
    start = canonical_code(T, labeled)
    if start in targets:
        return (), targets[start]
    parent = {start: None}
    layer = [(T, start)]
    depth = 0
    while layer:
        depth += 1
        if max_depth is not None and depth > max_depth:
            break
        nxt_layer = []
        for X, cx in layer:
            for a in X.flippable_arcs():
                if allowed is not None and a not in allowed:
                    continue
                Y = X.flip(a)
                cy = canonical_code(Y, labeled)
                if cy in parent:
                    continue
                parent[cy] = (cx, a)
                if cy in targets:
                    steps = []
                    c = cy
                    while parent[c] is not None:
                        c, arc = parent[c]
                        steps.append(arc)
                    return tuple(reversed(steps)), targets[cy]
                if len(parent) > budget:
                    raise SearchBudgetExceeded("merge search exceeded its budget")
                nxt_layer.append((Y, cy))
        layer = nxt_layer
    raise ShapeMismatch("target shape not reachable")


def merge_step(T: Triangulation, form: MergedForm, max_flips: int = 12):
    """Flip the next puncture into the prefix layers; returns (path, new form)."""
    if form.finished:
        return FlipPath(T, ()), form
    built = form.triangulation(T.sig.labeled)
    if canonical_code(built) != canonical_code(T):
        raise ShapeMismatch("triangulation is not in the given merged form")
    region = _named_arc_ids(form.triangles(), built, T, form.region())
    targets = {canonical_code(f.triangulation(T.sig.labeled)): f for f in form.successors()}
    steps, new_form = _bfs_to_codes(T, targets, allowed=region, max_depth=max_flips)
    return FlipPath(T, steps), new_form


def _genus_triangles(g: int, loop: str, tag: str) -> list:
    if g == 1:
        S = standard_triangulation(1, 1, 0, 1)
        tris = []
        for t in range(S.n_triangles):
            sides = tuple(loop if S.glue[3 * t + j] == -1 else f"{tag}e{S.arcs[3 * t + j]}"
                          for j in range(3))
            tris.append((("P", "P", "P"), sides))
        return tris
    half = g // 2
    x, y = f"{tag}X", f"{tag}Y"
    tris = [(("P", "P", "P"), (loop, y, x))]
    tris += _genus_triangles(g - half, x, tag + "x")
    tris += _genus_triangles(half, y, tag + "y")
    return tris


def canonical_genus(g: int, labeled: bool = True) -> Triangulation:
    """Canonical triangulation of the genus g piece: a triangle whose two free
    sides enclose canonical pieces of genus g - floor(g/2) and floor(g/2)."""
    if g < 1:
        raise HypothesisUnmet("needs genus at least 1")
    return from_named_triangles(_genus_triangles(g, "a0", ""), labeled)


# -- canonical paths ------------------------------------------------------------

@lru_cache(maxsize=None)
def _base_eccentricity(kind: str, size: int) -> int:
    """Largest distance from the canonical vertex in the modular flip graph."""
    if kind == "genus":
        sig, target = SurfaceSig(size, 1, 0, 1), canonical_genus(size)
    else:
        sig, target = SurfaceSig(0, 1, size, 1), canonical_seashell(size)
    report = build_quotient(sig, "labeled")
    idx = report.codes.index(canonical_code(target))
    return int(_eccentricities(report.adjacency, [idx])[0])


def claimed_genus_budget(g: int) -> int:
    """Recursive flip budget: split cost 20g - 4 plus both halves."""
    if g <= 1:
        return _base_eccentricity("genus", 1)
    return 20 * g - 4 + claimed_genus_budget(g - g // 2) + claimed_genus_budget(g // 2)


def claimed_disk_budget(m: int) -> int:
    """Recursive flip budget: split cost 10m - 10, both halves, 6 per merge."""
    if m <= 2:
        return _base_eccentricity("disk", m) if m >= 1 else 0
    return 10 * m - 10 + claimed_disk_budget(m - m // 2) + claimed_disk_budget(m // 2) + 6 * (m - 1)


def genus_closed_form(g: int, A: float = 1000.0) -> float:
    """A g log(g + 1)."""
    return A * g * math.log(g + 1)


def disk_closed_form(m: int, A: float = 400.0) -> float:
    """Budget 10m - 10 + A(floor(m/2)+1) log(floor(m/2)+2) + 6(m-1)."""
    h = m // 2
    return 10 * m - 10 + A * (h + 1) * math.log(h + 2) + 6 * (m - 1)


def _split_into_pieces(T: Triangulation, b: ArcWord, b2: ArcWord):
    path = path_to_stratum(T, [b, b2])
    eb, eb2 = path.carried
    arc_b, arc_b2 = eb.edge_arc(), eb2.edge_arc()
    U = path.end
    found = {}
    for piece in cut_pieces(U, [arc_b, arc_b2]):
        sub = piece.triangulation
        sides = [U.arcs[piece.parent_dart(d)] for d in range(len(sub.glue)) if sub.glue[d] == -1]
        if sides == [arc_b]:
            found["b"] = piece
        elif sides == [arc_b2]:
            found["b2"] = piece
    if set(found) != {"b", "b2"}:
        raise InvariantViolation("split arcs do not cut off two pieces")
    return path, U, found


def _lift(piece, steps) -> list[int]:
    return [piece.arc_map[a] for a in steps]


@dataclass
class CanonicalPathReport:
    path: FlipPath
    claimed: int
    measured: int
    split_lengths: list = field(default_factory=list)
    merge_lengths: list = field(default_factory=list)
    split_certificates: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.measured <= self.claimed


def _canonical_genus_path(T: Triangulation, report: CanonicalPathReport) -> list[int]:
    g = T.sig.g
    if g == 1:
        steps, _ = _bfs_to_codes(T, {canonical_code(canonical_genus(1)): None})
        return list(steps)
    b, b2, cert = genus_split_arcs(T)
    report.split_certificates.append(cert)
    path, U, found = _split_into_pieces(T, b, b2)
    report.split_lengths.append(len(path))
    steps = list(path.steps)
    for key in ("b", "b2"):
        piece = found[key]
        steps += _lift(piece, _canonical_genus_path(piece.triangulation, report))
    return steps


def _canonical_disk_path(T: Triangulation, report: CanonicalPathReport) -> list[int]:
    m = T.sig.s
    if m <= 2:
        steps, _ = _bfs_to_codes(T, {canonical_code(canonical_seashell(m)): None})
        return list(steps)
    b, b2, cert = puncture_split_arcs(T)
    report.split_certificates.append(cert)
    path, U, found = _split_into_pieces(T, b, b2)
    report.split_lengths.append(len(path))
    steps = list(path.steps)
    halves = {}
    for key in ("b", "b2"):
        piece = found[key]
        steps += _lift(piece, _canonical_disk_path(piece.triangulation, report))
        halves[key] = tuple(sorted(v for v in piece.labels if v != 0))
    X = U
    for a in steps[len(path.steps):]:
        X = X.flip(a)
    forms = [MergedForm((), halves["b2"], halves["b"]), MergedForm((), halves["b"], halves["b2"])]
    code = canonical_code(X)
    form = next((f for f in forms if canonical_code(f.triangulation()) == code), None)
    if form is None:
        raise InvariantViolation("solved halves do not assemble into a merged form")
    while not form.finished:
        merge, form = merge_step(X, form)
        report.merge_lengths.append(len(merge))
        steps += merge.steps
        X = merge.end
    return steps


def canonical_path(T: Triangulation) -> CanonicalPathReport:
    """Flip path from T to the canonical triangulation of its genus piece or punctured disk."""
    sig = T.sig
    report = CanonicalPathReport(FlipPath(T, ()), 0, 0)
    if sig.b == 1 and sig.p == 1 and sig.s == 0 and sig.g >= 1:
        target = canonical_genus(sig.g, sig.labeled)
        solve, report.claimed = _canonical_genus_path, claimed_genus_budget(sig.g)
    elif sig.g == 0 and sig.b == 1 and sig.p == 1 and sig.s >= 1 and sig.labeled:
        target = canonical_seashell(sig.s)
        solve, report.claimed = _canonical_disk_path, claimed_disk_budget(sig.s)
    else:
        raise HypothesisUnmet("needs a genus piece or a labeled punctured disk with one boundary point")
    steps = [] if canonical_code(T) == canonical_code(target) else solve(T, report)
    report.path = FlipPath(T, tuple(steps))
    report.measured = len(steps)
    if canonical_code(report.path.end) != canonical_code(target):
        raise InvariantViolation("canonical path did not reach the canonical triangulation")
    return report
