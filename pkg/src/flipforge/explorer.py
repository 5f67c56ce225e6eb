"""Exact breadth-first search over the flip graph.

Vertices of the flip graph are triangulations up to isotopy, which is finer
than equality up to homeomorphism.  A ``MarkedTriangulation`` keeps the arcs
of a fixed reference triangulation as words over its own triangulation.
Relabeling the map from a corner fixed by those words gives an encoding
that two marked triangulations share exactly when they are isotopic.
Polygons have no nontrivial mapping classes, so there the labeled canonical
code is used directly, which skips carrying the words.
"""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .arcs import ArcWord, as_words, flip_and_transport, transport_reverse, transport_along
from .census import canonical_code, grammar_ball_bound
from .errors import NotFlippable, SearchBudgetExceeded
from .paths import path_to_stratum
from .surface import Triangulation

DEFAULT_BUDGET = 5_000_000


def default_budget() -> int:
    """State cap, overridable through the ``FLIPFORGE_BUDGET`` environment variable."""
    return int(os.environ.get("FLIPFORGE_BUDGET", DEFAULT_BUDGET))


def _is_polygon(T: Triangulation) -> bool:
    sig = T.sig
    return sig.g == 0 and sig.b == 1 and sig.s == 0 and sig.labeled


def _relabeled(T: Triangulation, root: int):
    """Map from darts of T to darts of the relabeling rooted at ``root``."""
    glue = T.glue
    n = len(glue) // 3
    order = [-1] * n
    rot = [0] * n
    order[root // 3] = 0
    rot[root // 3] = root % 3
    queue = [root // 3]
    i = 0
    while i < len(queue):
        t = queue[i]
        i += 1
        for k in range(3):
            e = glue[3 * t + (rot[t] + k) % 3]
            if e != -1 and order[e // 3] == -1:
                order[e // 3] = len(queue)
                rot[e // 3] = e % 3
                queue.append(e // 3)
    return [3 * order[d // 3] + (d % 3 - rot[d // 3]) % 3 for d in range(3 * n)]


@dataclass(frozen=True, eq=False)
class MarkedTriangulation:
    """A triangulation together with the reference arcs drawn on it.

    ``frame`` holds the arcs of ``reference`` as words over
    ``triangulation``; ``path`` is a flip sequence from ``reference`` to
    ``triangulation``.
    """
    triangulation: Triangulation
    frame: tuple = field(repr=False)
    path: tuple = ()
    reference: Triangulation | None = field(default=None, repr=False)

    @classmethod
    def at(cls, T: Triangulation) -> MarkedTriangulation:
        """The reference vertex itself."""
        frame = () if _is_polygon(T) else tuple(ArcWord.of_arc(T, a) for a in range(T.kappa))
        return cls(T, frame, (), T)

    def flip(self, arc: int) -> MarkedTriangulation:
        if not self.frame:
            return MarkedTriangulation(self.triangulation.flip(arc), (), self.path + (arc,), self.reference)
        U, frame = flip_and_transport(self.triangulation, arc, self.frame)
        return MarkedTriangulation(U, frame, self.path + (arc,), self.reference)

    def follow(self, steps) -> MarkedTriangulation:
        M = self
        for arc in steps:
            M = M.flip(arc)
        return M

    def neighbors(self):
        """``(arc, neighbor)`` for every flippable arc, in arc id order."""
        return [(a, self.flip(a)) for a in self.triangulation.flippable_arcs()]

    @cached_property
    def key(self) -> tuple:
        T = self.triangulation
        if not self.frame and _is_polygon(T):
            return canonical_code(T, True)
        root = self.frame[0].start if self.frame else 0
        new = _relabeled(T, root)
        n = len(T.glue)
        glue = [0] * n
        verts = [0] * n
        for d in range(n):
            e = T.glue[d]
            glue[new[d]] = -1 if e == -1 else new[e]
            verts[new[d]] = T.verts[d]
        words = tuple((new[w.start], tuple(new[x] for x in w.exits), new[w.end]) for w in self.frame)
        return (tuple(glue), tuple(verts), words)

    def __eq__(self, other):
        return isinstance(other, MarkedTriangulation) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def arcs_over_reference(self) -> tuple[ArcWord, ...]:
        """The arcs of this triangulation as words over the reference."""
        T = self.triangulation
        words = tuple(ArcWord.of_arc(T, a) for a in range(T.kappa))
        return transport_reverse(words, self.reference, self.path)

    def words_here(self, words) -> tuple[ArcWord, ...]:
        """Carry words based at the reference to this triangulation."""
        _, out = transport_along(words, self.reference, self.path)
        return out


def realize(M: MarkedTriangulation, arcs) -> MarkedTriangulation:
    """The marked vertex containing ``arcs`` (words over M), reached by convenient flips."""
    return M.follow(path_to_stratum(M.triangulation, arcs).steps)


def marked_intersection(S: MarkedTriangulation, T: MarkedTriangulation) -> int:
    """i(S, T) for two marked triangulations with the same reference."""
    if S.reference is not T.reference and S.reference != T.reference:
        raise ValueError("marked triangulations have different references")
    words = S.words_here(T.arcs_over_reference())
    return sum(len(w.exits) for w in words)


def _as_marked(X) -> MarkedTriangulation:
    if isinstance(X, MarkedTriangulation):
        return X
    if isinstance(X, Triangulation):
        if not _is_polygon(X):
            raise TypeError("plain triangulations are only comparable on labeled polygons; "
                            "use MarkedTriangulation")
        return MarkedTriangulation.at(X)
    raise TypeError(f"cannot search from {type(X).__name__}")


def _as_start(X) -> MarkedTriangulation:
    """A search root: any plain triangulation becomes its own reference."""
    if isinstance(X, Triangulation):
        return MarkedTriangulation.at(X)
    return _as_marked(X)


# -- searches ------------------------------------------------------------------

def distance(S, T, budget: int | None = None) -> int:
    """Exact flip distance by bidirectional breadth-first search."""
    S, T = _as_marked(S), _as_marked(T)
    if S.key == T.key:
        return 0
    budget = default_budget() if budget is None else budget
    seen = [{S.key: 0}, {T.key: 0}]
    frontier = [[S], [T]]
    visited = 2
    while frontier[0] and frontier[1]:
        side = 0 if len(frontier[0]) <= len(frontier[1]) else 1
        mine, other = seen[side], seen[1 - side]
        nxt_layer = []
        best = None
        for M in frontier[side]:
            depth = mine[M.key] + 1
            for _, N in M.neighbors():
                k = N.key
                if k in other:
                    total = depth + other[k]
                    best = total if best is None else min(best, total)
                if k not in mine:
                    mine[k] = depth
                    nxt_layer.append(N)
                    visited += 1
                    if visited > budget:
                        raise SearchBudgetExceeded(f"distance search exceeded {budget} states")
        if best is not None:
            return best
        frontier[side] = nxt_layer
    raise RuntimeError("flip graph search ran out of vertices without meeting")


@dataclass
class ExploredGraph:
    """An explicitly enumerated piece of the flip graph."""
    nodes: list
    index: dict
    edges: list
    depth: list
    labels: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.nodes)

    def adjacency(self) -> csr_matrix:
        n = len(self.nodes)
        if not self.edges:
            return csr_matrix((n, n), dtype=np.int8)
        rows, cols = zip(*self.edges)
        m = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
        return ((m + m.T) > 0).astype(np.int8)

    def distance_matrix(self) -> np.ndarray:
        """All-pairs hop distances inside this subgraph (``inf`` if disconnected)."""
        return shortest_path(self.adjacency(), unweighted=True, directed=False)

    def degrees(self) -> list[int]:
        deg = [0] * len(self.nodes)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def layer_sizes(self) -> list[int]:
        out = []
        for d in self.depth:
            while len(out) <= d:
                out.append(0)
            out[d] += 1
        return out

    def to_dot(self) -> str:
        lines = ["graph flipgraph {"]
        for i, d in enumerate(self.depth):
            lines.append(f'  v{i} [label="{i}:{d}"];')
        for i, j in self.edges:
            lines.append(f"  v{i} -- v{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def explore(start, radius: int | None = None, budget: int | None = None,
            frozen=frozenset()) -> ExploredGraph:
    """Breadth-first enumeration from ``start`` up to ``radius`` flips.

    Arcs whose ids are in ``frozen`` are never flipped.  With no radius the
    search runs until the component is exhausted.
    """
    start = _as_start(start)
    budget = default_budget() if budget is None else budget
    index = {start.key: 0}
    nodes = [start]
    depth = [0]
    edges = []
    labels = {}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        M = nodes[i]
        last = radius is not None and depth[i] >= radius
        for arc, N in M.neighbors():
            if arc in frozen:
                continue
            j = index.get(N.key)
            if j is None:
                if last:
                    continue
                j = len(nodes)
                if j >= budget:
                    raise SearchBudgetExceeded(f"exploration exceeded {budget} states")
                index[N.key] = j
                nodes.append(N)
                depth.append(depth[i] + 1)
                queue.append(j)
            if i < j:
                edges.append((i, j))
                labels[(i, j)] = arc
            elif j < i and (j, i) not in labels:
                edges.append((j, i))
                labels[(j, i)] = arc
    return ExploredGraph(nodes, index, edges, depth, labels)


@dataclass
class BallReport:
    radius: int
    layer_sizes: list
    frontier: list = field(repr=False)
    kappa_tilde: int = 0

    @property
    def cumulative(self) -> list[int]:
        return list(np.cumsum(self.layer_sizes).tolist())

    def bound_violations(self) -> list[tuple[int, int, int]]:
        """``(m, ball size, bound)`` whenever the ball exceeds 4^(10m) 4^kt."""
        out = []
        for m, size in enumerate(self.cumulative):
            bound = grammar_ball_bound(m, self.kappa_tilde)
            if size > bound:
                out.append((m, size, bound))
        return out

    def as_dict(self) -> dict:
        return {"format": "flipforge/1", "radius": self.radius, "layer_sizes": self.layer_sizes,
                "cumulative": self.cumulative, "bound_ok": not self.bound_violations()}


def ball(T, r: int, budget: int | None = None) -> BallReport:
    """Exact layer sizes of the radius ``r`` ball around T."""
    g = explore(T, radius=r, budget=budget)
    sizes = g.layer_sizes()
    frontier = [g.nodes[i].key for i, d in enumerate(g.depth) if d == r]
    M = _as_start(T)
    return BallReport(r, sizes, frontier, M.triangulation.kappa_tilde)


@dataclass
class GeodesicDAG:
    """Vertices on some geodesic, by distance from the source, with forward edges."""
    layers: list
    nodes: dict = field(repr=False)
    edges: list = field(repr=False)

    @property
    def length(self) -> int:
        return len(self.layers) - 1

    @property
    def count(self) -> int:
        """Number of geodesics, by dynamic programming over the layers."""
        ways = {self.layers[0][0]: 1}
        for k, edges in enumerate(self.edges):
            nxt_ways = {}
            for a, b in edges:
                nxt_ways[b] = nxt_ways.get(b, 0) + ways.get(a, 0)
            ways = nxt_ways
        return sum(ways.values())

    def vertices(self):
        for layer in self.layers:
            for key in layer:
                yield self.nodes[key]

    def paths(self, limit: int = 10 ** 5):
        """Enumerate geodesics as lists of marked triangulations."""
        succ = {}
        for edges in self.edges:
            for a, b in edges:
                succ.setdefault(a, []).append(b)
        out = []

        def walk(key, acc):
            if len(out) >= limit:
                return
            acc.append(self.nodes[key])
            if len(acc) == len(self.layers):
                out.append(list(acc))
            else:
                for b in succ.get(key, ()):
                    walk(b, acc)
            acc.pop()

        walk(self.layers[0][0], [])
        return out


def _distances_to(T: MarkedTriangulation, radius: int, budget: int) -> dict:
    g = explore(T, radius=radius, budget=budget)
    return {n.key: d for n, d in zip(g.nodes, g.depth)}


def all_geodesics(S, T, budget: int | None = None) -> GeodesicDAG:
    """Every shortest flip path from S to T, as a layered DAG."""
    S, T = _as_marked(S), _as_marked(T)
    budget = default_budget() if budget is None else budget
    d = distance(S, T, budget)
    to_t = _distances_to(T, d, budget)
    layers = [[S.key]]
    nodes = {S.key: S}
    edges = []
    for k in range(d):
        nxt_layer = []
        step = []
        for key in layers[-1]:
            for _, N in nodes[key].neighbors():
                if to_t.get(N.key) == d - k - 1:
                    if N.key not in nodes:
                        nodes[N.key] = N
                        nxt_layer.append(N.key)
                    step.append((key, N.key))
        layers.append(nxt_layer)
        edges.append(step)
    return GeodesicDAG(layers, nodes, edges)


def stratum_subgraph(A, radius: int | None = None, budget: int | None = None,
                     start: MarkedTriangulation | None = None) -> ExploredGraph:
    """Triangulations containing the multiarc A, joined by flips that keep A.

    A is a multiarc over ``start.triangulation`` (or over its own base, which
    then becomes the reference).  The search starts at the end of the
    convenient-flip path into the stratum.
    """
    words = as_words(A)
    if start is None:
        start = MarkedTriangulation.at(words[0].base)
    path = path_to_stratum(start.triangulation, words)
    M = start.follow(path.steps)
    frozen = frozenset(w.edge_arc() for w in path.carried)
    return explore(M, radius=radius, budget=budget, frozen=frozen)


def contains_arcs(M: MarkedTriangulation, arc_words_here) -> bool:
    """Whether every word (based at M's triangulation) is an edge of it."""
    return all(w.is_edge() for w in as_words(arc_words_here))


def random_walk(M: MarkedTriangulation, steps: int, rng) -> MarkedTriangulation:
    for _ in range(steps):
        options = M.triangulation.flippable_arcs()
        if not options:
            raise NotFlippable("no flippable arc")
        M = M.flip(options[int(rng.integers(len(options)))])
    return M
