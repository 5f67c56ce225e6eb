"""Triangulations up to homeomorphism: canonical codes, censuses, diameters.

A canonical code is the smallest breadth-first encoding of the map over a
set of admissible root darts.  Only orientation preserving homeomorphisms
are quotiented out.  In labeled mode marked points keep their ids; in
unlabeled mode only the map structure is recorded, which already tells
punctures from boundary points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .errors import CensusBudgetExceeded, HypothesisUnmet
from .surface import SurfaceSig, Triangulation, standard_triangulation


def _roots(T: Triangulation, labeled: bool) -> list[int]:
    glue, verts = T.glue, T.verts
    boundary = [d for d, e in enumerate(glue) if e == -1]
    if labeled:
        if boundary:
            return [min(boundary, key=lambda d: verts[d])]
        low = min(verts)
        return [c for c, v in enumerate(verts) if v == low]
    return boundary or list(range(len(glue)))


def _encode(T: Triangulation, root: int, labeled: bool, marked=None, best=None):
    """Breadth-first encoding from ``root``; returns None once it exceeds ``best``."""
    glue, verts, arcs = T.glue, T.verts, T.arcs
    n = len(glue) // 3
    order = [-1] * n
    rot = [0] * n
    t0 = root // 3
    order[t0] = 0
    rot[t0] = root % 3
    queue = [t0]
    code = []
    pos = 0
    tight = best is not None
    i = 0
    while i < len(queue):
        t = queue[i]
        i += 1
        r = rot[t]
        for k in range(3):
            d = 3 * t + (r + k) % 3
            e = glue[d]
            if e == -1:
                item = -1
            else:
                u = e // 3
                if order[u] == -1:
                    order[u] = len(queue)
                    rot[u] = e % 3
                    queue.append(u)
                item = 3 * order[u] + (e % 3 - rot[u]) % 3
            items = [item]
            if labeled:
                items.append(verts[d])
            if marked is not None:
                items.append(1 if (e != -1 and arcs[d] in marked) else 0)
            for x in items:
                if tight:
                    y = best[pos]
                    if x > y:
                        return None
                    if x < y:
                        tight = False
                code.append(x)
                pos += 1
    return code


def canonical_code(T: Triangulation, labeled: bool | None = None, marked=None,
                   mirror: bool = False) -> tuple:
    """Code identifying T up to orientation preserving homeomorphism.

    ``marked`` is an optional set of arc ids that homeomorphisms must
    preserve.  With ``mirror`` orientation reversing maps are quotiented too.
    """
    if labeled is None:
        labeled = T.sig.labeled
    best = None
    for root in _roots(T, labeled):
        code = _encode(T, root, labeled, marked, best)
        if code is not None:
            best = code
    best = tuple(best)
    if mirror:
        other = canonical_code(mirror_image(T), labeled, marked)
        best = min(best, other)
    return best


def code_bytes(code: tuple) -> bytes:
    """Compact byte string for a code (for JSON and hashing)."""
    return ",".join(map(str, code)).encode()


def isomorphism(T: Triangulation, U: Triangulation, labeled: bool | None = None):
    """Dart map from U to T realizing an equal canonical code, or None."""
    if labeled is None:
        labeled = T.sig.labeled
    code = list(canonical_code(T, labeled))
    maps = []
    for X in (T, U):
        for root in _roots(X, labeled):
            if _encode(X, root, labeled) == code:
                maps.append(_traversal(X, root))
                break
        else:
            return None
    (order_t, rot_t), (order_u, rot_u) = maps
    inverse_t = {v: k for k, v in order_t.items()}
    out = [0] * len(U.glue)
    for u, k in order_u.items():
        t = inverse_t[k]
        for j in range(3):
            new_side = (j - rot_u[u]) % 3
            out[3 * u + j] = 3 * t + (rot_t[t] + new_side) % 3
    return out


def _traversal(T: Triangulation, root: int):
    glue = T.glue
    order = {root // 3: 0}
    rot = {root // 3: root % 3}
    queue = [root // 3]
    i = 0
    while i < len(queue):
        t = queue[i]
        i += 1
        for k in range(3):
            e = glue[3 * t + (rot[t] + k) % 3]
            if e != -1 and e // 3 not in order:
                order[e // 3] = len(queue)
                rot[e // 3] = e % 3
                queue.append(e // 3)
    return order, rot


def mirror_image(T: Triangulation) -> Triangulation:
    """Reverse the orientation: corner j of every triangle becomes corner -j."""
    def m(d):
        return 3 * (d // 3) + (-(d % 3) - 1) % 3

    def mc(c):
        return 3 * (c // 3) + (-(c % 3)) % 3

    n = len(T.glue)
    glue = [0] * n
    verts = [0] * n
    arcs = [0] * n
    for d in range(n):
        e = T.glue[d]
        glue[m(d)] = -1 if e == -1 else m(e)
        arcs[m(d)] = T.arcs[d]
        verts[mc(d)] = T.verts[d]
    return Triangulation(tuple(glue), tuple(verts), tuple(arcs), T.sig)


# -- census --------------------------------------------------------------------

@dataclass
class CensusReport:
    signature: SurfaceSig
    mode: str
    vertices: int
    edges: int
    diameter: int
    certified: bool
    eccentricities: dict | None = None
    representatives: list = field(default_factory=list, repr=False)
    adjacency: csr_matrix | None = field(default=None, repr=False)
    codes: list = field(default_factory=list, repr=False)

    def as_dict(self) -> dict:
        return {
            "format": "flipforge/1",
            "signature": {"g": self.signature.g, "b": self.signature.b, "s": self.signature.s,
                          "p": self.signature.p, "labeled": self.signature.labeled},
            "mode": self.mode,
            "vertices": self.vertices,
            "edges": self.edges,
            "diameter": self.diameter,
            "diameter_certified": self.certified,
            "eccentricity_histogram": (None if self.eccentricities is None
                                       else {str(k): v for k, v in sorted(self.eccentricities.items())}),
        }


def census_graph(seed: Triangulation, labeled: bool, max_vertices: int = 10 ** 6):
    """Breadth-first enumeration of the modular flip graph from ``seed``."""
    index = {canonical_code(seed, labeled): 0}
    reps = [seed]
    rows, cols = [], []
    i = 0
    while i < len(reps):
        T = reps[i]
        for arc in T.flippable_arcs():
            U = T.flip(arc)
            code = canonical_code(U, labeled)
            j = index.get(code)
            if j is None:
                j = len(reps)
                if j >= max_vertices:
                    raise CensusBudgetExceeded(f"census exceeds {max_vertices} vertices")
                index[code] = j
                reps.append(U)
            if j != i:
                rows.append(i)
                cols.append(j)
        i += 1
    n = len(reps)
    adj = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    adj = ((adj + adj.T) > 0).astype(np.int8)
    codes = [None] * n
    for code, j in index.items():
        codes[j] = code
    return reps, adj, codes


def bfs_distances(adj: csr_matrix, sources) -> np.ndarray:
    """Hop distances from each source (rows) to every vertex."""
    return shortest_path(adj, unweighted=True, directed=False, indices=np.atleast_1d(sources))


def _eccentricities(adj: csr_matrix, sources, words: int = 4) -> np.ndarray:
    """Eccentricities of many sources by bit-parallel breadth-first search."""
    sources = np.asarray(sources, dtype=np.int64)
    n = adj.shape[0]
    indptr, indices = adj.indptr, adj.indices
    out = np.zeros(len(sources), dtype=np.int64)
    if adj.nnz == 0:
        return out
    batch = 64 * words
    for lo in range(0, len(sources), batch):
        src = sources[lo:lo + batch]
        k = len(src)
        width = (k + 63) // 64
        seen = np.zeros((n, width), dtype=np.uint64)
        slots = np.arange(k)
        np.bitwise_or.at(seen, (src, slots // 64), np.left_shift(np.uint64(1), (slots % 64).astype(np.uint64)))
        frontier = seen.copy()
        ecc = np.zeros(k, dtype=np.int64)
        step = 0
        while True:
            step += 1
            reached = np.bitwise_or.reduceat(frontier[indices], indptr[:-1], axis=0)
            new = reached & ~seen
            hit = np.bitwise_or.reduce(new, axis=0)
            if not hit.any():
                break
            seen |= new
            bits = np.unpackbits(hit.view(np.uint8), bitorder="little")[:k]
            ecc[bits.astype(bool)] = step
            frontier = new
        out[lo:lo + k] = ecc
    return out


def exact_diameter(adj: csr_matrix) -> int:
    """Diameter by the iFUB scheme (certified exact for connected graphs)."""
    n = adj.shape[0]
    if n == 1:
        return 0
    # double sweep from a max-degree vertex to pick a central start
    degree = np.asarray(adj.sum(axis=1)).ravel()
    a = int(np.argmax(degree))
    da = bfs_distances(adj, a)[0]
    b = int(np.argmax(da))
    db = bfs_distances(adj, b)[0]
    c = int(np.argmax(db))
    lower = int(db[c])
    dc = bfs_distances(adj, c)[0]
    # midpoint of the b-c path as root
    mid = int(np.argmin(np.maximum(db, dc) + (db + dc != lower) * n))
    du = bfs_distances(adj, mid)[0]
    ecc = int(du.max())
    lower = max(lower, ecc)
    i = ecc
    upper = 2 * ecc
    while upper > lower:
        level = np.flatnonzero(du == i)
        lower = max(lower, int(_eccentricities(adj, level).max()))
        if lower > 2 * (i - 1):
            break
        upper = 2 * (i - 1)
        i -= 1
    return lower


def build_quotient(sig: SurfaceSig, mode: str | None = None, max_vertices: int = 10 ** 6,
                   seed: Triangulation | None = None, histogram_limit: int = 5000) -> CensusReport:
    """Census of the modular flip graph of ``sig`` with its exact diameter."""
    if mode is None:
        mode = "labeled" if sig.labeled else "unlabeled"
    labeled = mode == "labeled"
    if seed is None:
        seed = standard_triangulation(sig.g, sig.b, sig.s, sig.p, labeled)
    reps, adj, codes = census_graph(seed, labeled, max_vertices)
    n = len(reps)
    ncomp, _ = connected_components(adj, directed=False)
    if ncomp != 1:
        raise RuntimeError("modular flip graph came out disconnected")
    hist = None
    if n <= histogram_limit:
        ecc = _eccentricities(adj, np.arange(n)).astype(int)
        diameter = int(ecc.max())
        values, counts = np.unique(ecc, return_counts=True)
        hist = {int(v): int(c) for v, c in zip(values, counts)}
    else:
        diameter = exact_diameter(adj)
    return CensusReport(seed.sig, mode, n, int(adj.nnz // 2), diameter, True, hist, reps, adj, codes)


# -- bounds --------------------------------------------------------------------

def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def grammar_ball_bound(m: int, kappa_tilde: int, refined: bool = False) -> int:
    """Ball cardinality bound: 4^(10m) 4^k, or 3^k 8^m when refined."""
    if refined:
        return 3 ** kappa_tilde * 8 ** m
    return 4 ** (10 * m) * 4 ** kappa_tilde


def genus_piece_count_bound(g: int) -> int:
    """Lower bound (g-1)/2 * (g-1)! on triangulation classes of a genus g piece, floored."""
    if g < 2:
        raise HypothesisUnmet("bound needs genus at least 2")
    return (g - 1) * math.factorial(g - 1) // 2


def disk_count_bound(n: int) -> int:
    """Lower bound C(n-2) (n-1)! for a disk with n-1 labeled punctures and one boundary point."""
    if n < 2:
        raise HypothesisUnmet("bound needs n >= 2")
    return catalan(n - 2) * math.factorial(n - 1)


def brown_count(n: int) -> int:
    """2(4n-7)!/((n-1)!(3n-4)!), a count of unlabeled once-bordered disk triangulations."""
    return 2 * math.factorial(4 * n - 7) // (math.factorial(n - 1) * math.factorial(3 * n - 4))


def counting_lower_bounds(sig: SurfaceSig) -> int:
    """Best applicable lower bound on the number of modular census vertices.

    Genus pieces (one boundary curve with one point, no punctures) and
    labeled once-bordered punctured disks have their own bounds; closed
    labeled surfaces use the product of the two; everything else gets 1.
    """
    g, b, s, p = sig.g, sig.b, sig.s, sig.p
    if b == 1 and p == 1 and s == 0 and g >= 2:
        return genus_piece_count_bound(g)
    if g == 0 and b == 1 and p == 1 and s >= 1 and sig.labeled:
        return disk_count_bound(s + 1)
    if b == 0 and sig.labeled and s >= 2:
        genus = genus_piece_count_bound(g) if g >= 2 else 1
        return genus * disk_count_bound(s)
    return 1


@dataclass
class DiameterBounds:
    lower: float | None
    upper: float | None
    applied: list


def diameter_bounds(sig: SurfaceSig, mode: str | None = None) -> DiameterBounds:
    """Closed form bounds from the known theorems that apply to ``sig``."""
    if mode is None:
        mode = "labeled" if sig.labeled else "unlabeled"
    g, b, s, p = sig.g, sig.b, sig.s, sig.p
    applied = []
    lower = upper = None
    if g == 0 and b == 1 and s == 0:
        n = p
        if n > 12:
            lower = upper = 2 * n - 10
            applied.append(("polygon", 2 * n - 10))
        return DiameterBounds(lower, upper, applied)
    if b == 1 and p == 1 and s == 0 and g >= 1:
        upper = 1000 * g * math.log(g + 1)
        applied.append(("genus piece", upper))
    elif g == 0 and b == 1 and p == 1 and s >= 1:
        n = s + 1
        if mode == "unlabeled":
            upper = 12 * n
            applied.append(("unlabeled disk", upper))
        else:
            upper = 400 * n * math.log(n + 1)
            applied.append(("labeled disk", upper))
    elif g == 0 and b == 0 and s >= 3:
        if mode != "labeled":
            raise HypothesisUnmet("sphere bound is stated for labeled punctures")
        n = s
        upper = 410 * n * math.log(n + 1)
        applied.append(("labeled sphere", upper))
    elif b == 0 and s >= 1:
        if mode != "labeled":
            raise HypothesisUnmet("closed surface bounds are stated for labeled punctures")
        n = s
        upper = 1000 * g * math.log(g + 1) + 400 * n * math.log(n + 1) + 2 * (sig.kappa - n + 1)
        applied.append(("closed surface", upper))
        lower = 2e-5 * (g * math.log(g + 1) + n * math.log(n + 1))
        applied.append(("closed surface lower", lower))
    return DiameterBounds(lower, upper, applied)


def card_diameter_lower_bound(card: int, kappa_tilde: int) -> float:
    """diam > (log card - kappa_tilde log 4) / (10 log 4), from the ball bound."""
    return (math.log(card) - kappa_tilde * math.log(4)) / (10 * math.log(4))
