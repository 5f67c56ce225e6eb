"""Quick numerical checks of the bounds, grouped into suites.

Each suite returns a list of ``Check`` records.  The sizes here are chosen
so that every suite finishes in seconds; the test suite runs the same kind
of checks at full size.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fixtures
from .arcs import ArcWord
from .census import (build_quotient, catalan, counting_lower_bounds, diameter_bounds,
                     grammar_ball_bound)
from .constructions import (canonical_path, genus_split_arcs, separation_signatures,
                            spanning_tree_loop)
from .explorer import (MarkedTriangulation, ball, distance, explore, marked_intersection,
                       stratum_subgraph)
from .paths import path_to_stratum, pairwise_lower_bound
from .projection import check_strong_convexity, project_arc
from .surface import SurfaceSig, standard_triangulation

SUITES = ("distances", "convexity", "projections", "censuses", "constructions", "bounds")

# exact diameters of the labeled polygon censuses, n = 4..13
POLYGON_DIAMETERS = {4: 1, 5: 2, 6: 4, 7: 5, 8: 7, 9: 9, 10: 11, 11: 12, 12: 15, 13: 16}


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "detail": self.detail}


def _sandwich(graph, rng, pairs, budget):
    bad = 0
    nodes = graph.nodes
    for _ in range(pairs):
        S = nodes[int(rng.integers(len(nodes)))]
        T = nodes[int(rng.integers(len(nodes)))]
        i = marked_intersection(S, T)
        d = distance(S, T, budget)
        words = S.words_here(T.arcs_over_reference())
        length = len(path_to_stratum(S.triangulation, words).steps)
        if not pairwise_lower_bound(i, S.triangulation.kappa) <= d <= length <= i:
            bad += 1
    return bad


def suite_distances(rng, budget):
    out = []
    for name in ("pentagon", "hexagon"):
        g = explore(fixtures.get(name), budget=budget)
        bad = _sandwich(g, rng, 40, budget)
        out.append(Check(f"sandwich on {name}", bad == 0, f"{bad} violations in 40 pairs"))
    g = explore(fixtures.get("punctured_torus"), radius=3, budget=budget)
    bad = _sandwich(g, rng, 40, budget)
    out.append(Check("sandwich on punctured torus ball", bad == 0, f"{bad} violations in 40 pairs"))
    return out


def suite_convexity(rng, budget):
    out = []
    T = fixtures.get("hexagon")
    M = MarkedTriangulation.at(T)
    for a in range(T.kappa):
        A = [ArcWord.of_arc(T, a)]
        g = stratum_subgraph(A, start=M, budget=budget)
        pairs = [(S, U) for S in g.nodes for U in g.nodes]
        rep = check_strong_convexity(A, pairs, budget)
        out.append(Check(f"hexagon stratum of diagonal {a}", rep.ok, f"{rep.checked} pairs"))
    return out


def suite_projections(rng, budget):
    out = []
    for name in ("hexagon", "punctured_torus"):
        T = fixtures.get(name)
        M = MarkedTriangulation.at(T)
        g = explore(M, radius=None if name == "hexagon" else 2, budget=budget)
        a = ArcWord.of_arc(T, 0)
        images = [project_arc(N, a) for N in g.nodes]
        retraction = all(img.key == N.key for N, img in zip(g.nodes, images)
                         if N.words_here([a])[0].is_edge())
        lip = sum(1 for i, j in g.edges
                  if images[i].key != images[j].key and distance(images[i], images[j], budget) > 1)
        out.append(Check(f"retraction on {name}", retraction))
        out.append(Check(f"1-Lipschitz on {name}", lip == 0, f"{len(g.edges)} edges, {lip} violations"))
    return out


def suite_censuses(rng, budget):
    out = []
    for n in range(4, 10):
        rep = build_quotient(SurfaceSig(0, 1, 0, n))
        ok = rep.vertices == catalan(n - 2) and rep.diameter == POLYGON_DIAMETERS[n]
        out.append(Check(f"polygon {n}", ok, f"{rep.vertices} vertices, diameter {rep.diameter}"))
    rep = build_quotient(SurfaceSig(1, 1, 0, 1))
    out.append(Check("holed torus census at most 5", rep.vertices <= 5, f"{rep.vertices} vertices"))
    rep = build_quotient(SurfaceSig(1, 0, 1, 0))
    out.append(Check("punctured torus census is one vertex", rep.vertices == 1))
    return out


def suite_constructions(rng, budget):
    out = []
    T = standard_triangulation(1, 0, 3)
    a, cert = spanning_tree_loop(T, 2)
    sigs = separation_signatures(T, a)
    out.append(Check("spanning tree loop equality", cert.measured == cert.claimed,
                     f"measured {cert.measured}, claimed {cert.claimed}, pieces {sigs}"))
    for g in (2, 3):
        _, _, cert = genus_split_arcs(fixtures.genus_piece(g))
        out.append(Check(f"genus split g={g}", cert.ok, f"{cert.measured} <= {cert.claimed}"))
    for T in (fixtures.genus_piece(2), fixtures.punctured_disk(4)):
        M = MarkedTriangulation.at(T)
        for _ in range(10):
            options = M.triangulation.flippable_arcs()
            M = M.flip(options[int(rng.integers(len(options)))])
        rep = canonical_path(M.triangulation)
        merge_ok = all(k <= 6 for k in rep.merge_lengths)
        out.append(Check(f"canonical path on {T.sig}", rep.ok and merge_ok,
                         f"{rep.measured} <= {rep.claimed}, merges {rep.merge_lengths}"))
    return out


def suite_bounds(rng, budget):
    out = []
    for name in ("octagon", "punctured_torus", "cylinder", "thrice_punctured_disk"):
        rep = ball(fixtures.get(name), 4, budget)
        out.append(Check(f"ball growth on {name}", not rep.bound_violations(),
                         f"cumulative {rep.cumulative}"))
    for sig, mode in [(SurfaceSig(0, 1, 0, 7), "labeled"), (SurfaceSig(0, 1, 3, 1), "labeled"),
                      (SurfaceSig(0, 1, 3, 1, False), "unlabeled"), (SurfaceSig(2, 1, 0, 1), "labeled")]:
        rep = build_quotient(sig, mode)
        low = counting_lower_bounds(sig)
        refined = grammar_ball_bound(rep.diameter, sig.kappa_tilde, refined=True)
        ok = low <= rep.vertices <= refined
        out.append(Check(f"counting sandwich {sig} {mode}", ok,
                         f"{low} <= {rep.vertices} <= {refined}"))
    for m in (2, 3, 4):
        sig = SurfaceSig(0, 1, m, 1, False)
        rep = build_quotient(sig, "unlabeled")
        n = m + 1
        out.append(Check(f"unlabeled disk diameter, {m} punctures", rep.diameter < 12 * n,
                         f"{rep.diameter} < {12 * n}"))
    b = diameter_bounds(SurfaceSig(0, 1, 0, 13))
    out.append(Check("polygon 13 diameter 2n-10", b.upper == POLYGON_DIAMETERS[13],
                     f"bound {b.upper}"))
    return out


RUNNERS = {
    "distances": suite_distances,
    "convexity": suite_convexity,
    "projections": suite_projections,
    "censuses": suite_censuses,
    "constructions": suite_constructions,
    "bounds": suite_bounds,
}


def run_suites(suites=SUITES, seed: int = 0, budget: int = 10 ** 6) -> dict:
    """Run the named suites; returns a JSON-ready report."""
    report = {"format": "flipforge/1", "seed": seed, "suites": {}}
    for name in suites:
        if name not in RUNNERS:
            raise KeyError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
        rng = np.random.default_rng(seed)
        checks = RUNNERS[name](rng, budget)
        report["suites"][name] = [c.as_dict() for c in checks]
    report["passed"] = all(c["passed"] for cs in report["suites"].values() for c in cs)
    return report
