import math

import numpy as np
import pytest

from flipforge import fixtures
from flipforge.census import (brown_count, build_quotient, canonical_code, card_diameter_lower_bound,
                              counting_lower_bounds, diameter_bounds, exact_diameter,
                              grammar_ball_bound, isomorphism, mirror_image)
from flipforge.errors import CensusBudgetExceeded, HypothesisUnmet
from flipforge.explorer import MarkedTriangulation, explore, random_walk
from flipforge.surface import SurfaceSig, Triangulation, standard_triangulation

import oracles


def relabel(T, rng, permute_points=False):
    """Random triangle order and corner rotation; optionally permute marked point ids."""
    n = T.n_triangles
    order = rng.permutation(n)
    turn = rng.integers(0, 3, n)
    new = [3 * int(order[d // 3]) + (d % 3 + int(turn[d // 3])) % 3 for d in range(3 * n)]
    names = np.arange(T.sig.n_marked)
    if permute_points:
        bnd = sorted(T.boundary_vertices)
        inner = [v for v in range(T.sig.n_marked) if v not in T.boundary_vertices]
        names[bnd] = rng.permutation(bnd) if bnd else names[bnd]
        names[inner] = rng.permutation(inner) if inner else names[inner]
    glue, verts, arcs = [0] * (3 * n), [0] * (3 * n), [0] * (3 * n)
    for d in range(3 * n):
        e = T.glue[d]
        glue[new[d]] = -1 if e == -1 else new[e]
        verts[new[d]] = int(names[T.verts[d]])
        arcs[new[d]] = T.arcs[d]
    return Triangulation(tuple(glue), tuple(verts), tuple(arcs), T.sig)


def test_relabeled_copies_share_a_code():
    rng = np.random.default_rng(0)
    for name in ("octagon", "punctured_torus", "thrice_punctured_disk", "two_holed_torus",
                 "genus_two_piece", "four_punctured_sphere"):
        T = fixtures.get(name)
        for _ in range(20):
            U = relabel(T, rng)
            U.validate()
            assert canonical_code(U) == canonical_code(T)
            assert isomorphism(T, U) is not None


def test_codes_agree_on_a_thousand_flip_and_relabel_pairs():
    rng = np.random.default_rng(1)
    cases = [("heptagon", True), ("thrice_punctured_disk", True), ("thrice_punctured_disk", False),
             ("holed_torus_two_points", True), ("four_punctured_sphere", False)]
    checked = 0
    for name, labeled in cases:
        T = fixtures.get(name, labeled)
        for _ in range(200):
            M = random_walk(MarkedTriangulation.at(T), int(rng.integers(1, 15)), rng)
            X = M.triangulation
            Y = relabel(X, rng, permute_points=not labeled)
            assert canonical_code(X) == canonical_code(Y)
            checked += 1
    assert checked >= 1000


def test_square_diagonals_differ_only_when_labeled():
    T = fixtures.get("square")
    U = T.flip(0)
    assert canonical_code(T, True) != canonical_code(U, True)
    assert canonical_code(T, False) == canonical_code(U, False)


def test_torus_ball_is_a_single_class():
    g = explore(fixtures.get("punctured_torus"), radius=3)
    assert len({canonical_code(M.triangulation) for M in g.nodes}) == 1


def test_mirror_codes():
    T = fixtures.get("hexagon")
    M = mirror_image(T)
    M.validate()
    assert canonical_code(T, mirror=True) == canonical_code(M, mirror=True)


@pytest.mark.parametrize("key", [(0, 1, 3, 1, True), (0, 1, 3, 1, False), (1, 1, 0, 2, True),
                                 (1, 1, 0, 2, False), (0, 0, 4, 0, True), (0, 0, 4, 0, False),
                                 (1, 0, 2, 0, True), (0, 2, 0, 3, True)])
def test_census_classes_are_pairwise_distinct(small_censuses, key):
    rep = small_censuses[key]
    reps = rep.representatives
    labeled = key[-1]
    assert len(set(rep.codes)) == len(reps)
    if len(reps) <= 70:
        for i in range(len(reps)):
            for j in range(i + 1, len(reps)):
                assert not oracles.isomorphic(reps[i], reps[j], labeled)


def test_quotient_does_not_depend_on_the_seed():
    rng = np.random.default_rng(4)
    sig = SurfaceSig(0, 1, 3, 1)
    first = build_quotient(sig)
    seed = random_walk(MarkedTriangulation.at(standard_triangulation(0, 1, 3, 1)), 9, rng).triangulation
    second = build_quotient(sig, seed=relabel(seed, rng))
    assert (first.vertices, first.edges, first.diameter) == (second.vertices, second.edges, second.diameter)
    assert set(first.codes) == set(second.codes)
    assert first.eccentricities == second.eccentricities


def test_polygon_census_values():
    rep = build_quotient(SurfaceSig(0, 1, 0, 6))
    assert rep.vertices == 14
    assert rep.diameter == 4
    assert rep.eccentricities == {3: 6, 4: 8}


def test_holed_torus_census_has_at_most_five_classes():
    assert build_quotient(SurfaceSig(1, 1, 0, 1)).vertices <= 5


def test_unlabeled_twice_punctured_disk_diameter():
    rep = build_quotient(SurfaceSig(0, 1, 2, 1, False))
    assert rep.diameter <= 12 * 3


def test_census_budget():
    with pytest.raises(CensusBudgetExceeded):
        build_quotient(SurfaceSig(0, 1, 0, 9), max_vertices=50)


def test_bounded_sweep_matches_all_source_diameter():
    rep = build_quotient(SurfaceSig(0, 1, 0, 9))
    assert exact_diameter(rep.adjacency) == rep.diameter == max(rep.eccentricities)


def test_diameter_bound_examples():
    assert diameter_bounds(SurfaceSig(0, 1, 0, 13)).upper == 16
    assert diameter_bounds(SurfaceSig(3, 1, 0, 1)).upper == pytest.approx(1000 * 3 * math.log(4))
    assert diameter_bounds(SurfaceSig(0, 1, 9, 1, False)).upper == 120
    with pytest.raises(HypothesisUnmet):
        diameter_bounds(SurfaceSig(1, 0, 3, 0, False))


def test_counting_arithmetic():
    assert counting_lower_bounds(SurfaceSig(0, 1, 3, 1)) == 12
    assert counting_lower_bounds(SurfaceSig(2, 1, 0, 1)) == 0
    assert counting_lower_bounds(SurfaceSig(3, 1, 0, 1)) == 2
    assert brown_count(511) > 3 ** (2 * 511)


def test_grammar_bound_arithmetic():
    assert grammar_ball_bound(0, 2) == 16
    assert grammar_ball_bound(1, 2, refined=True) == 72


def test_computed_diameters_respect_the_closed_forms(small_censuses):
    for (g, b, s, p, labeled), rep in small_censuses.items():
        sig = SurfaceSig(g, b, s, p, labeled)
        assert rep.diameter > card_diameter_lower_bound(rep.vertices, sig.kappa_tilde)
        try:
            bounds = diameter_bounds(sig)
        except HypothesisUnmet:
            continue
        if bounds.upper is not None:
            assert rep.diameter <= bounds.upper
        if bounds.lower is not None and rep.vertices > 1:
            assert rep.diameter > bounds.lower
        assert counting_lower_bounds(sig) <= rep.vertices <= grammar_ball_bound(rep.diameter, sig.kappa_tilde)


def test_closed_surface_lower_bound_fails_on_a_single_vertex_census(small_censuses):
    """The once-punctured torus has one class, so no positive lower bound can hold."""
    rep = small_censuses[(1, 0, 1, 0, True)]
    assert (rep.vertices, rep.diameter) == (1, 0)
    assert diameter_bounds(SurfaceSig(1, 0, 1, 0)).lower > rep.diameter
