import numpy as np
import pytest

from flipforge import fixtures
from flipforge.arcs import ArcWord, intersection_with_triangulation, transport_along
from flipforge.constructions import spanning_tree_loop
from flipforge.errors import PreconditionUnmet
from flipforge.explorer import MarkedTriangulation, distance, explore, random_walk
from flipforge.paths import (FlipClass, classify_flip, complete_to_triangulation, is_multiarc,
                             lower_bound_distance, pairwise_lower_bound, path_to_stratum,
                             select_convenient, step_drop_violations)
from flipforge.projection import distance_to_stratum
from flipforge.surface import standard_triangulation

import oracles


def test_flip_classes_on_the_square():
    T = fixtures.get("square")
    M = MarkedTriangulation.at(T).flip(0)
    (other,) = M.arcs_over_reference()
    assert classify_flip(T, [other], 0) is FlipClass.CONVENIENT
    (own,) = M.words_here([ArcWord.of_arc(T, 0)])
    assert classify_flip(M.triangulation, [own], 0) is FlipClass.CONVENIENT


def test_disjoint_flip_that_creates_crossings_is_increasing():
    T = fixtures.get("hexagon")
    for a in range(T.kappa):
        A = [ArcWord.of_arc(T, a)]
        for h in T.flippable_arcs():
            if h != a:
                U = T.flip(h)
                crosses = oracles._crosses(frozenset(U.arc_endpoints(h)), frozenset(T.arc_endpoints(a)))
                expected = FlipClass.INCREASING if crosses else FlipClass.NEUTRAL
                assert classify_flip(T, A, h) is expected


def test_select_convenient_needs_crossings():
    T = fixtures.get("pentagon")
    with pytest.raises(PreconditionUnmet):
        select_convenient(T, [ArcWord.of_arc(T, 0)])


def test_selected_arc_is_maximal_and_convenient():
    rng = np.random.default_rng(4)
    for name in ("octagon", "punctured_torus", "thrice_punctured_disk", "holed_torus_two_points"):
        T = fixtures.get(name)
        for _ in range(40):
            M = random_walk(MarkedTriangulation.at(T), 12, rng)
            A = [w for w in M.arcs_over_reference() if w.exits][:2]
            if not A or not is_multiarc(A):
                continue
            counts, _ = intersection_with_triangulation(T, A)
            h = select_convenient(T, A)
            assert counts[h] == max(counts)
            assert classify_flip(T, A, h) is FlipClass.CONVENIENT


def test_neutral_walk_reaches_a_convenient_arc_on_plateaus():
    """Loops around spanning trees produce plateaus of maximal arcs."""
    rng = np.random.default_rng(10)
    long_walks = 0
    for _ in range(60):
        M = random_walk(MarkedTriangulation.at(standard_triangulation(1, 0, 2)), 10, rng)
        T = M.triangulation
        a, _ = spanning_tree_loop(T, int(rng.integers(2)))
        if not a.exits:
            continue
        log = []
        h = select_convenient(T, [a], log)
        counts, _ = intersection_with_triangulation(T, [a])
        assert counts[h] == max(counts)
        assert len(set(log)) == len(log) <= T.kappa
        long_walks += len(log) > 1
    assert long_walks > 0


def test_path_to_stratum_is_empty_inside_the_stratum():
    T = fixtures.get("genus_two_piece")
    assert path_to_stratum(T, [ArcWord.of_arc(T, 3)]).steps == ()


def test_pentagon_paths_between_all_pairs():
    g = explore(fixtures.get("pentagon"))
    for S in g.nodes:
        for T in g.nodes:
            words = S.words_here(T.arcs_over_reference())
            path = path_to_stratum(S.triangulation, words, check=True)
            i = sum(len(w.exits) for w in words)
            assert distance(S, T) <= len(path) <= i
            assert S.follow(path.steps) == T


def test_path_stays_in_a_common_stratum():
    g = explore(fixtures.get("hexagon"))
    rng = np.random.default_rng(8)
    for _ in range(80):
        S = g.nodes[int(rng.integers(len(g)))]
        T = g.nodes[int(rng.integers(len(g)))]
        common = [w for w in S.words_here(T.arcs_over_reference()) if not w.exits]
        path = path_to_stratum(S.triangulation, S.words_here(T.arcs_over_reference()))
        moved, X = common, S.triangulation
        for h in path.steps:
            X, moved = transport_along(moved, X, [h])
            assert all(not w.exits for w in moved)


def test_path_length_against_exact_stratum_distance():
    T = fixtures.get("punctured_torus")
    rng = np.random.default_rng(6)
    for _ in range(20):
        M = random_walk(MarkedTriangulation.at(T), 6, rng)
        word = M.arcs_over_reference()[int(rng.integers(3))]
        path = path_to_stratum(T, [word])
        exact = distance_to_stratum(MarkedTriangulation.at(T), [word])
        assert exact <= len(path) <= len(word.exits)


def test_complete_to_triangulation_contains_the_arc():
    T = fixtures.get("punctured_torus")
    M = MarkedTriangulation.at(T).follow([0, 1, 2, 0])
    word = M.arcs_over_reference()[0]
    path = complete_to_triangulation([word])
    (edge,) = path.carried
    assert edge.is_edge()
    assert edge.base == path.end


def test_pairwise_bound_arithmetic():
    assert pairwise_lower_bound(0, 5) == 0
    assert pairwise_lower_bound(1, 3) == -4
    assert pairwise_lower_bound(3 ** 5, 3) == 1
    assert pairwise_lower_bound(3 ** 5 - 1, 3) == 0
    for i in range(1, 2000, 37):
        for kappa in (2, 3, 7):
            m = pairwise_lower_bound(i, kappa) + 4
            assert kappa ** m <= i < kappa ** (m + 1)


def test_stratum_lower_bound_arithmetic_on_the_torus():
    T = fixtures.get("punctured_torus")
    M = MarkedTriangulation.at(T)
    for step in range(9):
        M = M.flip(step % 3)
    A = [w for w in M.arcs_over_reference() if w.exits][:1]
    counts, total = intersection_with_triangulation(T, A)
    bound = lower_bound_distance(T, A)
    m = bound + 2
    assert 3 ** m <= total < 3 ** (m + 1)
    assert bound <= distance_to_stratum(MarkedTriangulation.at(T), A)


def test_stratum_lower_bound_needs_enough_crossings():
    T = fixtures.get("square")
    word = MarkedTriangulation.at(T).flip(0).arcs_over_reference()[0]
    with pytest.raises(PreconditionUnmet):
        lower_bound_distance(T, [word])


def test_step_drop_holds_on_polygons():
    rng = np.random.default_rng(12)
    T = fixtures.get("heptagon")
    for _ in range(200):
        M = random_walk(MarkedTriangulation.at(T), 8, rng)
        words = [w for w in M.arcs_over_reference() if w.exits]
        if words:
            assert step_drop_violations(T, words[:1]) == []
    assert step_drop_violations(T, [ArcWord.of_arc(T, 0)]) == []


def test_step_drop_fails_on_the_punctured_torus():
    """Every quadrilateral of the punctured torus has repeated sides.

    The arc of slope 3/1 crosses the reference arcs of slopes 1/0, 0/1, 1/1
    zero, two and one times.  Flipping the twice crossed arc leaves a single
    crossing, below 2 * 2 - 2 = 2.
    """
    T = fixtures.get("punctured_torus")
    M = MarkedTriangulation.at(T).follow([1, 2])
    assert oracles.torus_follow([1, 2])[2] == (3, 1)
    word = M.arcs_over_reference()[2]
    counts, total = intersection_with_triangulation(T, [word])
    assert (counts, total) == ([0, 2, 1], 3)
    assert total == oracles.torus_intersection(oracles.torus_start(), {0: (3, 1)})
    assert step_drop_violations(T, [word]) == [(1, 1, 2)]
