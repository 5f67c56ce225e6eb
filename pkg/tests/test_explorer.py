import numpy as np
import pytest

from flipforge import fixtures
from flipforge.arcs import ArcWord
from flipforge.errors import SearchBudgetExceeded
from flipforge.explorer import (MarkedTriangulation, all_geodesics, ball, default_budget,
                                distance, explore, stratum_subgraph)

import oracles


def diagonals(M):
    T = M.triangulation
    return frozenset(frozenset(T.arc_endpoints(a)) for a in range(T.kappa))


def test_distance_to_itself_and_to_a_neighbor():
    T = fixtures.get("octagon")
    assert distance(T, T) == 0
    for a in T.flippable_arcs():
        assert distance(T, T.flip(a)) == 1


def test_pentagon_far_pairs_have_one_geodesic():
    """The pentagon flip graph is a 5-cycle, so distance 2 is reached one way only."""
    g = explore(fixtures.get("pentagon"))
    S = g.nodes[0]
    far = [M for M, d in zip(g.nodes, g.depth) if d == 2]
    assert len(far) == 2
    for T in far:
        dag = all_geodesics(S, T)
        assert dag.length == 2
        assert dag.count == oracles.polygon_geodesic_count(5, diagonals(S), diagonals(T)) == 1
        assert len(dag.paths()) == 1


def test_adjacent_vertices_have_a_single_geodesic():
    S = MarkedTriangulation.at(fixtures.get("punctured_torus"))
    assert all_geodesics(S, S.flip(1)).count == 1


def test_hexagon_geodesic_counts_match_the_oracle():
    g = explore(fixtures.get("hexagon"))
    S = g.nodes[0]
    for T in g.nodes:
        dag = all_geodesics(S, T)
        assert dag.count == oracles.polygon_geodesic_count(6, diagonals(S), diagonals(T))


def test_distance_is_symmetric_with_triangle_inequality():
    g = explore(fixtures.get("heptagon"))
    rng = np.random.default_rng(17)
    for _ in range(40):
        a, b, c = (g.nodes[int(rng.integers(len(g)))] for _ in range(3))
        ab, bc, ac = distance(a, b), distance(b, c), distance(a, c)
        assert ab == distance(b, a)
        assert ac <= ab + bc


def test_torus_ball_layers():
    report = ball(fixtures.get("punctured_torus"), 2)
    assert report.cumulative == [1, 4, 10]
    assert report.layer_sizes == [1, 3, 6]
    assert ball(fixtures.get("punctured_torus"), 0).layer_sizes == [1]


def test_octagon_ball_respects_the_grammar_bound():
    report = ball(fixtures.get("octagon"), 5)
    assert not report.bound_violations()
    assert report.cumulative[-1] <= oracles.catalan(6)


def test_torus_stratum_is_a_path():
    T = fixtures.get("punctured_torus")
    g = stratum_subgraph([ArcWord.of_arc(T, 0)], radius=5)
    assert len(g) == 11
    degrees = sorted(g.degrees())
    assert degrees == [1, 1] + [2] * 9


def test_octagon_strata_are_products_of_catalan_numbers():
    T = fixtures.get("octagon")
    for a in range(T.kappa):
        u, v = sorted(T.arc_endpoints(a))
        left, right = v - u + 1, 8 - (v - u) + 1
        g = stratum_subgraph([ArcWord.of_arc(T, a)])
        assert len(g) == oracles.catalan(left - 2) * oracles.catalan(right - 2)


def test_full_multiarc_stratum_is_one_vertex():
    T = fixtures.get("punctured_torus")
    g = stratum_subgraph([ArcWord.of_arc(T, a) for a in range(3)])
    assert len(g) == 1


def test_degree_is_at_most_kappa():
    for name in ("hexagon", "punctured_torus", "twice_punctured_disk", "cylinder"):
        g = explore(fixtures.get(name), radius=3)
        kappa = g.nodes[0].triangulation.kappa
        for M, deg in zip(g.nodes, g.degrees()):
            if g.depth[g.index[M.key]] < 3:
                flippable = len(M.triangulation.flippable_arcs())
                assert deg == flippable <= kappa


def test_breadth_first_layers_are_deterministic():
    first = explore(fixtures.get("thrice_punctured_disk"), radius=3).layer_sizes()
    again = explore(fixtures.get("thrice_punctured_disk"), radius=3).layer_sizes()
    assert first == again


def test_exploration_budget():
    with pytest.raises(SearchBudgetExceeded):
        explore(fixtures.get("octagon"), budget=20)


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("FLIPFORGE_BUDGET", "7")
    assert default_budget() == 7
    with pytest.raises(SearchBudgetExceeded):
        distance(fixtures.get("polygon_10"), MarkedTriangulation.at(fixtures.get("polygon_10"))
                 .follow([0, 1, 2, 3, 4, 5]))


def test_plain_triangulations_of_other_surfaces_need_a_reference():
    T = fixtures.get("punctured_torus")
    with pytest.raises(TypeError):
        distance(T, T.flip(0))
