import numpy as np
import pytest

from flipforge import fixtures
from flipforge.arcs import cut_pieces
from flipforge.census import build_quotient, canonical_code
from flipforge.constructions import (MergedForm, _named_arc_ids, canonical_genus, canonical_path,
                                     canonical_seashell, find_arc_to_boundary,
                                     find_cross_boundary_arc, find_nonseparating_arc,
                                     genus_split_arcs, merge_step, puncture_split_arcs,
                                     separation_signatures, spanning_tree_loop)
from flipforge.errors import HypothesisUnmet, ShapeMismatch
from flipforge.explorer import MarkedTriangulation, random_walk
from flipforge.surface import SurfaceSig, standard_triangulation


def cut_signature(T, arc):
    return sorted((P.triangulation.sig.g, P.triangulation.sig.b, P.triangulation.sig.s,
                   P.triangulation.sig.p) for P in cut_pieces(T, [arc]))


def test_spanning_loop_equality_on_the_thrice_punctured_torus():
    T = standard_triangulation(1, 0, 3)
    a, cert = spanning_tree_loop(T, 2)
    assert cert.measured == cert.claimed == 14
    assert separation_signatures(T, a) == [(0, 1, 2, 1), (1, 1, 0, 1)]


@pytest.mark.parametrize("point", [0, 1, 2])
def test_spanning_loop_bound_and_pieces_at_every_point(point):
    T = standard_triangulation(1, 0, 3)
    a, cert = spanning_tree_loop(T, point)
    assert cert.ok
    assert separation_signatures(T, a) == [(0, 1, 2, 1), (1, 1, 0, 1)]


def test_spanning_loop_needs_two_punctures():
    with pytest.raises(HypothesisUnmet):
        spanning_tree_loop(fixtures.get("punctured_torus"))
    with pytest.raises(HypothesisUnmet):
        spanning_tree_loop(fixtures.get("four_punctured_sphere"))


def test_nonseparating_arc_on_genus_pieces():
    for g in (1, 2, 3):
        T = fixtures.genus_piece(g)
        a = find_nonseparating_arc(T)
        (piece,) = cut_pieces(T, [a])
        assert piece.triangulation.sig.g == g - 1


@pytest.mark.parametrize("key", [(1, 1, 0, 1), (1, 1, 0, 2), (1, 1, 0, 3)])
def test_nonseparating_arc_exists_across_the_census(small_censuses, key):
    for T in small_censuses[key + (True,)].representatives:
        a = find_nonseparating_arc(T)
        assert cut_signature(T, a)[0][0] == 0


def test_cross_boundary_arc_on_cylinder_and_two_holed_torus():
    C = fixtures.get("cylinder")
    a = find_cross_boundary_arc(C)
    assert cut_signature(C, a) == [(0, 1, 0, 4)]
    T = fixtures.get("two_holed_torus")
    a = find_cross_boundary_arc(T)
    assert cut_signature(T, a) == [(1, 1, 0, 4)]


def test_cross_boundary_arc_exists_across_the_two_plus_two_census():
    rep = build_quotient(SurfaceSig(0, 2, 0, 4), seed=standard_triangulation(0, 2, 0, [2, 2]))
    assert rep.vertices > 1
    for T in rep.representatives:
        a = find_cross_boundary_arc(T)
        ((g, b, s, p),) = cut_signature(T, a)
        assert b == 1


def test_arc_to_boundary():
    T = fixtures.get("punctured_monogon")
    assert find_arc_to_boundary(T) == 0
    S = canonical_seashell(3)
    assert sorted(S.arc_endpoints(find_arc_to_boundary(S))) == [0, 1]


def test_arc_to_boundary_across_the_twice_punctured_census(small_censuses):
    for T in small_censuses[(0, 1, 2, 1, True)].representatives:
        u, v = T.arc_endpoints(find_arc_to_boundary(T))
        assert (u in T.boundary_vertices) != (v in T.boundary_vertices)


def test_finders_check_their_hypotheses():
    with pytest.raises(HypothesisUnmet):
        find_nonseparating_arc(fixtures.get("hexagon"))
    with pytest.raises(HypothesisUnmet):
        find_cross_boundary_arc(fixtures.get("hexagon"))
    with pytest.raises(HypothesisUnmet):
        find_arc_to_boundary(fixtures.get("punctured_torus"))


def test_seashells():
    one = canonical_seashell(1)
    assert one.flippable_arcs() == []
    assert build_quotient(one.sig).vertices == 1
    three = canonical_seashell(3)
    three.validate()
    assert (three.sig.s, three.sig.p) == (3, 1)
    ends = {tuple(sorted(three.arc_endpoints(a))) for a in range(three.kappa)}
    assert {(0, 1), (1, 2)} <= ends
    assert canonical_code(canonical_seashell(3)) == canonical_code(three)


def test_seashell_is_a_census_entry(small_censuses):
    rep = small_censuses[(0, 1, 3, 1, True)]
    assert canonical_code(canonical_seashell(3)) in set(rep.codes)


def test_merge_steps_reach_the_seashell():
    for first, second in [((1,), (2, 3)), ((1, 2), (3,)), ((1, 3), (2, 4)), ((2,), (1, 3))]:
        form = MergedForm((), first, second)
        X = form.triangulation()
        while not form.finished:
            prefix_names = {f"{x}{k}" for k in range(len(form.prefix)) for x in "uva"}
            frozen = _named_arc_ids(form.triangles(), form.triangulation(), X, prefix_names)
            path, form = merge_step(X, form)
            assert len(path) <= 6
            assert not frozen & set(path.steps)
            X = path.end
        assert canonical_code(X) == canonical_code(canonical_seashell(len(first + second)))


def test_merge_lengths_on_four_punctures():
    form = MergedForm((), (1, 3), (2, 4))
    X = form.triangulation()
    lengths = []
    while not form.finished:
        path, form = merge_step(X, form)
        lengths.append(len(path))
        X = path.end
    assert lengths == [5, 4, 3]


def test_finished_form_needs_no_flips():
    form = MergedForm((1, 2), (3,), ())
    path, after = merge_step(form.triangulation(), form)
    assert path.steps == () and after == form


def test_merge_step_rejects_other_shapes():
    with pytest.raises(ShapeMismatch):
        merge_step(canonical_seashell(3), MergedForm((), (1,), (2, 3)))


def test_genus_split_pieces():
    for g, inner in ((2, 1), (3, 2)):
        b, b2, cert = genus_split_arcs(fixtures.genus_piece(g))
        assert cert.ok and cert.claimed == 20 * g - 4
        assert cert.details["inner_genus"] == inner
        assert sorted((inner, g - inner)) == sorted((g - g // 2, g // 2))


def test_puncture_split_pieces():
    for m in (2, 3, 4, 5):
        b, b2, cert = puncture_split_arcs(fixtures.punctured_disk(m))
        assert cert.ok and cert.claimed == 10 * m - 10
        assert cert.details["inner_punctures"] in (m // 2, m - m // 2)


def test_canonical_input_gives_an_empty_path():
    assert canonical_path(canonical_seashell(4)).path.steps == ()
    assert canonical_path(canonical_genus(2)).path.steps == ()


def test_holed_torus_paths_are_short(small_censuses):
    for T in small_censuses[(1, 1, 0, 1, True)].representatives:
        rep = canonical_path(T)
        assert rep.measured <= 5


def test_random_four_punctured_disks_reach_the_seashell():
    rng = np.random.default_rng(14)
    target = canonical_code(canonical_seashell(4))
    for _ in range(10):
        M = random_walk(MarkedTriangulation.at(fixtures.punctured_disk(4)), 20, rng)
        rep = canonical_path(M.triangulation)
        assert rep.ok
        assert canonical_code(rep.path.end) == target
        assert all(k <= 6 for k in rep.merge_lengths)


def test_canonical_path_checks_its_hypotheses():
    with pytest.raises(HypothesisUnmet):
        canonical_path(fixtures.get("hexagon"))
    with pytest.raises(HypothesisUnmet):
        canonical_path(fixtures.punctured_disk(3, labeled=False))
