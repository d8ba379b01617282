import pytest
from hypothesis import given, strategies as st

from pst.errors import BadParameters, BadRoot, NonIntegralWeight
from pst.flower import (IntervalVertex, build_flower, binary_tree, canonical_forest, closed_form_distance,
                        edge_weight, flower_with_scale, gamma_window, interval_distance, iv,
                        verify_flower_theorem, verify_metric, verify_triangle_lemma)
from pst.oracles import portal_anchored_forest_min


def test_edge_weights():
    assert [edge_weight(8, d) for d in (1, 2, 3, 4, 7)] == [8, 4, 4, 2, 2]
    with pytest.raises(NonIntegralWeight):
        edge_weight(2, 4)


def test_interval_vertex():
    p = iv(6, 1, 8)
    assert p.size == 4 and p.members() == (6, 7, 0, 1)
    assert p.contains(iv(7, 0, 8))
    assert set(p.children()) == {iv(7, 1, 8), iv(6, 0, 8)}
    with pytest.raises(ValueError):
        IntervalVertex(3, 1)
    with pytest.raises(ValueError):
        iv(0, 4, 8)


def test_small_flower_shape():
    f = build_flower(4)
    assert (f.graph.n, f.graph.m) == (8, 8)
    assert f.scale == 1 and f.optimum == 4
    assert set(f.terminals) <= f.graph.faces[f.carpel].vertex_set


def test_flower_t8_scale8():
    f = build_flower(8, 8)
    assert (f.graph.n, f.graph.m) == (32, 48)
    assert {e.w for e in f.graph.edges} == {4, 8}
    assert len(f.portals) == 8
    assert all(f.vertices[p].size == 4 for p in f.portals)


@pytest.mark.parametrize("t,scale", [(6, None), (2, None), (8, 1), (8, 3)])
def test_bad_flower_parameters(t, scale):
    with pytest.raises(BadParameters):
        build_flower(t, scale)


def test_non_power_scale_allowed_when_divisible():
    f = flower_with_scale(8, 6)
    assert f.optimum == (2 * 8 - 4) * 6
    assert portal_anchored_forest_min(f.graph, f.terminals, f.portals) == f.optimum


@pytest.mark.parametrize("t", [4, 8])
def test_canonical_forest_is_optimal(t):
    f = build_flower(t)
    for a in range(1, t // 2 + 1):
        assert canonical_forest(f, a).weight == f.optimum
    assert portal_anchored_forest_min(f.graph, f.terminals, f.portals) == f.optimum


def test_canonical_forest_root_range():
    f = build_flower(8)
    with pytest.raises(BadRoot):
        canonical_forest(f, 0)
    with pytest.raises(BadRoot):
        canonical_forest(f, 5)


def test_binary_tree_weights():
    g = gamma_window(0, 7, 8)
    assert binary_tree(g, 0, 7).weight == 14 * g.scale
    assert binary_tree(g, 0, 3).weight == 6 * g.scale
    with pytest.raises(BadRoot):
        binary_tree(g, 0, 2)


def test_flower_theorem_t4():
    rep = verify_flower_theorem(4)
    assert rep.passed and rep.structure_ok
    assert rep.relaxation_min_non_opposite > rep.optimum


def test_triangle_lemma_small():
    rep = verify_triangle_lemma(2)
    assert rep.passed and all(p.certified for p in rep.points)


def test_metric_small():
    assert verify_metric(6, 4).passed


window = gamma_window(0, 11, 8)


@given(st.integers(0, 11), st.integers(1, 8), st.integers(0, 11), st.integers(1, 8))
def test_closed_form_matches_dijkstra(a, s, c, r):
    if a + s - 1 > 11 or c + r - 1 > 11:
        return
    p, q = IntervalVertex(a, a + s - 1), IntervalVertex(c, c + r - 1)
    top = IntervalVertex(min(p.a, q.a), max(p.b, q.b))
    if top.size > 8:
        return
    assert interval_distance(window, p, q) == closed_form_distance(p, q, window.scale)
