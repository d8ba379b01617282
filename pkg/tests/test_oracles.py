import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pst.errors import TerminalCapExceeded, TerminalOffFace, Unreachable
from pst.generators import outer_face_index, random_plane_graph
from pst.graph import Graph, PlanarGraph
from pst.oracles import (DistanceTable, dreyfus_wagner, exhaustive_block_forest, exhaustive_min_steiner,
                         one_face_steiner, portal_anchored_forest_min, steiner_with_forced_edges)


def star():
    # centre 0 joined to 1, 2, 3 by weight 2; outer cycle 1-2-3 with weight 3
    return Graph.from_edges(4, [(0, 1, 2), (0, 2, 2), (0, 3, 2), (1, 2, 3), (2, 3, 3), (3, 1, 3)])


def test_star_beats_outer_path():
    sol = dreyfus_wagner(star(), [1, 2, 3])
    assert sol.weight == 6 and sorted(sol.edges) == [0, 1, 2]
    assert exhaustive_min_steiner(star(), [1, 2, 3]).weight == 6


def test_trivial_terminal_sets():
    g = star()
    with pytest.raises(ValueError):
        dreyfus_wagner(g, [])
    assert dreyfus_wagner(g, [2]).weight == 0
    assert dreyfus_wagner(g, [1, 3]).weight == 3


def test_unreachable():
    g = Graph.from_edges(4, [(0, 1, 1), (2, 3, 1)])
    with pytest.raises(Unreachable):
        dreyfus_wagner(g, [0, 3])


def test_terminal_cap():
    g = Graph.from_edges(6, [(i, i + 1, 1) for i in range(5)])
    with pytest.raises(TerminalCapExceeded):
        dreyfus_wagner(g, range(6), cap=4)


def test_huge_weights_take_the_exact_path():
    big = 3 * 10**25
    g = Graph.from_edges(4, [(0, 1, big), (1, 2, big + 1), (0, 3, 1), (3, 2, big)])
    table = DistanceTable(g)
    assert table.dtype is object
    assert dreyfus_wagner(g, [0, 2]).weight == big + 1


def test_large_common_factor_stays_in_int64():
    g = Graph.from_edges(3, [(0, 1, 2**62), (1, 2, 2**62), (0, 2, 3 * 2**62)])
    assert DistanceTable(g).dtype is np.int64
    assert dreyfus_wagner(g, [0, 2]).weight == 2 * 2**62


def test_zero_weight_edges():
    g = Graph.from_edges(3, [(0, 1, 0), (1, 2, 0), (0, 2, 5)])
    assert dreyfus_wagner(g, [0, 2]).weight == 0


def test_forced_and_banned_edges():
    g = star()
    assert steiner_with_forced_edges(g, [1, 2], forced=[5]) == 6
    assert steiner_with_forced_edges(g, [1, 2], forced=[], banned_edges=[3]) == 4


def test_block_forest_realizes_partition():
    # path 0-1-2-3 with boundary {0, 3}
    g = Graph.from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)])
    w, _ = exhaustive_block_forest(g, [0, 3], [[0, 3]], [])
    assert w == 3
    w, _ = exhaustive_block_forest(g, [0, 3], [[0], [3]], [1, 2])
    assert w == 2
    assert exhaustive_block_forest(g, [0, 3], [[0], [3]], [])[0] == 0


def test_portal_forest():
    g = Graph.from_edges(4, [(0, 1, 4), (1, 2, 1), (2, 3, 4)])
    assert portal_anchored_forest_min(g, [1, 2], [0, 3]) == 1 + 4


def test_one_face_rejects_off_face_terminal():
    g, pos = random_plane_graph(9, 4, keep=0.8)
    outer = g.faces[outer_face_index(g, pos)]
    inside = next(v for v in range(g.n) if v not in outer.vertex_set)
    with pytest.raises(TerminalOffFace):
        one_face_steiner(g, [inside, outer.vertices_in_order[0]], outer)


def _random_case(seed, n_terms):
    rng = np.random.default_rng(seed)
    g, _ = random_plane_graph(int(rng.integers(4, 10)), seed, keep=float(rng.uniform(0.2, 0.7)))
    ts = [int(x) for x in rng.choice(g.n, size=min(g.n, n_terms), replace=False)]
    return g, ts


@given(st.integers(0, 10**6), st.integers(2, 5))
def test_dreyfus_wagner_matches_brute_force(seed, k):
    g, ts = _random_case(seed, k)
    if g.m > 20:
        return
    sol = dreyfus_wagner(g, ts)
    assert sol.weight == exhaustive_min_steiner(g, ts, max_edges=20).weight
    assert g.weight_of(sol.edges) == sol.weight
    sub = Graph(g.n, tuple(g.edges[e] for e in sol.edges))
    comps = [c for c in sub.components() if set(ts) & set(c)]
    assert len(comps) == 1 and set(ts) <= set(comps[0])


@settings(max_examples=25)
@given(st.integers(0, 10**6), st.integers(2, 7))
def test_one_face_matches_dreyfus_wagner(seed, k):
    g, pos = random_plane_graph(int(np.random.default_rng(seed).integers(5, 14)), seed, keep=0.5)
    face = g.faces[outer_face_index(g, pos)]
    verts = sorted(face.vertex_set)
    rng = np.random.default_rng(seed + 1)
    ts = [int(x) for x in rng.choice(verts, size=min(k, len(verts)), replace=False)]
    assert one_face_steiner(g, ts, face).weight == dreyfus_wagner(g, ts).weight
