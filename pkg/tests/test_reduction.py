import pytest

from pst.errors import BadParameters, BudgetExceeded, InputError, TooLarge
from pst.generators import random_plane_graph
from pst.graph import PlanarGraph
from pst.oracles import dreyfus_wagner
from pst.reduction import (GridTilingInstance, ReductionConstants, build_lvg, build_reduction, build_vg,
                           classify, expected_vertex_count, random_grid_tiling,
                           solve_grid_tiling_bruteforce, subdivide_to_unit_weights, verify_gadget_lemmas)

M = 41
Mp = [M**i for i in range(8)]


def test_grid_tiling_bruteforce_examples():
    yes = GridTilingInstance(2, 2, {(1, 1): {(1, 2)}, (1, 2): {(1, 1)}, (2, 1): {(2, 2)}, (2, 2): {(2, 1)}})
    xs, ys = solve_grid_tiling_bruteforce(yes)
    assert (xs, ys) == ((1, 2), (2, 1)) and yes.satisfied_by(xs, ys)
    no = GridTilingInstance(2, 2, {(1, 1): {(1, 1)}, (1, 2): {(2, 2)}, (2, 1): {(1, 1)}, (2, 2): {(1, 1)}})
    assert solve_grid_tiling_bruteforce(no) is None


def test_grid_tiling_validation_and_json():
    with pytest.raises(InputError):
        GridTilingInstance(2, 1, {(1, 1): {(3, 1)}})
    with pytest.raises(InputError):
        GridTilingInstance(2, 1, {(2, 2): {(1, 1)}})
    gt = random_grid_tiling(2, 2, seed=4, satisfiable=True)
    assert GridTilingInstance.from_dict(gt.to_dict()) == gt
    with pytest.raises(TooLarge):
        solve_grid_tiling_bruteforce(GridTilingInstance(10, 8, {}), budget=1000)


def test_padding():
    gt = GridTilingInstance(3, 1, {(1, 1): {(3, 3)}})
    assert gt.padded().n == 4 and gt.padded().cells == gt.cells
    assert GridTilingInstance(1, 1, {}).padded().n == 2


def test_constants():
    c = ReductionConstants.of(2, 2)
    assert (c.N, c.L, c.t, c.M) == (4, 2, 4, 320)
    m = c.Mi
    assert c.K_M == 2 * 4 * 4 * m(7) + 12 * m(6) + 8 * (2 * m(5) + 6 * m(4) + 4 * m(3) + m(2))
    assert ReductionConstants.of(2, 1).M == 81
    with pytest.raises(BadParameters):
        ReductionConstants.of(3, 2)


def test_vg_examples():
    g = build_vg(2, {1, 2}, M)
    y, z, (w,) = g.portals["y"], g.portals["z"], g.portals["w"]
    for i in (0, 1):
        assert dreyfus_wagner(g.graph, [y[i], z[i], w]).weight == Mp[5] + Mp[4] + 2 * Mp[3]
    assert dreyfus_wagner(g.graph, [y[0], z[1]]).weight == Mp[4] + Mp[2] + 3 * Mp[3]


def test_vg_without_selector_is_expensive():
    g = build_vg(2, {2}, M)
    y, z, (w,) = g.portals["y"], g.portals["z"], g.portals["w"]
    assert dreyfus_wagner(g.graph, [y[0], z[0], w]).weight > Mp[5] + Mp[4] + 2 * Mp[3]


def test_lvg_example():
    N, L = 2, 2
    F = L * Mp[5] + L * (N - 1) * Mp[4] + N * Mp[3] + Mp[2]
    g = build_lvg(N, L, [{1}, {1, 2}], M)
    p, q, w = g.portals["p"], g.portals["q"], g.portals["w"]
    assert dreyfus_wagner(g.graph, [p[0], q[0], w[0]]).weight == F
    assert dreyfus_wagner(g.graph, [p[1], q[1], w[0]]).weight > F
    assert dreyfus_wagner(g.graph, [p[1], q[1], w[1]]).weight == F
    assert dreyfus_wagner(g.graph, [p[0], q[1], w[1]]).weight > F


def test_gadget_lemma_sweep_small():
    rep = verify_gadget_lemmas(2, 1)
    assert rep.ok
    assert all(c.checked > 0 for c in rep.clauses.values())
    with pytest.raises(TooLarge):
        verify_gadget_lemmas(5, 1)


@pytest.mark.parametrize("n,k", [(2, 2), (2, 3), (4, 2)])
def test_vertex_count(n, k):
    gt = random_grid_tiling(n, k, seed=0, satisfiable=True, density=0.2)
    out = build_reduction(gt)
    assert out.graph.n == expected_vertex_count(n, k)
    assert out.graph.n - out.graph.m + len(out.graph.faces) == 2


def test_reduction_shape_n2_k2():
    out = build_reduction(random_grid_tiling(2, 2, seed=1, satisfiable=True))
    c = out.constants
    assert (out.graph.n, len(out.terminals), len(out.terminal_faces)) == (475, 15, 3)
    assert out.K_M == c.K_M
    assert max(e.w for e in out.graph.edges) <= c.t * c.Mi(7)
    covered = set().union(*(out.graph.faces[f].vertex_set for f in out.terminal_faces))
    assert set(out.terminals) <= covered
    side = out.sidecar()
    assert int(side["K_M"]) == c.K_M and "portal_directory" in side


def test_trivial_grid_is_padded_and_classified():
    out = build_reduction(GridTilingInstance(1, 1, {(1, 1): {(1, 1)}}))
    assert out.constants.n == 2
    assert out.graph.n == expected_vertex_count(2, 1)
    weight, within = classify(out)
    assert within and weight <= out.K_M


def test_empty_single_cell_exceeds_budget():
    weight, within = classify(build_reduction(GridTilingInstance(2, 1, {})))
    assert not within


def test_subdivision_of_unit_graph_is_identity():
    g = PlanarGraph.from_rotation(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)], [[0, 5], [2, 1], [4, 3]])
    sub = subdivide_to_unit_weights(g, 10)
    assert sub.graph == g


def test_subdivision_of_heavy_edge():
    g = PlanarGraph.from_rotation(2, [(0, 1, 3)], [[0], [1]])
    sub = subdivide_to_unit_weights(g, 10)
    assert (sub.graph.n, sub.graph.m) == (4, 3)
    assert all(e.w == 1 for e in sub.graph.edges)
    with pytest.raises(BudgetExceeded):
        subdivide_to_unit_weights(g, 2)


def test_subdivision_keeps_faces_and_distances():
    g, _ = random_plane_graph(7, 11, keep=0.5, max_weight=4)
    sub = subdivide_to_unit_weights(g, 1000)
    assert len(sub.graph.faces) == len(g.faces)
    images = {sub.face_image(g, f) for f in range(len(g.faces))}
    assert len(images) == len(g.faces)
    ts = [0, g.n - 1, g.n // 2]
    assert dreyfus_wagner(g, ts).weight == dreyfus_wagner(sub.graph, ts).weight
