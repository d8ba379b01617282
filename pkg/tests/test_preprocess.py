import pytest
from hypothesis import given, settings, strategies as st

from pst.errors import Disconnected, NotASolution, TerminalNotOnFace
from pst.generators import random_instance
from pst.graph import PlanarGraph
from pst.oracles import dreyfus_wagner
from pst.preprocess import check_subcubic_2connected, lift_solution, make_subcubic_2connected


def path_graph():
    # 0 - 1 - 2, a tree: every edge is a bridge
    return PlanarGraph.from_rotation(3, [(0, 1, 2), (1, 2, 5)], [[0], [1, 2], [3]])


def test_tree_becomes_biconnected():
    g = path_graph()
    pp = make_subcubic_2connected(g, [0, 2], [0])
    assert check_subcubic_2connected(pp.graph)
    sol = dreyfus_wagner(pp.graph, pp.terminals)
    assert sol.weight == 7
    assert sorted(lift_solution(pp.backmap, pp.graph, sol.edges)) == [0, 1]


def test_single_edge():
    g = PlanarGraph.from_rotation(2, [(0, 1, 4)], [[0], [1]])
    pp = make_subcubic_2connected(g, [0, 1], [0])
    assert check_subcubic_2connected(pp.graph)
    assert dreyfus_wagner(pp.graph, pp.terminals).weight == 4


def test_disconnected_rejected():
    g = PlanarGraph.from_rotation(4, [(0, 1, 1), (2, 3, 1)], [[0], [1], [2], [3]])
    with pytest.raises(Disconnected):
        make_subcubic_2connected(g, [0, 1], [0])


def test_terminal_must_be_on_a_face():
    inst = random_instance(12, 2, 1, seed=5, keep=0.9)
    face = inst.graph.faces[inst.faces[0]].vertex_set
    off = next(v for v in range(inst.graph.n) if v not in face)
    with pytest.raises(TerminalNotOnFace):
        make_subcubic_2connected(inst.graph, [off], inst.faces)


def test_lift_rejects_non_solution():
    pp = make_subcubic_2connected(path_graph(), [0, 2], [0])
    with pytest.raises(NotASolution):
        lift_solution(pp.backmap, pp.graph, [])


@settings(max_examples=30)
@given(st.integers(5, 14), st.integers(1, 5), st.integers(1, 3), st.integers(0, 10**6))
def test_preprocessing_preserves_optimum(n, k, faces, seed):
    inst = random_instance(n, k, faces, seed, keep=0.4)
    pp = make_subcubic_2connected(inst.graph, inst.terminals, inst.faces)
    assert check_subcubic_2connected(pp.graph)
    for t in pp.terminals:
        assert any(t in pp.graph.faces[i].vertex_set for i in pp.faces)
    before = dreyfus_wagner(inst.graph, inst.terminals).weight
    sol = dreyfus_wagner(pp.graph, pp.terminals)
    assert sol.weight == before
    lifted = lift_solution(pp.backmap, pp.graph, sol.edges)
    assert inst.graph.weight_of(lifted) == before
