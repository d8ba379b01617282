import pytest
from hypothesis import given, settings, strategies as st

from pst.errors import Infeasible
from pst.generators import chained_instance, random_cycle_instance, random_instance
from pst.graph import PlanarGraph
from pst.io import SteinerInstance
from pst.oracles import dreyfus_wagner, exhaustive_block_forest
from pst.partition import Partition
from pst.preprocess import make_subcubic_2connected
from pst.solver import PbsfInstance, SolverConfig, realized_partition, solve_steiner_tree, steiner


def triangle_instance():
    g = PlanarGraph.from_rotation(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)], [[0, 5], [2, 1], [4, 3]])
    return SteinerInstance(g, (0, 1, 2), (0,))


def test_triangle():
    res = solve_steiner_tree(triangle_instance())
    assert res.weight == 2 and len(res.edges) == 2


def test_no_terminals():
    inst = triangle_instance()
    assert solve_steiner_tree(SteinerInstance(inst.graph, (), ())).weight == 0


def test_split_terminals_are_infeasible():
    g = PlanarGraph.from_rotation(4, [(0, 1, 1), (2, 3, 1)], [[0], [1], [2], [3]])
    with pytest.raises(Infeasible):
        solve_steiner_tree(SteinerInstance(g, (0, 3), (0, 1)))


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(c0=0)


def test_instance_requires_terminals_on_faces():
    inst = random_instance(12, 2, 1, seed=5, keep=0.9)
    face = inst.graph.faces[inst.faces[0]].vertex_set
    off = next(v for v in range(inst.graph.n) if v not in face)
    with pytest.raises(ValueError):
        PbsfInstance(inst.graph, (), Partition.of([]), frozenset({off}), inst.faces)


@settings(max_examples=20, deadline=None)
@given(st.integers(5, 9), st.integers(2, 5), st.integers(1, 3), st.integers(0, 10**6))
def test_matches_dreyfus_wagner(n, k, faces, seed):
    inst = random_instance(n, k, faces, seed, keep=0.5)
    res = solve_steiner_tree(inst)
    assert res.weight == dreyfus_wagner(inst.graph, inst.terminals).weight
    assert inst.graph.weight_of(res.edges) == res.weight


@pytest.mark.parametrize("seed", range(4))
def test_recursion_on_cycles(seed):
    inst = random_cycle_instance(5, 3, seed)
    res = solve_steiner_tree(inst, SolverConfig(c0=2, sep_max=10**6))
    assert res.weight == dreyfus_wagner(inst.graph, inst.terminals).weight
    assert res.stats.recursion_nodes > 0 and not res.stats.truncated


@pytest.mark.parametrize("c0", [1, 2, 8])
def test_threshold_does_not_change_answer(c0):
    inst = chained_instance(2, 4, seed=3)
    expected = dreyfus_wagner(inst.graph, inst.terminals).weight
    assert solve_steiner_tree(inst, SolverConfig(c0=c0, sep_max=1)).weight == expected


def test_parallel_matches_serial():
    inst = chained_instance(3, 4, seed=1)
    a = solve_steiner_tree(inst, SolverConfig(c0=1, sep_max=1))
    b = solve_steiner_tree(inst, SolverConfig(c0=1, sep_max=1, parallel=True, threads=2))
    assert a.weight == b.weight and a.edges == b.edges


@pytest.mark.parametrize("seed", range(6))
def test_block_forest_against_brute_force(seed):
    inst = random_cycle_instance(5, 2, seed)
    pp = make_subcubic_2connected(inst.graph, inst.terminals, inst.faces)
    g = pp.graph
    face = g.faces[pp.faces[0]]
    B = tuple(sorted(face.vertex_set - set(pp.terminals)))[:2]
    if len(B) < 2:
        pytest.skip("cycle too short for a two-vertex boundary")
    for blocks in ([list(B)], [[B[0]], [B[1]]]):
        pi = Partition.of(blocks)
        res = steiner(PbsfInstance(g, B, pi, frozenset(pp.terminals), pp.faces))
        brute = exhaustive_block_forest(g, B, blocks, pp.terminals)
        if brute is None:
            assert not res.feasible
            continue
        assert res.weight == brute[0]
        assert realized_partition(g, res.edges, B) == pi
