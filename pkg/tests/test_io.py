import json

import pytest

from pst.errors import InputError, MalformedRotation
from pst.generators import random_instance
from pst.graph import PlanarGraph
from pst.io import SteinerInstance, dumps_instance, instance_to_dict, loads_instance, to_dot


def test_round_trip_preserves_instance():
    inst = random_instance(10, 4, 2, seed=7)
    back = loads_instance(dumps_instance(inst))
    assert back.graph == inst.graph
    assert back.terminals == inst.terminals
    assert [back.graph.faces[f].edge_set for f in back.faces] == \
           [inst.graph.faces[f].edge_set for f in inst.faces]


def test_weights_beyond_64_bits_survive():
    big = 10**30 + 7
    g = PlanarGraph.from_rotation(2, [(0, 1, big)], [[0], [1]])
    inst = SteinerInstance(g, (0, 1), (0,))
    text = dumps_instance(inst)
    assert json.loads(text)["edges"][0][2] == str(big)
    assert loads_instance(text).graph.edges[0].w == big


def test_bad_json_is_input_error():
    with pytest.raises(InputError):
        loads_instance("{not json")
    with pytest.raises(InputError):
        loads_instance(json.dumps({"vertices": 2}))


def test_bad_rotation_is_input_error():
    d = {"vertices": 2, "edges": [[0, 1, "1"]], "rotation": [[0], []]}
    with pytest.raises(MalformedRotation):
        loads_instance(json.dumps(d))


def test_unknown_face_rejected():
    inst = random_instance(8, 3, 1, seed=1)
    d = instance_to_dict(inst)
    d["terminal_faces"] = [[0]]
    with pytest.raises(InputError):
        loads_instance(json.dumps(d))


def test_dot_marks_terminals_and_highlight():
    inst = random_instance(6, 2, 1, seed=2)
    dot = to_dot(inst.graph, inst.terminals, highlight=[0])
    assert dot.startswith("graph G {") and dot.rstrip().endswith("}")
    assert dot.count(" -- ") == inst.graph.m
