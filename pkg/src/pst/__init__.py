"""Exact Steiner trees in planar graphs with terminals on few faces."""

from .graph import Edge, Graph, PlanarGraph
from .io import SteinerInstance
from .oracles import dreyfus_wagner, exhaustive_min_steiner, one_face_steiner
from .solver import SolverConfig, solve_steiner_tree, steiner

__version__ = "0.1.0"

__all__ = [
    "Edge", "Graph", "PlanarGraph", "SteinerInstance", "SolverConfig",
    "dreyfus_wagner", "exhaustive_min_steiner", "one_face_steiner", "solve_steiner_tree", "steiner",
]
