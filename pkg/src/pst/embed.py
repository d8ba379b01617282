"""Building rotation systems from drawings.

Generators know where they put things, so they describe each vertex by a
point and let the rotation follow from the angles of incident edges.  Edges
whose ends need a direction that differs from the straight segment (curved
or glued pieces) carry explicit angles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .graph import PlanarGraph


@dataclass
class EmbeddingBuilder:
    positions: list[tuple[float, float]] = field(default_factory=list)
    edges: list[tuple[int, int, int]] = field(default_factory=list)
    angles: list[tuple[float, float]] = field(default_factory=list)

    def add_vertex(self, x: float, y: float) -> int:
        self.positions.append((float(x), float(y)))
        return len(self.positions) - 1

    def add_edge(self, u: int, v: int, w: int, angle_u: float | None = None, angle_v: float | None = None) -> int:
        (xu, yu), (xv, yv) = self.positions[u], self.positions[v]
        if angle_u is None:
            angle_u = math.atan2(yv - yu, xv - xu)
        if angle_v is None:
            angle_v = math.atan2(yu - yv, xu - xv)
        self.edges.append((u, v, int(w)))
        self.angles.append((angle_u, angle_v))
        return len(self.edges) - 1

    @property
    def n(self) -> int:
        return len(self.positions)

    def rotation(self) -> list[list[int]]:
        around: list[list[tuple[float, int]]] = [[] for _ in range(self.n)]
        for i, ((u, v, _), (au, av)) in enumerate(zip(self.edges, self.angles)):
            around[u].append((au % (2 * math.pi), 2 * i))
            around[v].append((av % (2 * math.pi), 2 * i + 1))
        rot = []
        for v, lst in enumerate(around):
            lst.sort()
            for (a1, _), (a2, _) in zip(lst, lst[1:]):
                if abs(a1 - a2) < 1e-12:
                    raise ValueError(f"two edge-ends at vertex {v} share the angle {a1}")
            rot.append([d for _, d in lst])
        return rot

    def build(self) -> PlanarGraph:
        return PlanarGraph.from_rotation(self.n, self.edges, self.rotation())


def signed_area(points: list[tuple[float, float]]) -> float:
    s = 0.0
    for (x1, y1), (x2, y2) in zip(points, points[1:] + points[:1]):
        s += x1 * y2 - x2 * y1
    return s / 2
