"""JSON and DOT serialization of planar Steiner instances."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable

from .errors import InputError, TerminalNotOnFace
from .graph import PlanarGraph


@dataclass(frozen=True)
class SteinerInstance:
    """A plane graph, its terminals and the indices of the terminal faces."""

    graph: PlanarGraph
    terminals: tuple[int, ...]
    faces: tuple[int, ...] = ()
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def face_objects(self):
        return [self.graph.faces[i] for i in self.faces]

    def check_cover(self) -> None:
        covered = set()
        for f in self.face_objects():
            covered |= f.vertex_set
        missing = [t for t in self.terminals if t not in covered]
        if missing and self.graph.m > 0:
            raise TerminalNotOnFace(f"terminals {missing} lie on no declared terminal face")


def graph_to_dict(g: PlanarGraph) -> dict[str, Any]:
    return {
        "vertices": g.n,
        "edges": [[e.u, e.v, str(e.w)] for e in g.edges],
        "rotation": [list(r) for r in g.rotation],
    }


def instance_to_dict(inst: SteinerInstance) -> dict[str, Any]:
    d = graph_to_dict(inst.graph)
    d["terminals"] = list(inst.terminals)
    d["terminal_faces"] = [sorted(inst.graph.faces[i].edge_set) for i in inst.faces]
    return d


def _match_face(g: PlanarGraph, edge_ids: Iterable[int], terminals: set[int]) -> int:
    want = frozenset(int(x) for x in edge_ids)
    hits = [i for i, f in enumerate(g.faces) if f.edge_set == want]
    if not hits:
        raise InputError(f"no face has edge set {sorted(want)}")
    # two faces can share an edge set (a bare cycle); prefer the one covering more terminals
    return max(hits, key=lambda i: (len(g.faces[i].vertex_set & terminals), -i))


def instance_from_dict(d: dict[str, Any]) -> SteinerInstance:
    try:
        n = int(d["vertices"])
        edges = [(int(u), int(v), int(str(w))) for u, v, w in d["edges"]]
        rotation = d["rotation"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed graph JSON: {exc}") from exc
    g = PlanarGraph.from_rotation(n, edges, rotation)
    terminals = tuple(int(t) for t in d.get("terminals", []))
    for t in terminals:
        if not 0 <= t < n:
            raise InputError(f"terminal {t} out of range")
    tset = set(terminals)
    faces = tuple(_match_face(g, f, tset) for f in d.get("terminal_faces", []))
    return SteinerInstance(g, terminals, faces)


def dumps_instance(inst: SteinerInstance, **kw) -> str:
    return json.dumps(instance_to_dict(inst), **kw)


def loads_instance(text: str) -> SteinerInstance:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    return instance_from_dict(d)


def to_dot(g: PlanarGraph, terminals: Iterable[int] = (), portals: Iterable[int] = (),
           labels: dict[int, str] | None = None, highlight: Iterable[int] = ()) -> str:
    terminals, portals, highlight = set(terminals), set(portals), set(highlight)
    lines = ["graph G {", "  node [shape=circle, fontsize=8];"]
    for v in range(g.n):
        attrs = []
        if labels and v in labels:
            attrs.append(f'label="{labels[v]}"')
        if v in terminals:
            attrs.append("style=filled, fillcolor=black, fontcolor=white")
        elif v in portals:
            attrs.append("shape=box")
        lines.append(f"  {v}" + (f" [{', '.join(attrs)}]" if attrs else "") + ";")
    for i, e in enumerate(g.edges):
        style = ", penwidth=3, color=red" if i in highlight else ""
        lines.append(f'  {e.u} -- {e.v} [label="{e.w}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
