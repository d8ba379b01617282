"""Reduction to 2-connected graphs of maximum degree three.

Two steps, each rebuilding the rotation system:

1. Every vertex of degree at least three becomes a zero-weight cycle with
   one cycle vertex per incident edge, in rotation order.
2. Every maximal path of bridges (inner vertices of degree two) gets a
   parallel twin path of heavy edges, closed off by zero-weight connectors
   at copies of its end vertices.  One non-path edge at each end moves to
   the copy, which keeps every degree at most three.

Terminal faces are tracked through darts that survive both steps, so the
list of terminal faces keeps its length and order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import Disconnected, NotASolution, TerminalNotOnFace
from .graph import Edge, Graph, PlanarGraph, UnionFind, clean_tree, is_biconnected
from .io import SteinerInstance

ORIGINAL, CYCLE, CONNECTOR, TWIN = "original", "cycle", "connector", "twin"


@dataclass(frozen=True)
class BackMap:
    """How each edge and terminal of the transformed graph relates to the input."""

    original: Graph
    terminals: tuple[int, ...]
    edge_kind: tuple[str, ...]
    edge_origin: tuple[int, ...]
    terminal_relocation: dict[int, int] = field(hash=False)

    def cycle_groups(self) -> dict[int, int]:
        return {i: o for i, (k, o) in enumerate(zip(self.edge_kind, self.edge_origin)) if k == CYCLE}

    def path_twins(self) -> dict[int, int]:
        return {i: o for i, (k, o) in enumerate(zip(self.edge_kind, self.edge_origin)) if k == TWIN}

    def to_dict(self) -> dict:
        return {
            "edge_kind": list(self.edge_kind),
            "edge_origin": list(self.edge_origin),
            "terminal_relocation": {str(k): v for k, v in self.terminal_relocation.items()},
        }


@dataclass(frozen=True)
class Preprocessed:
    graph: PlanarGraph
    terminals: tuple[int, ...]
    faces: tuple[int, ...]
    backmap: BackMap

    def instance(self) -> SteinerInstance:
        return SteinerInstance(self.graph, self.terminals, self.faces)


class _Draft:
    """Mutable edge list plus rotation lists."""

    def __init__(self, n: int, edges: list[list[int]], rotation: list[list[int]], kind, origin):
        self.n = n
        self.edges = edges
        self.rotation = rotation
        self.kind = kind
        self.origin = origin

    def new_vertex(self) -> int:
        self.rotation.append([])
        self.n += 1
        return self.n - 1

    def new_edge(self, u: int, v: int, w: int, kind: str, origin: int) -> int:
        self.edges.append([u, v, w])
        self.kind.append(kind)
        self.origin.append(origin)
        return len(self.edges) - 1

    def tail(self, d: int) -> int:
        return self.edges[d >> 1][d & 1]

    def freeze(self) -> PlanarGraph:
        return PlanarGraph.from_rotation(self.n, [tuple(e) for e in self.edges], self.rotation)


def _terminal_face(g: PlanarGraph, faces: list[int], t: int) -> int:
    for pos, fi in enumerate(faces):
        if t in g.faces[fi].vertex_set:
            return pos
    raise TerminalNotOnFace(f"terminal {t} lies on none of the terminal faces")


def _expand_degrees(g: PlanarGraph, terminals, faces):
    rot = g.rotation
    vid: dict[tuple[int, int], int] = {}
    n = 0
    for v in range(g.n):
        if len(rot[v]) >= 3:
            for j in range(len(rot[v])):
                vid[(v, j)] = n
                n += 1
        else:
            vid[(v, -1)] = n
            n += 1

    def end_vertex(d: int) -> int:
        v = g.tail(d)
        if len(rot[v]) >= 3:
            return vid[(v, rot[v].index(d))]
        return vid[(v, -1)]

    edges = [[end_vertex(2 * i), end_vertex(2 * i + 1), e.w] for i, e in enumerate(g.edges)]
    kind = [ORIGINAL] * g.m
    origin = list(range(g.m))
    rotation: list[list[int]] = [[] for _ in range(n)]
    vertex_origin = [0] * n
    for (v, j), x in vid.items():
        vertex_origin[x] = v
    for v in range(g.n):
        if len(rot[v]) < 3:
            rotation[vid[(v, -1)]] = list(rot[v])
            continue
        ell = len(rot[v])
        first = len(edges)
        for j in range(ell):
            edges.append([vid[(v, j)], vid[(v, (j + 1) % ell)], 0])
            kind.append(CYCLE)
            origin.append(v)
        for j in range(ell):
            nxt = first + j
            prv = first + (j - 1) % ell
            rotation[vid[(v, j)]] = [rot[v][j], 2 * nxt, 2 * prv + 1]

    relocation = {}
    for t in terminals:
        if len(rot[t]) < 3:
            relocation[t] = vid[(t, -1)]
            continue
        face = g.faces[faces[_terminal_face(g, faces, t)]]
        d = next(d for d in face.boundary if g.tail(d) == t)
        relocation[t] = vid[(t, rot[t].index(d))]
    draft = _Draft(n, edges, rotation, kind, origin)
    return draft, relocation, vertex_origin


def _bridges(g: Graph) -> set[int]:
    """Bridge edge ids by an iterative lowpoint search."""
    disc = [-1] * g.n
    low = [0] * g.n
    out: set[int] = set()
    timer = 0
    for s in range(g.n):
        if disc[s] != -1:
            continue
        disc[s] = low[s] = timer
        timer += 1
        stack = [(s, -1, iter(g.incidence[s]))]
        while stack:
            v, pe, it = stack[-1]
            pushed = False
            for d in it:
                eid = d >> 1
                if eid == pe:
                    continue
                w = g.head(d)
                if disc[w] == -1:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, eid, iter(g.incidence[w])))
                    pushed = True
                    break
                low[v] = min(low[v], disc[w])
            if pushed:
                continue
            stack.pop()
            if stack:
                p = stack[-1][0]
                low[p] = min(low[p], low[v])
                if low[v] > disc[p]:
                    out.add(pe)
    return out


def _bridge_paths(g: PlanarGraph) -> list[tuple[list[int], list[int]]]:
    """Maximal bridge paths as (vertex sequence, dart sequence) from one end."""
    bridges = _bridges(g)
    used: set[int] = set()
    paths = []
    for b in sorted(bridges):
        if b in used:
            continue
        # walk to one end through degree-two vertices
        d = 2 * b
        while g.degree(g.tail(d)) == 2:
            other = [x for x in g.incidence[g.tail(d)] if x >> 1 != d >> 1][0]
            d = other ^ 1
        verts, darts = [g.tail(d)], []
        while True:
            darts.append(d)
            used.add(d >> 1)
            h = g.head(d)
            verts.append(h)
            if g.degree(h) != 2:
                break
            d = [x for x in g.incidence[h] if x >> 1 != d >> 1][0]
        if verts[0] > verts[-1]:
            verts = verts[::-1]
            darts = [x ^ 1 for x in darts[::-1]]
        paths.append((verts, darts))
    return paths


def _duplicate_path(dr: _Draft, verts: list[int], darts: list[int], heavy: int) -> set[int]:
    """Add the twin path; returns the darts that move onto the new face."""
    u, v = verts[0], verts[-1]
    m = len(darts)
    u2, v2 = dr.new_vertex(), dr.new_vertex()
    inner = [dr.new_vertex() for _ in range(m - 1)]
    chain = [u2] + inner + [v2]
    twins = [dr.new_edge(chain[k], chain[k + 1], heavy, TWIN, dr.origin[darts[k] >> 1]) for k in range(m)]
    fu = dr.new_edge(u, u2, 0, CONNECTOR, -1)
    fv = dr.new_edge(v, v2, 0, CONNECTOR, -1)
    for k in range(1, m):
        dr.rotation[chain[k]] = [2 * twins[k - 1] + 1, 2 * twins[k]]

    ru = dr.rotation[u]
    e1 = darts[0]
    if len(ru) == 3:
        b = ru[(ru.index(e1) - 1) % 3]
        ru[ru.index(b)] = 2 * fu
        dr.edges[b >> 1][b & 1] = u2
        dr.rotation[u2] = [2 * twins[0], 2 * fu + 1, b]
    else:
        ru.append(2 * fu)
        dr.rotation[u2] = [2 * twins[0], 2 * fu + 1]

    rv = dr.rotation[v]
    em = darts[-1] ^ 1
    if len(rv) == 3:
        c = rv[(rv.index(em) + 1) % 3]
        rv[rv.index(c)] = 2 * fv
        dr.edges[c >> 1][c & 1] = v2
        dr.rotation[v2] = [2 * fv + 1, 2 * twins[-1] + 1, c]
    else:
        rv.append(2 * fv)
        dr.rotation[v2] = [2 * fv + 1, 2 * twins[-1] + 1]
    return set(darts) | {x ^ 1 for x in darts}


def make_subcubic_2connected(g: PlanarGraph, terminals: Iterable[int], faces: Iterable[int],
                             w_cap: int | None = None) -> Preprocessed:
    """Equivalent instance on a 2-connected graph of maximum degree three."""
    terminals = tuple(dict.fromkeys(int(t) for t in terminals))
    faces = [int(f) for f in faces]
    if g.n > 1 and not g.is_connected():
        raise Disconnected("input graph must be connected")
    for t in terminals:
        _terminal_face(g, faces, t) if g.m else None
    heavy = max((e.w for e in g.edges), default=0) if w_cap is None else int(w_cap)
    if any(e.w > heavy for e in g.edges):
        raise ValueError("w_cap is below the largest edge weight")

    if g.m == 0:
        bm = BackMap(g, terminals, (), (), {t: t for t in terminals})
        return Preprocessed(g, terminals, tuple(faces), bm)

    draft, relocation, _ = _expand_degrees(g, terminals, faces)
    g1 = draft.freeze()
    trackers = [g.faces[f].boundary[0] for f in faces]
    # faces of g1 carrying the images; darts of original edges keep their index
    face1 = [g1.dart_face[d] for d in trackers]

    paths = _bridge_paths(g1)
    moved: set[int] = set()
    for verts, darts in paths:
        moved |= _duplicate_path(draft, verts, darts, heavy)
    g2 = draft.freeze()

    new_faces = []
    for fi in face1:
        walk = g1.faces[fi].boundary
        keep = [d for d in walk if d not in moved]
        d = keep[0] if keep else walk[0]
        new_faces.append(g2.dart_face[d])

    t2 = tuple(relocation[t] for t in terminals)
    for t, t_new in zip(terminals, t2):
        pos = _terminal_face(g, faces, t)
        if t_new not in g2.faces[new_faces[pos]].vertex_set:
            raise AssertionError(f"relocated terminal {t_new} left its face")
    bm = BackMap(g, terminals, tuple(draft.kind), tuple(draft.origin), relocation)
    return Preprocessed(g2, t2, tuple(new_faces), bm)


def preprocess_instance(inst: SteinerInstance, w_cap: int | None = None) -> Preprocessed:
    return make_subcubic_2connected(inst.graph, inst.terminals, inst.faces, w_cap)


def lift_solution(bm: BackMap, transformed: Graph, edges: Iterable[int]) -> list[int]:
    """Map a Steiner tree of the transformed graph back to the input graph."""
    edges = list(edges)
    uf = UnionFind()
    for eid in edges:
        e = transformed.edges[eid]
        uf.union(e.u, e.v)
    new_terms = [bm.terminal_relocation[t] for t in bm.terminals]
    if new_terms and any(not uf.same(new_terms[0], x) for x in new_terms[1:]):
        raise NotASolution("edge set does not connect the terminals")
    originals = set()
    for eid in edges:
        kind = bm.edge_kind[eid]
        if kind in (ORIGINAL, TWIN):
            originals.add(bm.edge_origin[eid])
    return clean_tree(bm.original, originals, bm.terminals)


def check_subcubic_2connected(g: Graph) -> bool:
    return all(g.degree(v) <= 3 for v in range(g.n)) and is_biconnected(g)
