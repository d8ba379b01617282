"""Weighted multigraphs with an explicit rotation system.

Edge ``i`` joins ``edges[i].u`` and ``edges[i].v``.  It owns two darts
(directed edge-ends): ``2i`` leaves ``u`` and ``2i + 1`` leaves ``v``.
The rotation of a vertex lists its darts in counterclockwise order; the
face to the left of a dart is traced by turning clockwise at each head,
so bounded faces of a straight-line drawing come out counterclockwise.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import EulerViolation, MalformedRotation, SelfLoop, Unreachable


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    w: int

    def other(self, x: int) -> int:
        return self.v if x == self.u else self.u


def dart_edge(d: int) -> int:
    return d >> 1


def dart_twin(d: int) -> int:
    return d ^ 1


class UnionFind:
    """Plain union-find with path halving."""

    def __init__(self, items: Iterable[int] = ()):
        self.parent: dict[int, int] = {x: x for x in items}

    def find(self, x: int) -> int:
        p = self.parent
        if x not in p:
            p[x] = x
            return x
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def same(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)


@dataclass(frozen=True)
class Graph:
    """Undirected multigraph on vertices ``0..n-1`` with integer weights."""

    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        for i, e in enumerate(self.edges):
            if not (0 <= e.u < self.n and 0 <= e.v < self.n):
                raise MalformedRotation(f"edge {i} has an endpoint outside 0..{self.n - 1}")
            if e.u == e.v:
                raise SelfLoop(f"edge {i} is a self-loop at {e.u}")
            if e.w < 0:
                raise ValueError(f"edge {i} has negative weight")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        return cls(n, tuple(Edge(int(u), int(v), int(w)) for u, v, w in edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """Darts leaving each vertex, in dart-index order."""
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for i, e in enumerate(self.edges):
            inc[e.u].append(2 * i)
            inc[e.v].append(2 * i + 1)
        return tuple(tuple(x) for x in inc)

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def tail(self, d: int) -> int:
        e = self.edges[d >> 1]
        return e.u if d % 2 == 0 else e.v

    def head(self, d: int) -> int:
        e = self.edges[d >> 1]
        return e.v if d % 2 == 0 else e.u

    def total_weight(self) -> int:
        return sum(e.w for e in self.edges)

    def weight_of(self, edge_ids: Iterable[int]) -> int:
        return sum(self.edges[i].w for i in edge_ids)

    def components(self) -> list[list[int]]:
        uf = UnionFind(range(self.n))
        for e in self.edges:
            uf.union(e.u, e.v)
        groups: dict[int, list[int]] = {}
        for v in range(self.n):
            groups.setdefault(uf.find(v), []).append(v)
        return sorted(groups.values())

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def neighbours(self, v: int) -> list[tuple[int, int, int]]:
        """``(neighbour, weight, edge id)`` triples."""
        out = []
        for d in self.incidence[v]:
            e = self.edges[d >> 1]
            out.append((e.other(v), e.w, d >> 1))
        return out


@dataclass(frozen=True)
class Face:
    """A closed face walk given as its cyclic sequence of darts."""

    boundary: tuple[int, ...]
    vertices_in_order: tuple[int, ...] = field(compare=False)

    @cached_property
    def edge_set(self) -> frozenset[int]:
        return frozenset(d >> 1 for d in self.boundary)

    @cached_property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices_in_order)

    def __len__(self) -> int:
        return len(self.boundary)

    def is_simple_cycle(self) -> bool:
        return len(self.vertices_in_order) == len(self.vertex_set) and len(self.boundary) >= 3


@dataclass(frozen=True)
class PlanarGraph(Graph):
    """A multigraph together with a rotation system, validated on creation."""

    rotation: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        super().__post_init__()
        if len(self.rotation) != self.n:
            raise MalformedRotation(f"rotation has {len(self.rotation)} entries for {self.n} vertices")
        for v in range(self.n):
            rot = self.rotation[v]
            if sorted(rot) != list(self.incidence[v]):
                raise MalformedRotation(f"rotation of vertex {v} does not list its edge-ends exactly once")
        self._check_euler()

    @classmethod
    def from_rotation(cls, n: int, edges: Iterable[Sequence[int]], rotation: Iterable[Iterable[int]]) -> "PlanarGraph":
        es = tuple(Edge(int(u), int(v), int(w)) for u, v, w in edges)
        return cls(n, es, tuple(tuple(int(d) for d in r) for r in rotation))

    @cached_property
    def _rot_pos(self) -> dict[int, int]:
        pos = {}
        for rot in self.rotation:
            for i, d in enumerate(rot):
                pos[d] = i
        return pos

    def next_dart(self, d: int) -> int:
        """Successor of ``d`` along the face to its left."""
        h = self.head(d)
        rot = self.rotation[h]
        return rot[(self._rot_pos[d ^ 1] - 1) % len(rot)]

    @cached_property
    def faces(self) -> tuple[Face, ...]:
        seen = [False] * (2 * self.m)
        faces = []
        for start in range(2 * self.m):
            if seen[start]:
                continue
            walk, verts = [], []
            d = start
            while not seen[d]:
                seen[d] = True
                walk.append(d)
                verts.append(self.tail(d))
                d = self.next_dart(d)
            if d != start:
                raise MalformedRotation("face walk did not close")
            faces.append(Face(tuple(walk), tuple(verts)))
        return tuple(faces)

    @cached_property
    def dart_face(self) -> tuple[int, ...]:
        out = [0] * (2 * self.m)
        for i, f in enumerate(self.faces):
            for d in f.boundary:
                out[d] = i
        return tuple(out)

    def _check_euler(self) -> None:
        comps = self.components()
        comp_of = {}
        for ci, comp in enumerate(comps):
            for v in comp:
                comp_of[v] = ci
        nv = [len(c) for c in comps]
        ne = [0] * len(comps)
        nf = [0] * len(comps)
        for e in self.edges:
            ne[comp_of[e.u]] += 1
        for f in self.faces:
            nf[comp_of[f.vertices_in_order[0]]] += 1
        for ci in range(len(comps)):
            if ne[ci] == 0:
                continue
            if nv[ci] - ne[ci] + nf[ci] != 2:
                raise EulerViolation(
                    f"component {ci}: V - E + F = {nv[ci]} - {ne[ci]} + {nf[ci]} != 2"
                )

    def faces_containing(self, v: int) -> list[int]:
        return [i for i, f in enumerate(self.faces) if v in f.vertex_set]

    def face_index(self, face: Face) -> int:
        return self.faces.index(face)


def build_graph(n: int, edges: Iterable[Sequence[int]], rotation: Iterable[Iterable[int]]) -> PlanarGraph:
    """Validate and build a planar multigraph from a rotation system."""
    return PlanarGraph.from_rotation(n, edges, rotation)


def enumerate_faces(g: PlanarGraph) -> list[Face]:
    """Faces ordered by their smallest dart."""
    return list(g.faces)


def flatten(faces: Iterable[Face]) -> frozenset[int]:
    out: set[int] = set()
    for f in faces:
        out |= f.edge_set
    return frozenset(out)


def flatten_vertices(faces: Iterable[Face]) -> frozenset[int]:
    out: set[int] = set()
    for f in faces:
        out |= f.vertex_set
    return frozenset(out)


def shortest_path(g: Graph, u: int, v: int) -> tuple[int, list[int]]:
    """Minimum-weight path from ``u`` to ``v`` as ``(weight, edge ids)``.

    Among shortest simple paths the one with the lexicographically smallest
    vertex sequence wins.
    """
    if u == v:
        return 0, []
    best: dict[int, tuple[int, tuple[int, ...]]] = {u: (0, (u,))}
    via: dict[int, tuple[int, ...]] = {u: ()}
    heap = [(0, (u,), ())]
    done = set()
    while heap:
        d, path, epath = heapq.heappop(heap)
        x = path[-1]
        if x in done:
            continue
        done.add(x)
        if x == v:
            return d, list(epath)
        for y, w, eid in g.neighbours(x):
            if y in done:
                continue
            cand = (d + w, path + (y,))
            if y not in best or cand < best[y]:
                best[y] = cand
                via[y] = epath + (eid,)
                heapq.heappush(heap, (cand[0], cand[1], via[y]))
    raise Unreachable(f"{v} is not reachable from {u}")


def dijkstra(g: Graph, src: int, banned: frozenset[int] = frozenset()) -> tuple[list, list[int]]:
    """Exact single-source distances; ``None`` marks unreachable vertices.

    Returns ``(dist, pred_edge)`` with ``pred_edge[v] == -1`` at the source and
    at unreachable vertices.  Ties prefer the smaller predecessor edge id.
    """
    n = g.n
    dist: list = [None] * n
    pred = [-1] * n
    if src in banned:
        return dist, pred
    dist[src] = 0
    heap = [(0, src)]
    done = [False] * n
    adj = g.incidence
    edges = g.edges
    while heap:
        d, x = heapq.heappop(heap)
        if done[x]:
            continue
        done[x] = True
        for dart in adj[x]:
            eid = dart >> 1
            e = edges[eid]
            y = e.v if dart % 2 == 0 else e.u
            if done[y] or y in banned:
                continue
            nd = d + e.w
            cur = dist[y]
            if cur is None or nd < cur or (nd == cur and eid < pred[y]):
                dist[y] = nd
                pred[y] = eid
                heapq.heappush(heap, (nd, y))
    return dist, pred


def is_biconnected(g: Graph) -> bool:
    """True when connected with no articulation vertex (lowpoint DFS)."""
    if g.n <= 2:
        return g.is_connected()
    if not g.is_connected():
        return False
    disc = [-1] * g.n
    low = [0] * g.n
    timer = 0
    disc[0] = low[0] = 0
    timer = 1
    root_children = 0
    # iterative DFS over darts so parallel edges are handled by edge id
    stack = [(0, -1, iter(g.incidence[0]))]
    while stack:
        v, pe, it = stack[-1]
        advanced = False
        for d in it:
            eid = d >> 1
            if eid == pe:
                continue
            w = g.head(d)
            if disc[w] == -1:
                disc[w] = low[w] = timer
                timer += 1
                stack.append((w, eid, iter(g.incidence[w])))
                advanced = True
                break
            low[v] = min(low[v], disc[w])
        if advanced:
            continue
        stack.pop()
        if stack:
            parent = stack[-1][0]
            low[parent] = min(low[parent], low[v])
            if parent == 0:
                root_children += 1
            elif low[v] >= disc[parent]:
                return False
    return root_children <= 1


def spanning_forest(g: Graph, edge_ids: Iterable[int]) -> list[int]:
    """Kruskal forest of the given edges (lightest first, ties by id)."""
    uf = UnionFind()
    out = []
    for eid in sorted(set(edge_ids), key=lambda i: (g.edges[i].w, i)):
        e = g.edges[eid]
        if uf.union(e.u, e.v):
            out.append(eid)
    return sorted(out)


def prune_leaves(g: Graph, edge_ids: Iterable[int], keep: Iterable[int]) -> list[int]:
    """Repeatedly drop edges hanging off degree-1 vertices outside ``keep``."""
    keep = set(keep)
    es = set(edge_ids)
    deg: dict[int, int] = {}
    inc: dict[int, set[int]] = {}
    for eid in es:
        e = g.edges[eid]
        for x in (e.u, e.v):
            deg[x] = deg.get(x, 0) + 1
            inc.setdefault(x, set()).add(eid)
    stack = [x for x, dx in deg.items() if dx == 1 and x not in keep]
    while stack:
        x = stack.pop()
        if deg.get(x, 0) != 1 or x in keep:
            continue
        (eid,) = inc[x]
        es.discard(eid)
        e = g.edges[eid]
        y = e.other(x)
        for z in (x, y):
            deg[z] -= 1
            inc[z].discard(eid)
        if deg[y] == 1 and y not in keep:
            stack.append(y)
    return sorted(es)


def clean_tree(g: Graph, edge_ids: Iterable[int], keep: Iterable[int]) -> list[int]:
    return prune_leaves(g, spanning_forest(g, edge_ids), keep)
