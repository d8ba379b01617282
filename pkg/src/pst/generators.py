"""Seeded random plane graphs and Steiner instances."""

from __future__ import annotations

import numpy as np
from scipy.spatial import Delaunay

from .embed import EmbeddingBuilder, signed_area
from .graph import PlanarGraph, UnionFind
from .io import SteinerInstance


def _triangulation_edges(points: np.ndarray) -> list[tuple[int, int]]:
    n = len(points)
    if n < 3:
        return [(i, i + 1) for i in range(n - 1)]
    tri = Delaunay(points)
    es = set()
    for a, b, c in tri.simplices:
        for x, y in ((a, b), (b, c), (a, c)):
            es.add((min(x, y), max(x, y)))
    return sorted((int(x), int(y)) for x, y in es)


def random_plane_graph(n: int, seed: int, keep: float = 0.7, max_weight: int = 10,
                       min_weight: int = 1, offset=(0.0, 0.0)) -> tuple[PlanarGraph, list[tuple[float, float]]]:
    """Connected straight-line plane graph: a thinned Delaunay triangulation.

    A random spanning tree is always kept so the result stays connected;
    every other triangulation edge survives with probability ``keep``.
    """
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    pts[:, 0] += offset[0]
    pts[:, 1] += offset[1]
    cand = _triangulation_edges(pts)
    order = rng.permutation(len(cand))
    uf = UnionFind(range(n))
    chosen = []
    for i in order:
        u, v = cand[i]
        if uf.union(u, v):
            chosen.append((u, v))
    tree = set(chosen)
    for u, v in cand:
        if (u, v) not in tree and rng.random() < keep:
            chosen.append((u, v))
    b = EmbeddingBuilder()
    for x, y in pts:
        b.add_vertex(x, y)
    for u, v in sorted(chosen):
        b.add_edge(u, v, int(rng.integers(min_weight, max_weight + 1)))
    return b.build(), [tuple(p) for p in pts]


def outer_face_index(g: PlanarGraph, positions) -> int:
    """The unbounded face: the one traced clockwise (negative area)."""
    areas = [signed_area([positions[v] for v in f.vertices_in_order]) for f in g.faces]
    return int(np.argmin(areas))


def random_instance(n: int, n_terminals: int, n_faces: int, seed: int, keep: float = 0.7,
                    max_weight: int = 10, min_weight: int = 1) -> SteinerInstance:
    """Random plane graph with terminals spread over a few random faces."""
    g, pos = random_plane_graph(n, seed, keep, max_weight, min_weight)
    rng = np.random.default_rng(seed + 7919)
    nf = len(g.faces)
    chosen = [int(x) for x in rng.choice(nf, size=min(n_faces, nf), replace=False)]
    terminals: list[int] = []
    for fi in chosen:
        verts = sorted(g.faces[fi].vertex_set - set(terminals))
        if verts:
            terminals.append(int(rng.choice(verts)))
    pool = sorted(set().union(*(g.faces[f].vertex_set for f in chosen)) - set(terminals))
    extra = max(0, min(n_terminals - len(terminals), len(pool)))
    if extra:
        terminals += [int(x) for x in rng.choice(pool, size=extra, replace=False)]
    faces = tuple(f for f in chosen if g.faces[f].vertex_set & set(terminals))
    return SteinerInstance(g, tuple(terminals), tuple(sorted(faces)), meta={"positions": pos})


def chained_instance(parts: int, part_size: int, seed: int, terminals_per_part: int = 2,
                     max_weight: int = 10) -> SteinerInstance:
    """Small plane clusters in a row, consecutive ones joined by one edge.

    Each cluster contributes one terminal face (its outer boundary), so the
    clusters are separated by single vertices on the joining edges.
    """
    rng = np.random.default_rng(seed)
    b = EmbeddingBuilder()
    clusters = []
    for c in range(parts):
        g, pos = random_plane_graph(part_size, seed * 31 + c, keep=0.5, max_weight=max_weight)
        base = b.n
        for x, y in pos:
            b.add_vertex(x + 2.0 * c, y)
        for e in g.edges:
            b.add_edge(base + e.u, base + e.v, e.w)
        clusters.append((base, g, pos))
    for c in range(parts - 1):
        base_a, _, pos_a = clusters[c]
        base_b, _, pos_b = clusters[c + 1]
        a = base_a + int(np.argmax([p[0] for p in pos_a]))
        z = base_b + int(np.argmin([p[0] for p in pos_b]))
        b.add_edge(a, z, int(rng.integers(1, max_weight + 1)))
    g = b.build()
    outer = outer_face_index(g, b.positions)
    # each cluster's terminals sit on the common outer face
    terminals: list[int] = []
    outer_verts = g.faces[outer].vertex_set
    for base, cg, _ in clusters:
        cand = sorted(v for v in range(base, base + cg.n) if v in outer_verts)
        k = min(terminals_per_part, len(cand))
        terminals += [int(x) for x in rng.choice(cand, size=k, replace=False)]
    return SteinerInstance(g, tuple(terminals), (outer,), meta={"positions": b.positions})


def random_cycle_instance(length: int, n_terminals: int, seed: int, max_weight: int = 10,
                          both_faces: bool = True) -> SteinerInstance:
    """A weighted cycle drawn as a regular polygon.

    Terminals are random cycle vertices; both faces (or only the bounded one)
    are declared terminal faces, so the solver has two faces to split over.
    """
    import math

    rng = np.random.default_rng(seed)
    b = EmbeddingBuilder()
    for i in range(length):
        b.add_vertex(math.cos(2 * math.pi * i / length), math.sin(2 * math.pi * i / length))
    for i in range(length):
        b.add_edge(i, (i + 1) % length, int(rng.integers(1, max_weight + 1)))
    g = b.build()
    terms = tuple(sorted(int(x) for x in rng.choice(length, size=min(n_terminals, length), replace=False)))
    outer = outer_face_index(g, b.positions)
    faces = tuple(range(len(g.faces))) if both_faces else (1 - outer,)
    return SteinerInstance(g, terms, faces, meta={"positions": b.positions})
