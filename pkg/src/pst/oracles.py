"""Exact Steiner tree solvers used as engines and as ground truth.

The subset dynamic program keeps one row per terminal subset (a bitmask
over all terminals but a fixed root).  A row holds, for every vertex ``v``,
the cheapest tree joining the subset's terminals and ``v``.  Rows are filled
by a merge step (two complementary sub-rows meeting at the same vertex)
followed by a grow step, a min-plus product with the distance matrix.
Restricting the family of subsets to intervals of a cyclic terminal order
gives the one-face algorithm.

Weights are divided by their gcd and held in ``int64`` when the totals fit;
otherwise the same code runs on Python integers through object arrays.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import reduce
from typing import Callable, Iterable, Sequence

import numba
import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .errors import TerminalCapExceeded, TerminalOffFace, TooLarge, Unreachable
from .graph import Edge, Face, Graph, PlanarGraph, UnionFind, clean_tree, dijkstra

DEFAULT_TERMINAL_CAP = 16
INT64_SAFE = 2**63 - 1
FLOAT_EXACT = 2**52


@dataclass(frozen=True)
class SteinerSolution:
    edges: tuple[int, ...]
    weight: int

    @classmethod
    def from_edges(cls, g: Graph, edges: Iterable[int]) -> "SteinerSolution":
        es = tuple(sorted(set(edges)))
        return cls(es, g.weight_of(es))


class DistanceTable:
    """All-pairs exact distances of ``g`` with some vertices deleted."""

    def __init__(self, g: Graph, banned: Iterable[int] = ()):
        self.g = g
        self.banned = frozenset(banned)
        ws = [e.w for e in g.edges if e.w > 0]
        self.scale = reduce(math.gcd, ws, 0) or 1
        total = sum(ws) // self.scale
        # every finite value is a tree weight, so at most ``total``; sums of
        # three entries (two rows plus one distance) must not overflow
        self.inf = total + 1
        self.dtype = np.int64 if 3 * self.inf < INT64_SAFE else object
        n = g.n
        if self.dtype is not object and 4 * total < FLOAT_EXACT:
            self._scipy_fill(g)
            return
        self.pair_edge = None
        scaled = Graph(n, tuple(Edge(e.u, e.v, e.w // self.scale) for e in g.edges)) if self.scale > 1 else g
        dist = np.full((n, n), self.inf, dtype=self.dtype)
        pred = np.full((n, n), -1, dtype=np.int64)
        for s in range(n):
            if s in self.banned:
                continue
            d, p = dijkstra(scaled, s, self.banned)
            row = [self.inf if x is None else x for x in d]
            dist[s] = np.array(row, dtype=self.dtype)
            pred[s] = p
        self.dist = dist
        self.pred = pred

    def _scipy_fill(self, g: Graph) -> None:
        # totals below 2**52 are exact in float64; pred holds vertices here
        n = g.n
        best: dict[tuple[int, int], int] = {}
        for i, e in enumerate(g.edges):
            if e.u == e.v or e.u in self.banned or e.v in self.banned:
                continue
            key = (min(e.u, e.v), max(e.u, e.v))
            j = best.get(key)
            if j is None or e.w < g.edges[j].w:
                best[key] = i
        self.pair_edge = best
        rows = np.array([k[0] for k in best], dtype=np.int64)
        cols = np.array([k[1] for k in best], dtype=np.int64)
        vals = np.array([g.edges[i].w // self.scale for i in best.values()], dtype=np.float64)
        mat = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
        d, pred = csgraph.dijkstra(mat, directed=False, return_predecessors=True)
        d[~np.isfinite(d)] = self.inf
        dist = d.astype(np.int64)
        if self.banned:
            idx = sorted(self.banned)
            dist[idx, :] = self.inf
            dist[:, idx] = self.inf
            pred[idx, :] = -9999
        self.dist = dist
        self.pred = pred

    def reachable(self, u: int, v: int) -> bool:
        return self.dist[u, v] < self.inf

    def path_edges(self, u: int, v: int) -> list[int]:
        out = []
        x = v
        while x != u:
            if self.pair_edge is None:
                eid = int(self.pred[u, x])
                if eid < 0:
                    raise Unreachable(f"{v} unreachable from {u}")
                nxt = self.g.edges[eid].other(x)
            else:
                nxt = int(self.pred[u, x])
                if nxt < 0:
                    raise Unreachable(f"{v} unreachable from {u}")
                eid = self.pair_edge[(min(x, nxt), max(x, nxt))]
            out.append(eid)
            x = nxt
        return out


def _min_plus(vec: np.ndarray, dist: np.ndarray) -> np.ndarray:
    return (vec[:, None] + dist).min(axis=0)


@numba.njit(cache=True)
def _fill_all_subsets(dist, terms, inf):  # pragma: no cover - compiled
    k = terms.shape[0]
    n = dist.shape[0]
    rows = np.empty((1 << k, n), dtype=np.int64)
    rows[0, :] = inf
    merged = np.empty(n, dtype=np.int64)
    # masks in increasing numeric order already see every proper submask first
    for mask in range(1, 1 << k):
        if mask & (mask - 1) == 0:
            i = 0
            while (1 << i) != mask:
                i += 1
            rows[mask, :] = dist[terms[i], :]
            continue
        merged[:] = 2 * inf
        low = mask & -mask
        rest = mask ^ low
        sub = rest
        while True:
            s = sub | low
            if s != mask:
                c = mask ^ s
                for v in range(n):
                    x = rows[s, v] + rows[c, v]
                    if x < merged[v]:
                        merged[v] = x
            if sub == 0:
                break
            sub = (sub - 1) & rest
        for v in range(n):
            best = inf
            for u in range(n):
                x = merged[u] + dist[u, v]
                if x < best:
                    best = x
            rows[mask, v] = best
    return rows


class _SubsetDP:
    """Shared engine for the full-subset and interval-restricted programs."""

    def __init__(self, table: DistanceTable, terminals: Sequence[int],
                 masks: Sequence[int], splits: Callable[[int], Sequence[tuple[int, int]]],
                 full_family: bool = False):
        self.t = table
        self.terms = list(terminals)
        self.splits = splits
        self.rows: dict[int, np.ndarray] | np.ndarray = {}
        inf = table.inf
        if full_family and table.dtype is not object:
            self.rows = _fill_all_subsets(table.dist, np.array(self.terms, dtype=np.int64), np.int64(inf))
            return
        for mask in masks:
            if mask & (mask - 1) == 0:
                i = mask.bit_length() - 1
                self.rows[mask] = table.dist[self.terms[i]].copy()
                continue
            merged = self._merged(mask)
            row = _min_plus(merged, table.dist)
            if table.dtype is object:
                row = np.array([min(x, inf) for x in row], dtype=object)
            else:
                np.minimum(row, inf, out=row)
            self.rows[mask] = row

    def _merged(self, mask: int) -> np.ndarray:
        pairs = self.splits(mask)
        a = np.stack([self.rows[s] for s, _ in pairs])
        b = np.stack([self.rows[c] for _, c in pairs])
        return (a + b).min(axis=0)

    def value(self, mask: int, v: int):
        return self.rows[mask][v]

    def witness(self, mask: int, v: int) -> list[int]:
        tab = self.t
        out: list[int] = []
        stack = [(mask, v)]
        while stack:
            mask, v = stack.pop()
            if mask & (mask - 1) == 0:
                out += tab.path_edges(self.terms[mask.bit_length() - 1], v)
                continue
            merged = self._merged(mask)
            u = int(np.argmin(merged + tab.dist[:, v]))
            out += tab.path_edges(u, v)
            pairs = self.splits(mask)
            sums = [self.rows[s][u] + self.rows[c][u] for s, c in pairs]
            s, c = pairs[min(range(len(pairs)), key=sums.__getitem__)]
            stack += [(s, u), (c, u)]
        return out


def _all_splits(mask: int) -> list[tuple[int, int]]:
    low = mask & -mask
    rest = mask ^ low
    out = []
    sub = rest
    while True:
        s = sub | low
        if s != mask:
            out.append((s, mask ^ s))
        if sub == 0:
            break
        sub = (sub - 1) & rest
    return out


def _finish(g: Graph, table: DistanceTable, dp: _SubsetDP, full: int, root: int, terminals: Sequence[int]) -> SteinerSolution:
    val = dp.value(full, root)
    if val >= table.inf:
        raise Unreachable("terminals lie in different components")
    edges = clean_tree(g, dp.witness(full, root), terminals)
    sol = SteinerSolution.from_edges(g, edges)
    if sol.weight != int(val) * table.scale:
        raise AssertionError("witness weight disagrees with the dynamic program")
    return sol


def _prepare(g: Graph, terminals: Iterable[int], table: DistanceTable | None):
    ts = sorted(set(int(t) for t in terminals))
    if not ts:
        raise ValueError("terminal set must be nonempty")
    if table is None:
        table = DistanceTable(g)
    root = ts[-1]
    for t in ts[:-1]:
        if not table.reachable(t, root):
            raise Unreachable(f"terminal {t} cannot reach {root}")
    return ts, table, root


def dreyfus_wagner(g: Graph, terminals: Iterable[int], cap: int = DEFAULT_TERMINAL_CAP,
                   table: DistanceTable | None = None) -> SteinerSolution:
    """Minimum Steiner tree by the subset dynamic program."""
    ts = sorted(set(terminals))
    if len(ts) > cap:
        raise TerminalCapExceeded(f"{len(ts)} terminals exceed the cap {cap}")
    if len(ts) == 1:
        return SteinerSolution((), 0)
    ts, table, root = _prepare(g, ts, table)
    others = ts[:-1]
    k = len(others)
    masks = sorted(range(1, 1 << k), key=lambda m: (bin(m).count("1"), m))
    dp = _SubsetDP(table, others, masks, _all_splits, full_family=True)
    return _finish(g, table, dp, (1 << k) - 1, root, ts)


def face_order(face: Face, vertices: Iterable[int]) -> list[int]:
    """``vertices`` sorted by first appearance along the face walk."""
    want = set(vertices)
    seen: list[int] = []
    for v in face.vertices_in_order:
        if v in want and v not in seen:
            seen.append(v)
    missing = want - set(seen)
    if missing:
        raise TerminalOffFace(f"vertices {sorted(missing)} are not on the face")
    return seen


def one_face_steiner(g: Graph, terminals: Iterable[int], face: Face | Sequence[int],
                     table: DistanceTable | None = None) -> SteinerSolution:
    """Minimum Steiner tree when every terminal lies on one face.

    ``face`` may also be an explicit cyclic order of the terminals.  Only
    intervals of that order are ever combined.
    """
    order = face_order(face, terminals) if isinstance(face, Face) else [int(x) for x in face]
    if set(order) != set(terminals):
        raise TerminalOffFace("cyclic order does not match the terminal set")
    if len(order) == 1:
        return SteinerSolution((), 0)
    _, table, _ = _prepare(g, order, table)
    root = order[-1]
    others = order[:-1]
    k = len(others)
    masks = []
    for length in range(1, k + 1):
        for i in range(0, k - length + 1):
            masks.append(((1 << length) - 1) << i)

    def splits(mask):
        low = (mask & -mask).bit_length() - 1
        high = mask.bit_length()
        return [(((1 << (m - low)) - 1) << low, mask ^ (((1 << (m - low)) - 1) << low))
                for m in range(low + 1, high)]

    dp = _SubsetDP(table, others, masks, splits)
    return _finish(g, table, dp, (1 << k) - 1, root, order)


def _mst_weight(n_vertices: list[int], edges: list[tuple[int, int, int, int]]):
    uf = UnionFind(n_vertices)
    total, used = 0, []
    for w, eid, u, v in edges:
        if uf.union(u, v):
            total += w
            used.append(eid)
    root = uf.find(n_vertices[0])
    if any(uf.find(x) != root for x in n_vertices):
        return None, None
    return total, used


def exhaustive_min_steiner(g: Graph, terminals: Iterable[int], max_edges: int = 24) -> SteinerSolution:
    """Brute force: the best minimum spanning tree over all Steiner vertex sets.

    Every Steiner tree spans some vertex set containing the terminals, and
    the lightest one on a fixed vertex set is a minimum spanning tree of the
    induced subgraph, so trying every superset of the terminals is exact.
    """
    if g.m > max_edges:
        raise TooLarge(f"{g.m} edges exceed the exhaustive limit {max_edges}")
    ts = sorted(set(terminals))
    if len(ts) == 1:
        return SteinerSolution((), 0)
    others = [v for v in range(g.n) if v not in set(ts)]
    if len(others) > 22:
        raise TooLarge("too many non-terminal vertices for subset enumeration")
    sorted_edges = sorted((e.w, i, e.u, e.v) for i, e in enumerate(g.edges))
    best = None
    for r in range(len(others) + 1):
        for extra in itertools.combinations(others, r):
            vs = set(ts) | set(extra)
            sub = [x for x in sorted_edges if x[2] in vs and x[3] in vs]
            w, used = _mst_weight(sorted(vs), sub)
            if w is not None and (best is None or w < best[0]):
                best = (w, used)
    if best is None:
        raise Unreachable("terminals lie in different components")
    return SteinerSolution.from_edges(g, best[1])


def exhaustive_block_forest(g: Graph, boundary: Iterable[int], blocks: Sequence[Sequence[int]],
                            terminals: Iterable[int], max_edges: int = 24):
    """Brute-force minimum forest realizing a boundary partition exactly.

    Terminals must reach the boundary, and two boundary vertices are joined
    exactly when they share a block.  Returns ``(weight, edges)`` or ``None``.
    Edges are branched in order with a weight cutoff.
    """
    if g.m > max_edges:
        raise TooLarge(f"{g.m} edges exceed the exhaustive limit {max_edges}")
    boundary = sorted(set(boundary))
    block_of = {x: i for i, b in enumerate(blocks) for x in b}
    ts = sorted(set(terminals) - set(boundary))
    order = sorted(range(g.m), key=lambda i: (g.edges[i].w, i))
    best: list = [None, None]

    def feasible(chosen: list[int]) -> bool:
        uf = UnionFind(range(g.n))
        for eid in chosen:
            e = g.edges[eid]
            uf.union(e.u, e.v)
        for a, b in itertools.combinations(boundary, 2):
            if uf.same(a, b) != (block_of[a] == block_of[b]):
                return False
        reps = {uf.find(b) for b in boundary}
        return all(uf.find(t) in reps for t in ts)

    chosen: list[int] = []

    def rec(i: int, w: int) -> None:
        if best[0] is not None and w >= best[0]:
            return
        if feasible(chosen):
            if best[0] is None or w < best[0]:
                best[0], best[1] = w, list(chosen)
            return
        if i == len(order):
            return
        eid = order[i]
        chosen.append(eid)
        rec(i + 1, w + g.edges[eid].w)
        chosen.pop()
        rec(i + 1, w)

    rec(0, 0)
    if best[0] is None:
        return None
    return best[0], sorted(best[1])


def enumerate_optimal_subsets(g: Graph, accept: Callable[[frozenset[int]], bool], max_edges: int = 16):
    """All edge subsets accepted by ``accept`` that attain the minimum weight."""
    if g.m > max_edges:
        raise TooLarge(f"{g.m} edges exceed the enumeration limit {max_edges}")
    best, found = None, []
    for mask in range(1 << g.m):
        es = frozenset(i for i in range(g.m) if mask >> i & 1)
        w = g.weight_of(es)
        if best is not None and w > best:
            continue
        if not accept(es):
            continue
        if best is None or w < best:
            best, found = w, [es]
        else:
            found.append(es)
    return best, found


def with_apex(g: Graph, anchors: Iterable[int]) -> tuple[Graph, int]:
    """Copy of ``g`` plus a new vertex joined to every anchor by weight 0."""
    apex = g.n
    extra = tuple(Edge(p, apex, 0) for p in sorted(set(anchors)))
    return Graph(g.n + 1, tuple(g.edges) + extra), apex


def portal_anchored_forest(g: Graph, terminals: Iterable[int], portals: Iterable[int],
                           cap: int = DEFAULT_TERMINAL_CAP) -> SteinerSolution:
    """Cheapest forest in which every terminal reaches some portal.

    Each component contains a portal; solved as a Steiner tree through a
    zero-weight apex.  The returned edge ids refer to ``g``.
    """
    aug, apex = with_apex(g, portals)
    sol = dreyfus_wagner(aug, set(terminals) | {apex}, cap=cap + 1)
    own = [e for e in sol.edges if e < g.m]
    return SteinerSolution.from_edges(g, own)


def portal_anchored_forest_min(g: Graph, terminals: Iterable[int], portals: Iterable[int],
                               cap: int = DEFAULT_TERMINAL_CAP) -> int:
    return portal_anchored_forest(g, terminals, portals, cap).weight


def steiner_with_forced_edges(g: Graph, terminals: Iterable[int], forced: Iterable[int],
                              banned_edges: Iterable[int] = ()) -> int:
    """Lightest connected subgraph containing the terminals and every forced edge.

    Forced edges are contracted, the rest is an ordinary Steiner problem.
    Banned edges are deleted first.
    """
    forced = sorted(set(forced))
    banned = set(banned_edges)
    uf = UnionFind(range(g.n))
    for eid in forced:
        e = g.edges[eid]
        uf.union(e.u, e.v)
    reps = sorted({uf.find(v) for v in range(g.n)})
    idx = {r: i for i, r in enumerate(reps)}
    new_edges = []
    for i, e in enumerate(g.edges):
        if i in banned or i in forced:
            continue
        a, b = idx[uf.find(e.u)], idx[uf.find(e.v)]
        if a != b:
            new_edges.append(Edge(a, b, e.w))
    h = Graph(len(reps), tuple(new_edges))
    ts = {idx[uf.find(t)] for t in terminals} | {idx[uf.find(g.edges[f].u)] for f in forced}
    base = sum(g.edges[f].w for f in forced)
    return base + dreyfus_wagner(h, ts, cap=max(DEFAULT_TERMINAL_CAP, len(ts))).weight


def without_edges(g: Graph, removed: Iterable[int]) -> Graph:
    removed = set(removed)
    return Graph(g.n, tuple(e for i, e in enumerate(g.edges) if i not in removed))
