"""Recursive Block Steiner Forest solver for terminals on few faces.

An instance is ``(G, B, pi, T, K)``: find the lightest edge set in which
every terminal of ``T`` reaches the boundary ``B`` and two boundary vertices
are connected exactly when ``pi`` puts them in the same block.  ``K`` lists
the faces that carry the terminals.

Large instances are split along a small vertex set ``X``.  The boundary and
the terminal faces are shared out between two sides, faces touched by ``X``
are cut into segments, and every pair of boundary partitions whose join
restricts to ``pi`` is tried.  Small instances go to an exhaustive base
case that guesses which block each terminal joins (non-crossing along every
face) and solves one Steiner tree per block.
"""

from __future__ import annotations

import heapq
import itertools
import math
from collections import OrderedDict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .errors import Infeasible, Unreachable
from .graph import Face, PlanarGraph, UnionFind, clean_tree
from .io import SteinerInstance
from .noncrossing import noncrossing_sequences
from .oracles import DistanceTable, dreyfus_wagner, face_order, one_face_steiner
from .partition import Partition, enumerate_partitions
from .preprocess import lift_solution, make_subcubic_2connected

INF = math.inf


@dataclass(frozen=True)
class PbsfInstance:
    graph: PlanarGraph
    B: tuple[int, ...]
    pi: Partition
    T: frozenset[int]
    K: tuple[int, ...]

    def __post_init__(self):
        if set(self.B) != set(self.pi.ground):
            raise ValueError("pi must partition exactly the boundary set")
        covered = set()
        for f in self.K:
            covered |= self.graph.faces[f].vertex_set
        if not set(self.T) <= covered:
            raise ValueError("every terminal must lie on a terminal face")


@dataclass(frozen=True)
class SolverConfig:
    c0: int = 8
    sep_max: int = 2
    parallel: bool = False
    threads: int = 0
    dw_cap: int = 16

    def __post_init__(self):
        if self.c0 < 1 or self.sep_max < 0:
            raise ValueError("need c0 >= 1 and sep_max >= 0")


@dataclass
class SolverStats:
    recursion_depth: int = 0
    base_case_calls: int = 0
    separators_tried: int = 0
    recursion_nodes: int = 0
    stalled_children: int = 0
    window_fallbacks: int = 0
    strict_fallbacks: int = 0
    contraction_violations: int = 0
    truncated: bool = False

    def merge(self, other: "SolverStats") -> None:
        self.recursion_depth = max(self.recursion_depth, other.recursion_depth)
        for name in ("base_case_calls", "separators_tried", "recursion_nodes",
                     "stalled_children", "window_fallbacks", "strict_fallbacks",
                     "contraction_violations"):
            setattr(self, name, getattr(self, name) + getattr(other, name))
        self.truncated = self.truncated or other.truncated

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class PbsfResult:
    weight: float | int
    edges: tuple[int, ...]
    optimal_certified: bool
    stats: SolverStats = field(compare=False)

    @property
    def feasible(self) -> bool:
        return self.weight != INF


def faces_hit(faces: Sequence[Face], x: Iterable[int]) -> list[Face]:
    xs = set(x)
    return [f for f in faces if len(f.boundary) > 0 and f.vertex_set & xs]


def face_components(face: Face, x: Iterable[int]) -> Partition:
    """Pieces of the face boundary left after deleting ``x``."""
    xs = set(x)
    walk = face.vertices_in_order
    uf = UnionFind(v for v in walk if v not in xs)
    for a, b in zip(walk, walk[1:] + walk[:1]):
        if a not in xs and b not in xs:
            uf.union(a, b)
    groups: dict[int, list[int]] = {}
    for v in uf.parent:
        groups.setdefault(uf.find(v), []).append(v)
    return Partition.of(groups.values())


def _key(weight, edges) -> tuple:
    return (weight, tuple(edges))


class _Context:
    """Per-solve state: the graph, distance tables and tree caches."""

    def __init__(self, g: PlanarGraph, cfg: SolverConfig):
        self.g = g
        self.cfg = cfg
        self.stats = SolverStats()
        self.tables: OrderedDict = OrderedDict()
        self.trees: OrderedDict = OrderedDict()
        self.seqs: dict[tuple[int, int], list[tuple[int, ...]]] = {}
        self.fvs = [f.vertex_set for f in g.faces]
        self.memo: dict[tuple, tuple] = {}

    def table(self, banned: frozenset[int]) -> DistanceTable:
        tab = self.tables.get(banned)
        if tab is None:
            tab = DistanceTable(self.g, banned)
            self.tables[banned] = tab
            if len(self.tables) > 64:
                self.tables.popitem(last=False)
        else:
            self.tables.move_to_end(banned)
        return tab

    def tree(self, group: frozenset[int], banned: frozenset[int], faces: Sequence[int]):
        """Cheapest tree spanning ``group`` avoiding ``banned``; ``(INF, ())`` if none."""
        if len(group) <= 1:
            return 0, ()
        key = (group, banned)
        hit = self.trees.get(key)
        if hit is not None:
            self.trees.move_to_end(key)
            return hit
        try:
            home = next((f for f in faces if group <= self.fvs[f] and self.g.faces[f].is_simple_cycle()), None)
            if not banned and home is not None:
                sol = one_face_steiner(self.g, group, self.g.faces[home], table=self.table(banned))
            else:
                sol = dreyfus_wagner(self.g, group, cap=self.cfg.dw_cap, table=self.table(banned))
            out = (sol.weight, sol.edges)
        except Unreachable:
            out = (INF, ())
        self.trees[key] = out
        if len(self.trees) > 20000:
            self.trees.popitem(last=False)
        return out

    def sequences(self, length: int, ell: int):
        key = (length, ell)
        if key not in self.seqs:
            self.seqs[key] = list(noncrossing_sequences(length, ell))
        return self.seqs[key]


def _assignments(ctx: _Context, blocks, terms: list[int], faces: Sequence[int]):
    """Block labels for the terminals, non-crossing along every terminal face."""
    ell = len(blocks)
    fixed = {x: i + 1 for i, b in enumerate(blocks) for x in b}
    wanted = set(terms)
    rows = []
    for f in faces:
        order = face_order(ctx.g.faces[f], (wanted | set(fixed)) & ctx.fvs[f])
        if set(order) & wanted:
            rows.append(order)
    loose = sorted(wanted - set().union(*[set(r) for r in rows]) if rows else wanted)

    def rec(i: int, label: dict[int, int]):
        if i == len(rows):
            for combo in itertools.product(range(1, ell + 1), repeat=len(loose)):
                out = dict(label)
                out.update(zip(loose, combo))
                yield out
            return
        order = rows[i]
        pinned = [(p, fixed.get(v, label.get(v))) for p, v in enumerate(order)]
        pinned = [(p, lab) for p, lab in pinned if lab is not None]
        for seq in ctx.sequences(len(order), ell):
            if all(seq[p] == lab for p, lab in pinned):
                nxt = dict(label)
                for v, lab in zip(order, seq):
                    if v not in fixed:
                        nxt[v] = lab
                yield from rec(i + 1, nxt)

    yield from rec(0, {})


def _base(ctx: _Context, B: tuple[int, ...], pi: Partition, T: frozenset[int], K: tuple[int, ...]):
    ctx.stats.base_case_calls += 1
    terms = sorted(set(T) - set(B))
    if not B:
        return (0, ()) if not terms else (INF, ())
    blocks = pi.blocks
    ell = len(blocks)
    heap = []
    counter = itertools.count()
    seen_groups = set()
    for lab in _assignments(ctx, blocks, terms, K):
        groups = tuple(frozenset(blocks[i]) | {t for t, x in lab.items() if x == i + 1} for i in range(ell))
        if groups in seen_groups:
            continue
        seen_groups.add(groups)
        lb = 0
        for grp in groups:
            lb += ctx.tree(grp, frozenset(), K)[0]
        if lb < INF:
            heapq.heappush(heap, (lb, next(counter), groups, None, None))

    while heap:
        key, _, groups, extra, done = heapq.heappop(heap)
        if done is not None:
            return key, done
        if extra is None:
            extra = tuple(frozenset() for _ in groups)
        everything = frozenset().union(*groups)
        trees = []
        total = 0
        for i, grp in enumerate(groups):
            banned = (everything - grp) | extra[i]
            w, es = ctx.tree(grp, banned, K) if ell > 1 else ctx.tree(grp, frozenset(), K)
            total += w
            trees.append((grp, es))
        if total == INF:
            continue
        owner: dict[int, int] = {}
        clash = None
        for i, (grp, es) in enumerate(trees):
            verts = set(grp)
            for eid in es:
                e = ctx.g.edges[eid]
                verts.update((e.u, e.v))
            for v in sorted(verts):
                if v in owner and owner[v] != i:
                    clash = (v, owner[v], i)
                    break
                owner[v] = i
            if clash:
                break
        if clash is None:
            edges = tuple(sorted(set().union(*[set(es) for _, es in trees])))
            heapq.heappush(heap, (total, next(counter), groups, extra, edges))
            continue
        v, i, j = clash
        for side in (i, j):
            new_extra = tuple(x | {v} if k == side else x for k, x in enumerate(extra))
            heapq.heappush(heap, (total, next(counter), groups, new_extra, None))
    return INF, ()


def _measure(ctx: _Context, B, T, K) -> int:
    return len(B) + sum(1 for f in K if ctx.fvs[f] & T)


def _child(ctx: _Context, B, pi, T, K, depth: int, parent_mu: int, bound: float):
    mu = _measure(ctx, B, T, K)
    if mu > (2 / 3) * parent_mu + 4 * bound:
        ctx.stats.contraction_violations += 1
    stalled = mu >= parent_mu
    if stalled:
        ctx.stats.stalled_children += 1
    key = (stalled, B, pi, T, K)
    hit = ctx.memo.get(key)
    if hit is None:
        hit = _base(ctx, B, pi, T, K) if stalled else _solve(ctx, B, pi, T, K, depth)
        ctx.memo[key] = hit
    return hit


def _separator_bound(mu: int) -> int:
    return math.floor(15 * math.sqrt(mu) + 2)


def _candidates(ctx: _Context, mu: int) -> list[tuple[int, ...]]:
    bound = _separator_bound(mu)
    size = min(ctx.cfg.sep_max, bound, ctx.g.n)
    if size < bound and size < ctx.g.n:
        ctx.stats.truncated = True
    return [x for s in range(size + 1) for x in itertools.combinations(range(ctx.g.n), s)]


def _split_over(ctx: _Context, B, pi: Partition, T: frozenset[int], K, depth: int, xs) -> tuple:
    """Best decomposition over the given separators; returns ``(weight, edges, fired)``."""
    KT = [f for f in K if ctx.fvs[f] & T]
    mu = len(B) + len(KT)
    bound = _separator_bound(mu)
    best = (INF, ())
    fired = False
    Bset = set(B)
    for X in xs:
        ctx.stats.separators_tried += 1
        Xs = frozenset(X)
        KX = [f for f in K if ctx.fvs[f] & Xs]
        availB = [b for b in B if b not in Xs]
        availK = [f for f in KT if f not in KX]
        segments = []
        for f in KX:
            for blk in face_components(ctx.g.faces[f], Xs).blocks:
                if T.intersection(blk):
                    segments.append(frozenset(blk))
        kx_verts = frozenset().union(*[ctx.fvs[f] for f in KX]) if KX else frozenset()
        for nb in range(len(availB) + 1):
            for B1 in itertools.combinations(availB, nb):
                for nk in range(len(availK) + 1):
                    r = nb + nk
                    if not (3 * r >= mu and 3 * r <= 2 * mu):
                        continue
                    for K1 in itertools.combinations(availK, nk):
                        B2 = tuple(b for b in availB if b not in B1)
                        K2 = tuple(f for f in availK if f not in K1)
                        on1 = frozenset().union(*[ctx.fvs[f] for f in K1]) & T if K1 else frozenset()
                        on2 = frozenset().union(*[ctx.fvs[f] for f in K2]) & T if K2 else frozenset()
                        for na in range(len(segments) + 1):
                            for A1 in itertools.combinations(segments, na):
                                fired = True
                                a1 = frozenset().union(*A1) if A1 else frozenset()
                                T1 = ((a1 & T) | on1) - Xs
                                T2 = (((kx_verts - Xs - a1) & T) | on2) - Xs
                                cand = _combine(ctx, pi, Bset, Xs, tuple(sorted(set(B1) | Xs)),
                                                tuple(sorted(set(B2) | Xs)), T1, T2,
                                                tuple(sorted(set(K1) | set(KX))), tuple(sorted(set(K2) | set(KX))),
                                                depth, mu, bound)
                                if _key(*cand) < _key(*best):
                                    best = cand
    return best[0], best[1], fired


def _combine(ctx, pi, Bset, Xs, bd1, bd2, T1, T2, K1, K2, depth, mu, bound):
    left = []
    for p1 in enumerate_partitions(bd1):
        w, es = _child(ctx, bd1, p1, T1, K1, depth + 1, mu, bound)
        if w != INF:
            left.append((p1, w, es))
    if not left:
        return INF, ()
    right = []
    for p2 in enumerate_partitions(bd2):
        w, es = _child(ctx, bd2, p2, T2, K2, depth + 1, mu, bound)
        if w != INF:
            right.append((p2, w, es))
    if not right:
        return INF, ()
    left.sort(key=lambda r: r[1])
    right.sort(key=lambda r: r[1])
    best = (INF, ())
    for p1, w1, e1 in left:
        if w1 + right[0][1] > best[0]:
            break
        for p2, w2, e2 in right:
            if w1 + w2 > best[0]:
                break
            joined = p1.join(p2)
            if joined.project(Bset) != pi:
                continue
            idx = joined.block_index()
            anchored = {idx[b] for b in Bset}
            if any(idx[u] not in anchored for u in Xs):
                continue
            cand = (w1 + w2, tuple(sorted(set(e1) | set(e2))))
            if _key(*cand) < _key(*best):
                best = cand
    return best


def _solve(ctx: _Context, B, pi, T, K, depth: int):
    ctx.stats.recursion_depth = max(ctx.stats.recursion_depth, depth)
    mu = _measure(ctx, B, T, K)
    if mu <= ctx.cfg.c0:
        return _base(ctx, B, pi, T, K)
    xs = _candidates(ctx, mu)
    if depth == 0 and ctx.cfg.parallel:
        w, es, fired = _parallel_split(ctx, B, pi, T, K, xs)
    else:
        w, es, fired = _split_over(ctx, B, pi, T, K, depth, xs)
    if not fired:
        ctx.stats.window_fallbacks += 1
        return _base(ctx, B, pi, T, K)
    ctx.stats.recursion_nodes += 1
    return w, es


def _worker(args):
    g, cfg, B, pi, T, K, xs = args
    ctx = _Context(g, cfg)
    w, es, fired = _split_over(ctx, B, pi, T, K, 0, xs)
    return w, es, fired, ctx.stats


def _parallel_split(ctx: _Context, B, pi, T, K, xs):
    workers = ctx.cfg.threads or None
    n_chunks = max(1, min(len(xs), 4 * (workers or 4)))
    chunks = [xs[i::n_chunks] for i in range(n_chunks)]
    jobs = [(ctx.g, replace(ctx.cfg, parallel=False), B, pi, T, K, c) for c in chunks if c]
    best, fired = (INF, ()), False
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for w, es, f, st in pool.map(_worker, jobs):
            fired = fired or f
            ctx.stats.merge(st)
            if _key(w, es) < _key(*best):
                best = (w, es)
    return best[0], best[1], fired


def steiner(inst: PbsfInstance, cfg: SolverConfig = SolverConfig()) -> PbsfResult:
    """Lightest Block Steiner Forest of ``inst`` with a cleaned witness.

    The split recursion may let two sides touch outside the separator, so
    with several blocks its value is only a lower bound.  When the witness
    merges blocks the exhaustive base case settles the instance instead.
    """
    ctx = _Context(inst.graph, cfg)
    B = tuple(sorted(inst.B))
    w, es = _solve(ctx, B, inst.pi, frozenset(inst.T), tuple(inst.K), 0)
    if w != INF and len(inst.pi) > 1 and realized_partition(inst.graph, es, B) != inst.pi:
        ctx.stats.strict_fallbacks += 1
        w, es = _base(ctx, B, inst.pi, frozenset(inst.T), tuple(inst.K))
    if w == INF:
        return PbsfResult(INF, (), not ctx.stats.truncated, ctx.stats)
    edges = tuple(clean_tree(inst.graph, es, set(inst.B) | set(inst.T)))
    weight = inst.graph.weight_of(edges)
    if weight > w:
        raise AssertionError("cleaning increased the weight")
    return PbsfResult(weight, edges, not ctx.stats.truncated, ctx.stats)


def steiner_base(inst: PbsfInstance, cfg: SolverConfig = SolverConfig()) -> PbsfResult:
    """Exhaustive base case on its own, whatever the instance size."""
    ctx = _Context(inst.graph, cfg)
    w, es = _base(ctx, tuple(sorted(inst.B)), inst.pi, frozenset(inst.T), tuple(inst.K))
    if w == INF:
        return PbsfResult(INF, (), True, ctx.stats)
    edges = tuple(clean_tree(inst.graph, es, set(inst.B) | set(inst.T)))
    return PbsfResult(inst.graph.weight_of(edges), edges, True, ctx.stats)


def realized_partition(g: PlanarGraph, edges: Iterable[int], boundary: Iterable[int]) -> Partition:
    uf = UnionFind(boundary)
    for eid in edges:
        e = g.edges[eid]
        uf.union(e.u, e.v)
    groups: dict[int, list[int]] = {}
    for b in boundary:
        groups.setdefault(uf.find(b), []).append(b)
    return Partition.of(groups.values())


@dataclass(frozen=True)
class TreeResult:
    weight: int
    edges: tuple[int, ...]
    optimal_certified: bool
    stats: SolverStats = field(compare=False)


def solve_steiner_tree(inst: SteinerInstance, cfg: SolverConfig = SolverConfig()) -> TreeResult:
    """Full pipeline: preprocess, solve from one terminal, lift back."""
    if not inst.terminals:
        return TreeResult(0, (), True, SolverStats())
    if inst.graph.n > 1 and not inst.graph.is_connected():
        comp = next(c for c in inst.graph.components() if inst.terminals[0] in c)
        if not set(inst.terminals) <= set(comp):
            raise Infeasible("terminals lie in different components")
    pp = make_subcubic_2connected(inst.graph, inst.terminals, inst.faces)
    t0 = pp.terminals[0]
    pinst = PbsfInstance(pp.graph, (t0,), Partition.whole([t0]), frozenset(pp.terminals) - {t0}, pp.faces)
    res = steiner(pinst, cfg)
    if res.weight == INF:
        raise Infeasible("terminals cannot be connected")
    lifted = lift_solution(pp.backmap, pp.graph, res.edges)
    weight = inst.graph.weight_of(lifted)
    if weight > res.weight:
        raise AssertionError("lifting increased the weight")
    return TreeResult(weight, tuple(lifted), res.optimal_certified, res.stats)
