"""The interval grid, its rolled-up flower version, and checks of their metric.

Vertices are discrete intervals ``[a, b]``; an interval is joined to the two
intervals one element shorter.  The edge below an interval with ``b - a = d``
weighs ``scale >> floor(log2 d)``, so ``scale`` is the weight of one "unit".

Windows of the infinite grid are finite graphs.  Whenever a statement about
the infinite grid is checked inside a window, the window is certified: a
zero-weight apex joined to the window's rim lower-bounds every tree that
would leave it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .embed import EmbeddingBuilder, signed_area
from .errors import BadParameters, BadRoot, NonIntegralWeight, TooLarge, WindowTooSmall
from .graph import PlanarGraph, UnionFind, dijkstra
from .oracles import (DistanceTable, SteinerSolution, _SubsetDP, _all_splits, dreyfus_wagner,
                      enumerate_optimal_subsets, portal_anchored_forest, with_apex)


def floor_log2(x: int) -> int:
    if x < 1:
        raise ValueError("floor_log2 needs a positive argument")
    return x.bit_length() - 1


def is_power_of_two(x: int) -> bool:
    return x >= 1 and x & (x - 1) == 0


def edge_weight(scale: int, d: int) -> int:
    """Weight of the edge below an interval of span ``d = b - a``."""
    k = floor_log2(d)
    if scale % (1 << k):
        raise NonIntegralWeight(f"scale {scale} is not divisible by 2^{k}")
    return scale >> k


@dataclass(frozen=True, order=True)
class IntervalVertex:
    a: int
    b: int
    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is None:
            if self.a > self.b:
                raise ValueError("need a <= b")
        else:
            t = self.modulus
            if not (0 <= self.a < t and 0 <= self.b < t):
                raise ValueError("endpoints must lie in 0..t-1")
            if self.size > t // 2:
                raise ValueError("rolled intervals have size at most t/2")

    @property
    def size(self) -> int:
        if self.modulus is None:
            return self.b - self.a + 1
        return (self.b - self.a) % self.modulus + 1

    def members(self) -> tuple[int, ...]:
        if self.modulus is None:
            return tuple(range(self.a, self.b + 1))
        return tuple((self.a + i) % self.modulus for i in range(self.size))

    def contains(self, other: "IntervalVertex") -> bool:
        return set(other.members()) <= set(self.members())

    def children(self) -> list["IntervalVertex"]:
        if self.size == 1:
            return []
        if self.modulus is None:
            return [IntervalVertex(self.a + 1, self.b), IntervalVertex(self.a, self.b - 1)]
        t = self.modulus
        return [IntervalVertex((self.a + 1) % t, self.b, t), IntervalVertex(self.a, (self.b - 1) % t, t)]

    def __str__(self) -> str:
        sub = f"_{self.modulus}" if self.modulus else ""
        return f"[{self.a},{self.b}]{sub}"


def iv(a: int, b: int | None = None, modulus: int | None = None) -> IntervalVertex:
    b = a if b is None else b
    if modulus is not None:
        a, b = a % modulus, b % modulus
    return IntervalVertex(a, b, modulus)


@dataclass(frozen=True)
class IntervalGraph:
    """A plane graph whose vertices are intervals, with the lookup both ways."""

    graph: PlanarGraph
    scale: int
    vertices: tuple[IntervalVertex, ...]
    positions: tuple[tuple[float, float], ...] = field(repr=False)

    @cached_property
    def vertex_index(self) -> dict[IntervalVertex, int]:
        return {p: i for i, p in enumerate(self.vertices)}

    def id(self, p: IntervalVertex) -> int:
        return self.vertex_index[p]

    def has(self, p: IntervalVertex) -> bool:
        return p in self.vertex_index

    @cached_property
    def edge_between(self) -> dict[tuple[int, int], int]:
        return {(min(e.u, e.v), max(e.u, e.v)): i for i, e in enumerate(self.graph.edges)}

    def edge(self, p: IntervalVertex, q: IntervalVertex) -> int:
        u, v = self.id(p), self.id(q)
        return self.edge_between[(min(u, v), max(u, v))]

    def unscaled(self, w) -> float:
        return w / self.scale


def _build(vertices: list[IntervalVertex], scale: int, pos) -> IntervalGraph:
    b = EmbeddingBuilder()
    index = {}
    for p in vertices:
        index[p] = b.add_vertex(*pos(p))
    for p in vertices:
        for c in p.children():
            if c in index:
                b.add_edge(index[c], index[p], edge_weight(scale, p.size - 1))
    return IntervalGraph(b.build(), scale, tuple(vertices), tuple(b.positions))


@dataclass(frozen=True)
class GammaWindow(IntervalGraph):
    x_lo: int = 0
    x_hi: int = 0
    max_size: int = 1

    @cached_property
    def rim(self) -> frozenset[int]:
        """Window vertices with a neighbour in the full grid outside the window."""
        out = set()
        for p in self.vertices:
            parents = [IntervalVertex(p.a - 1, p.b), IntervalVertex(p.a, p.b + 1)]
            if any(not self.has(q) for q in parents + p.children()):
                out.add(self.id(p))
        return frozenset(out)


def min_scale(max_size: int) -> int:
    return 1 << floor_log2(max(max_size - 1, 1))


def gamma_window(x_lo: int, x_hi: int, max_size: int, scale: int | None = None) -> GammaWindow:
    """Intervals inside ``[x_lo, x_hi]`` with at most ``max_size`` elements."""
    if x_hi < x_lo or max_size < 1:
        raise BadParameters("empty window")
    scale = min_scale(max_size) if scale is None else scale
    verts = [IntervalVertex(a, a + s - 1) for s in range(1, max_size + 1)
             for a in range(x_lo, x_hi - s + 2)]
    base = _build(verts, scale, lambda p: ((p.a + p.b) / 2, float(p.b - p.a)))
    return GammaWindow(base.graph, scale, base.vertices, base.positions, x_lo, x_hi, max_size)


@dataclass(frozen=True)
class FlowerGadget(IntervalGraph):
    t: int = 4
    terminals: tuple[int, ...] = ()
    portals: tuple[int, ...] = ()
    carpel: int = -1
    outer: int = -1

    @property
    def optimum(self) -> int:
        """Weight of a cheapest portal-anchored forest, in scaled units."""
        return (2 * self.t - 4) * self.scale

    def portal(self, a: int) -> IntervalVertex:
        h = self.t // 2
        return iv(a, a + h - 1, self.t)


def flower_positions(t: int, radius: float = 1.0):
    """Cylinder drawing: size grows outward, the start index turns clockwise."""
    def pos(p: IntervalVertex):
        c = p.a + (p.size - 1) / 2
        ang = -2 * math.pi * c / t
        r = radius * (1 + p.size)
        return r * math.cos(ang), r * math.sin(ang)
    return pos


def build_flower(t: int, scale: int | None = None) -> FlowerGadget:
    if t < 4 or not is_power_of_two(t):
        raise BadParameters("t must be a power of two, at least 4")
    scale = max(t // 4, 1) if scale is None else scale
    if not is_power_of_two(scale) or scale < t // 4:
        raise BadParameters("scale must be a power of two, at least t/4")
    return flower_with_scale(t, scale)


def flower_with_scale(t: int, scale: int) -> FlowerGadget:
    """Like :func:`build_flower` but for any scale divisible by t/4."""
    if t < 4 or not is_power_of_two(t):
        raise BadParameters("t must be a power of two, at least 4")
    h = t // 2
    verts = [iv(a, a + s - 1, t) for s in range(1, h + 1) for a in range(t)]
    base = _build(verts, scale, flower_positions(t))
    g = base.graph
    idx = {p: i for i, p in enumerate(base.vertices)}
    terminals = tuple(idx[iv(a, a, t)] for a in range(t))
    portals = tuple(idx[iv(a, a + h - 1, t)] for a in range(t))
    areas = [signed_area([base.positions[v] for v in f.vertices_in_order]) for f in g.faces]
    outer = int(np.argmin(areas))
    carpel = next(i for i, f in enumerate(g.faces) if set(terminals) <= f.vertex_set and i != outer)
    return FlowerGadget(g, scale, base.vertices, base.positions, t, terminals, portals, carpel, outer)


def closed_form_distance(p: IntervalVertex, q: IntervalVertex, scale: int) -> int:
    """Straight paths through the smallest common ancestor (unrolled grid)."""
    top = IntervalVertex(min(p.a, q.a), max(p.b, q.b))
    return monotone_weight(p.size, top.size, scale) + monotone_weight(q.size, top.size, scale)


def monotone_weight(size_lo: int, size_hi: int, scale: int) -> int:
    return sum(edge_weight(scale, s) for s in range(size_lo, size_hi))


def interval_distance(g: IntervalGraph, p: IntervalVertex, q: IntervalVertex) -> int:
    d, _ = dijkstra(g.graph, g.id(p), frozenset())
    out = d[g.id(q)]
    if out is None:
        raise ValueError("vertices are not connected")
    return out


def _tree_edges(g: IntervalGraph, lo: int, hi: int, wrap: int | None) -> list[int]:
    """Complete binary tree from ``[lo, hi]`` down to its singletons.

    Each half hangs off the root by the straight path that keeps its outer
    endpoint fixed.
    """
    size = hi - lo + 1
    if not is_power_of_two(size):
        raise BadRoot("binary trees need a power-of-two interval size")

    def node(a, b):
        return iv(a, b, wrap) if wrap else IntervalVertex(a, b)

    out: list[int] = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        if a == b:
            continue
        mid = (a + b) // 2
        for x in range(b, mid, -1):
            out.append(g.edge(node(a, x), node(a, x - 1)))
        for x in range(a, mid + 1):
            out.append(g.edge(node(x, b), node(x + 1, b)))
        stack += [(a, mid), (mid + 1, b)]
    return out


def binary_tree(g: IntervalGraph, lo: int, hi: int) -> SteinerSolution:
    wrap = g.t if isinstance(g, FlowerGadget) else None
    return SteinerSolution.from_edges(g.graph, _tree_edges(g, lo, hi, wrap))


def canonical_forest(f: FlowerGadget, a: int) -> SteinerSolution:
    """Two binary trees rooted at the opposite portals starting at ``a`` and ``a + t/2``."""
    h = f.t // 2
    if not 1 <= a <= h:
        raise BadRoot(f"a must lie in 1..{h}")
    edges = _tree_edges(f, a, a + h - 1, f.t) + _tree_edges(f, a + h, a + f.t - 1, f.t)
    return SteinerSolution.from_edges(f.graph, edges)


def forest_components(g: PlanarGraph, edges) -> list[frozenset[int]]:
    uf = UnionFind()
    for eid in edges:
        e = g.edges[eid]
        uf.union(e.u, e.v)
    groups: dict[int, set[int]] = {}
    for v in list(uf.parent):
        groups.setdefault(uf.find(v), set()).add(v)
    return [frozenset(s) for s in groups.values()]


def _subset_values(g, terminals, root_table: DistanceTable):
    """Row table: entry ``[mask, v]`` is the cheapest tree on ``mask`` plus ``v``."""
    return _SubsetDP(root_table, list(terminals), [], _all_splits, full_family=True).rows


# ---------------------------------------------------------------- flower checks


@dataclass
class FlowerReport:
    t: int
    scale: int
    optimum: int
    expected: int
    canonical_weights: list[int]
    structure_checked: bool
    structure_ok: bool
    optimal_forests: int
    relaxation_min_non_opposite: int
    relaxation_min_opposite: int
    canonical_split_sum: int
    passed: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _structure_ok(f: FlowerGadget, edges: frozenset[int]) -> bool:
    comps = [c for c in forest_components(f.graph, edges)]
    portal_set = set(f.portals)
    if len(comps) < 2:
        return False
    induced = []
    for c in comps:
        ps = c & portal_set
        if len(ps) != 1:
            return False
        induced.append(f.portals.index(next(iter(ps))))
    h = f.t // 2
    for start in range(f.t):
        window = {(start + i) % f.t for i in range(h)}
        if not window & set(induced):
            return False
    if len(comps) == 2:
        a, b = sorted(induced)
        if b - a != h:
            return False
    return True


def verify_flower_theorem(t: int, scale: int | None = None) -> FlowerReport:
    if t not in (4, 8):
        raise TooLarge("flower verification is tractable for t in {4, 8}")
    f = build_flower(t, scale)
    g = f.graph
    expected = f.optimum
    best = portal_anchored_forest(g, f.terminals, f.portals, cap=t + 1).weight
    canon = [canonical_forest(f, a).weight for a in range(1, t // 2 + 1)]

    structure_checked = t == 4
    structure_ok, count = True, 0
    if structure_checked:
        tset, pset = set(f.terminals), set(f.portals)

        def accept(es: frozenset[int]) -> bool:
            uf = UnionFind(range(g.n))
            for eid in es:
                e = g.edges[eid]
                uf.union(e.u, e.v)
            roots = {uf.find(p) for p in pset}
            return all(uf.find(x) in roots for x in tset)

        weight, optima = enumerate_optimal_subsets(g, accept, max_edges=16)
        count = len(optima)
        structure_ok = weight == expected and all(_structure_ok(f, es) for es in optima)

    # every portal's row covers every terminal subset at once
    tab = DistanceTable(g)
    rows = _subset_values(g, f.terminals, tab)
    full = (1 << t) - 1
    h = t // 2
    non_opp, opp = math.inf, math.inf
    for i, j in itertools.combinations(range(t), 2):
        p, q = f.portals[i], f.portals[j]
        vals = [int(rows[m, p]) + int(rows[full ^ m, q]) if 0 < m < full else math.inf
                for m in range(1 << t)]
        lo = min(vals) * tab.scale
        if j - i == h:
            opp = min(opp, lo)
        else:
            non_opp = min(non_opp, lo)
    left = sum(1 << k for k in range(1, h + 1))
    split = (int(rows[left, f.portals[1]]) + int(rows[full ^ left, f.portals[1 + h]])) * tab.scale
    passed = (best == expected and all(c == expected for c in canon) and structure_ok
              and non_opp > expected and opp == expected and split == expected)
    return FlowerReport(t, f.scale, best, expected, canon, structure_checked, structure_ok,
                        count, non_opp, opp, split, passed)


# ---------------------------------------------------------------- triangle lemma


@dataclass
class TrianglePoint:
    p: str
    bound: int
    window_optimum: int
    escape_bound: int
    certified: bool
    exact: bool


@dataclass
class TriangleReport:
    ell: int
    scale: int
    window: tuple[int, int, int]
    points: list[TrianglePoint]
    tips: dict[str, int]
    passed: bool

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["points"] = [dict(x.__dict__) for x in self.points]
        return d


def _multi_source(g: PlanarGraph, sources) -> list:
    aug, apex = with_apex(g, sources)
    d, _ = dijkstra(aug, apex, frozenset())
    return d[:g.n]


def verify_triangle_lemma(ell: int, x_lo: int | None = None, x_hi: int | None = None,
                          max_size: int | None = None, reach: int = 2,
                          tips_only: bool = False) -> TriangleReport:
    """Check the Steiner lower bound for ``{p, [0], .., [ell]}`` at every ``p`` near the triangle.

    ``p`` ranges over window vertices within ``reach`` units of the triangle
    of ``[0, ell]``.  For each one the window optimum and the apex escape
    bound must both reach ``2 ell + dist``; the window is too small when the
    escape bound falls short.
    """
    if not 0 <= ell <= 7:
        raise BadParameters("ell must lie in 0..7")
    x_lo = -(ell + 16) if x_lo is None else x_lo
    x_hi = 2 * ell + 16 if x_hi is None else x_hi
    max_size = 3 * ell + 32 if max_size is None else max_size
    w = gamma_window(x_lo, x_hi, max_size)
    g, s = w.graph, w.scale
    tri = [w.id(IntervalVertex(a, b)) for a in range(0, ell + 1) for b in range(a, ell + 1)]
    dist_tri = _multi_source(g, tri)
    bottoms = [w.id(IntervalVertex(i, i)) for i in range(ell + 1)]
    tab = DistanceTable(g)
    rows = _subset_values(g, bottoms, tab)
    full = (1 << len(bottoms)) - 1
    aug, apex = with_apex(g, w.rim)
    atab = DistanceTable(aug)
    arows = _subset_values(aug, bottoms + [apex], atab)
    afull = (1 << (len(bottoms) + 1)) - 1

    tips = {}
    for j in range(0, 4):
        top = (1 << j) - 1
        if top <= ell and w.has(IntervalVertex(0, top)):
            v = w.id(IntervalVertex(0, top))
            tips[str(IntervalVertex(0, top))] = int(rows[(1 << (top + 1)) - 1, v]) * tab.scale

    points = []
    ok = True
    for p in w.vertices:
        v = w.id(p)
        d = dist_tri[v]
        if d is None or d > reach * s:
            continue
        if tips_only and not (p.a == 0 and is_power_of_two(p.b + 1) and p.b == ell):
            continue
        bound = 2 * ell * s + d
        inside = int(rows[full, v]) * tab.scale
        escape = int(arows[afull, v]) * atab.scale
        certified = inside >= bound and escape >= bound
        exact = escape >= inside
        ok = ok and certified
        if not escape >= bound:
            raise WindowTooSmall(f"apex bound {escape} below {bound} at {p}; enlarge the window")
        points.append(TrianglePoint(str(p), bound, inside, escape, certified, exact))
    return TriangleReport(ell, s, (x_lo, x_hi, max_size), points, tips, ok)


# ---------------------------------------------------------------- metric propositions


@dataclass
class MetricReport:
    width: int
    height: int
    monotone_pairs: int
    monotone_ok: bool
    distance_pairs: int
    distance_ok: bool
    vertical_ok: bool
    diagonal_ok: bool
    passed: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _monotone_paths(p: IntervalVertex, q: IntervalVertex):
    """All chains p = x0 < x1 < .. < q growing by one element per step."""
    if p == q:
        yield [p]
        return
    for nxt in (IntervalVertex(p.a - 1, p.b), IntervalVertex(p.a, p.b + 1)):
        if q.a <= nxt.a and nxt.b <= q.b:
            for rest in _monotone_paths(nxt, q):
                yield [p] + rest


def verify_metric(width: int = 10, height: int = 6, margin: int = 16) -> MetricReport:
    """Path and distance identities of the grid on a ``width`` x ``height`` window.

    Distances are computed in a larger window and accepted only when any path
    leaving that window provably costs at least as much.
    """
    inner = [IntervalVertex(a, a + s - 1) for s in range(1, height + 1) for a in range(0, width - s + 1)]
    big = gamma_window(-margin, width - 1 + margin, width + 2 * margin)
    g, s = big.graph, big.scale
    rim_d = _multi_source(g, big.rim)

    mono_pairs, mono_ok = 0, True
    for p in inner:
        for q in inner:
            if p != q and q.contains(p) and q.size - p.size <= 6:
                mono_pairs += 1
                ws = {sum(big.graph.edges[big.edge(x, y)].w for x, y in zip(path, path[1:]))
                      for path in _monotone_paths(p, q)}
                mono_ok = mono_ok and ws == {monotone_weight(p.size, q.size, s)}

    pairs, dist_ok = 0, True
    for p in inner:
        dp, _ = dijkstra(g, big.id(p), frozenset())
        for q in inner:
            pairs += 1
            got = dp[big.id(q)]
            escape = rim_d[big.id(p)] + rim_d[big.id(q)]
            want = closed_form_distance(p, q, s)
            dist_ok = dist_ok and got == want and escape >= got

    vert_ok = diag_ok = True
    for b in range(0, width - 1):
        ld = [big.id(IntervalVertex(x, b)) for x in range(-margin, b + 1)]
        vb = [big.id(x) for x in big.vertices if x.a + x.b == 2 * b + 1]
        rd = [big.id(IntervalVertex(b + 1, x)) for x in range(b + 1, width + margin)]
        d = _multi_source(g, ld)
        vert_ok = vert_ok and min(d[v] for v in vb) == s
        diag_ok = diag_ok and min(d[v] for v in rd) == 2 * s
    passed = mono_ok and dist_ok and vert_ok and diag_ok
    return MetricReport(width, height, mono_pairs, mono_ok, pairs, dist_ok, vert_ok, diag_ok, passed)
