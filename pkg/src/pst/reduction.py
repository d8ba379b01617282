"""Grid Tiling to Planar Steiner Tree.

A Grid Tiling instance has ``k * k`` cells, each a set of pairs over
``[n] x [n]``; it is satisfiable when one can pick ``x_a`` per row and
``y_b`` per column with ``(x_a, y_b)`` in every cell ``(a, b)``.

The constructed graph is drawn on a grid of rows.  Row ``a`` holds, for every
column ``b``, a west gadget followed by an east gadget (the east one turned
upside down), joined by heavy edges; neighbouring cells are glued through
fuse vertices.  Between rows ``a`` and ``a + 1`` sit flower gadgets that tie
the south portals of the west gadgets to the north portals of the east
gadgets one row below.  All rotations come from the drawing; flower edges at
glued portals carry explicit angles.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .embed import EmbeddingBuilder
from .errors import BadParameters, BudgetExceeded, InputError, TooLarge, Unreachable
from .flower import flower_with_scale, is_power_of_two
from .graph import Graph, PlanarGraph
from .io import SteinerInstance
from .oracles import dreyfus_wagner, steiner_with_forced_edges, without_edges

Pair = tuple[int, int]


# --------------------------------------------------------------------------
# Grid Tiling


@dataclass(frozen=True)
class GridTilingInstance:
    n: int
    k: int
    cells: Mapping[Pair, frozenset[Pair]]

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise InputError("n and k must be positive")
        full = {}
        for a in range(1, self.k + 1):
            for b in range(1, self.k + 1):
                pairs = frozenset((int(x), int(y)) for x, y in self.cells.get((a, b), ()))
                for x, y in pairs:
                    if not (1 <= x <= self.n and 1 <= y <= self.n):
                        raise InputError(f"pair ({x},{y}) of cell ({a},{b}) is outside [{self.n}]^2")
                full[(a, b)] = pairs
        extra = set(self.cells) - set(full)
        if extra:
            raise InputError(f"cells outside the {self.k}x{self.k} grid: {sorted(extra)}")
        object.__setattr__(self, "cells", full)

    @classmethod
    def from_dict(cls, d: dict) -> "GridTilingInstance":
        try:
            n, k = int(d["n"]), int(d["k"])
            cells = {}
            for key, pairs in d.get("cells", {}).items():
                a, b = (int(x) for x in key.split(","))
                cells[(a, b)] = frozenset((int(x), int(y)) for x, y in pairs)
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise InputError(f"malformed grid tiling JSON: {exc}") from exc
        return cls(n, k, cells)

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k,
                "cells": {f"{a},{b}": sorted([x, y] for x, y in ps) for (a, b), ps in sorted(self.cells.items())}}

    def padded(self) -> "GridTilingInstance":
        """Same instance with ``n`` raised to a power of two (at least 2)."""
        n = max(2, 1 << (self.n - 1).bit_length())
        return self if n == self.n else GridTilingInstance(n, self.k, self.cells)

    def satisfied_by(self, xs: Sequence[int], ys: Sequence[int]) -> bool:
        return all((xs[a - 1], ys[b - 1]) in self.cells[(a, b)] for (a, b) in self.cells)


def solve_grid_tiling_bruteforce(gt: GridTilingInstance, budget: int = 10**7):
    """A solution ``(xs, ys)`` or ``None``.

    Rows are enumerated; given the row values every column is independent.
    """
    if gt.n ** gt.k > budget:
        raise TooLarge(f"{gt.n}^{gt.k} row assignments exceed the budget {budget}")
    for xs in itertools.product(range(1, gt.n + 1), repeat=gt.k):
        ys = []
        for b in range(1, gt.k + 1):
            y = next((y for y in range(1, gt.n + 1)
                      if all((xs[a - 1], y) in gt.cells[(a, b)] for a in range(1, gt.k + 1))), None)
            if y is None:
                break
            ys.append(y)
        else:
            return tuple(xs), tuple(ys)
    return None


def random_grid_tiling(n: int, k: int, seed: int, satisfiable: bool, density: float = 0.35,
                       max_tries: int = 1000) -> GridTilingInstance:
    """Random instance of the requested kind.

    Satisfiable ones plant a hidden solution and add noise pairs; unsatisfiable
    ones are rejection-sampled noise.
    """
    rng = np.random.default_rng(seed)
    pairs = [(x, y) for x in range(1, n + 1) for y in range(1, n + 1)]
    for _ in range(max_tries):
        cells = {(a, b): {p for p in pairs if rng.random() < density}
                 for a in range(1, k + 1) for b in range(1, k + 1)}
        if satisfiable:
            xs = rng.integers(1, n + 1, size=k)
            ys = rng.integers(1, n + 1, size=k)
            for (a, b), c in cells.items():
                c.add((int(xs[a - 1]), int(ys[b - 1])))
        gt = GridTilingInstance(n, k, {key: frozenset(v) for key, v in cells.items()})
        if (solve_grid_tiling_bruteforce(gt) is not None) == satisfiable:
            return gt
    raise TooLarge(f"no {'satisfiable' if satisfiable else 'unsatisfiable'} instance after {max_tries} draws")


# --------------------------------------------------------------------------
# constants


@dataclass(frozen=True)
class ReductionConstants:
    n: int
    k: int
    N: int
    L: int
    t: int
    M: int

    @classmethod
    def of(cls, n: int, k: int) -> "ReductionConstants":
        if n < 2 or not is_power_of_two(n):
            raise BadParameters("n must be a power of two, at least 2")
        N, L = n * n, n
        # for k = 1 the default is exactly 10NL; the strict inequality needs one more
        M = max(10 * k * k * N * L, 10 * N * L + 1)
        return cls(n, k, N, L, 2 * n, M)

    def Mi(self, i: int) -> int:
        return self.M ** i

    @property
    def K_M(self) -> int:
        k, t, L, N, m = self.k, self.t, self.L, self.N, self.Mi
        return (k * (k - 1) * (2 * t - 4) * t * m(7) + 3 * k * k * m(6)
                + 2 * k * k * (L * m(5) + L * (N - 1) * m(4) + N * m(3) + m(2)))

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "N": self.N, "L": self.L, "t": self.t,
                "M": self.M, "K_M": str(self.K_M)}


def expected_vertex_count(n: int, k: int) -> int:
    """Closed-form vertex count of the reduction graph (``n`` already padded)."""
    N, L, t = n * n, n, 2 * n
    gadgets = 2 * k * k * (L * (N + 1) ** 2 + 2 * N)
    flowers = k * (k - 1) * t * (t // 2 - 1)
    dummies = -2 * k * (L - 1)
    fuse = k * (k - 1) * n
    return gadgets + flowers + dummies + fuse + 1 + k


# --------------------------------------------------------------------------
# verification gadgets


@dataclass(frozen=True)
class Gadget:
    """A stand-alone verification gadget with its portal names."""

    graph: PlanarGraph
    portals: dict[str, tuple[int, ...]]
    selectors: dict[tuple[int, int], int]
    positions: tuple[tuple[float, float], ...] = field(compare=False)


def _powers(M: int) -> list[int]:
    return [M ** i for i in range(8)]


def _add_vg(b: EmbeddingBuilder, N: int, S: Iterable[int], Ms: list[int], tf, w: int | None = None):
    S = set(S)
    if not S <= set(range(1, N + 1)):
        raise InputError(f"selector set {sorted(S)} is not inside [1..{N}]")
    y = {i: b.add_vertex(*tf(0, -i)) for i in range(1, N + 1)}
    v = {(i, j): b.add_vertex(*tf(i, -j)) for j in range(1, N + 1) for i in range(1, N + 1)}
    z = {i: b.add_vertex(*tf(N + 1, -i)) for i in range(1, N + 1)}
    if w is None:
        w = b.add_vertex(*tf((N + 1) / 2, -(N + 2)))
    for i in range(1, N + 1):
        b.add_edge(y[i], v[(1, i)], i * Ms[2])
        b.add_edge(z[i], v[(N, i)], i * Ms[3])
    for j in range(1, N + 1):
        for i in range(1, N):
            b.add_edge(v[(i, j)], v[(i + 1, j)], Ms[4])
    for i in range(1, N + 1):
        for j in range(i, N):
            b.add_edge(v[(i, j)], v[(i, j + 1)], Ms[3])
    sel = {i: b.add_edge(v[(i, N)], w, Ms[5] - i * Ms[2]) for i in sorted(S)}
    return {"y": y, "z": z, "v": v, "w": w, "sel": sel}


def _add_lvg(b: EmbeddingBuilder, N: int, S_list: Sequence[Iterable[int]], Ms: list[int], tf,
             w_ids: Sequence[int] | None = None):
    L = len(S_list)
    if L < 1:
        raise InputError("need at least one selector set")
    step = N + 3
    blocks = []
    for ell in range(L):
        off = ell * step
        w = None if w_ids is None else w_ids[ell]
        blocks.append(_add_vg(b, N, S_list[ell], Ms, lambda x, y, o=off: tf(x + o, y), w))
    right = (L - 1) * step + N + 2
    p = {i: b.add_vertex(*tf(-1, -i)) for i in range(1, N + 1)}
    q = {i: b.add_vertex(*tf(right, -i)) for i in range(1, N + 1)}
    for i in range(1, N + 1):
        b.add_edge(p[i], blocks[0]["y"][i], i * Ms[1])
        b.add_edge(blocks[-1]["z"][i], q[i], Ms[2] - i * Ms[1])
        for ell in range(L - 1):
            b.add_edge(blocks[ell]["z"][i], blocks[ell + 1]["y"][i], Ms[5] - i * Ms[3] - i * Ms[2])
    sel = {(ell + 1, i): e for ell, blk in enumerate(blocks) for i, e in blk["sel"].items()}
    return {"p": p, "q": q, "w": [blk["w"] for blk in blocks], "sel": sel, "blocks": blocks, "width": right}


def build_vg(N: int, S: Iterable[int], M: int) -> Gadget:
    """The verification gadget with selector edges only for ``i`` in ``S``."""
    b = EmbeddingBuilder()
    d = _add_vg(b, N, S, _powers(M), lambda x, y: (x, y))
    portals = {"y": tuple(d["y"][i] for i in range(1, N + 1)), "w": (d["w"],),
               "z": tuple(d["z"][i] for i in range(1, N + 1))}
    return Gadget(b.build(), portals, {(1, i): e for i, e in d["sel"].items()}, tuple(b.positions))


def build_lvg(N: int, L: int, S_list: Sequence[Iterable[int]], M: int) -> Gadget:
    """``L`` chained verification gadgets with fringe portals ``p`` and ``q``."""
    if len(S_list) != L:
        raise InputError(f"expected {L} selector sets, got {len(S_list)}")
    b = EmbeddingBuilder()
    d = _add_lvg(b, N, S_list, _powers(M), lambda x, y: (x, y))
    portals = {"p": tuple(d["p"][i] for i in range(1, N + 1)), "w": tuple(d["w"]),
               "q": tuple(d["q"][i] for i in range(1, N + 1))}
    return Gadget(b.build(), portals, dict(d["sel"]), tuple(b.positions))


# --------------------------------------------------------------------------
# assembled reduction


@dataclass(frozen=True)
class ReductionOutput:
    graph: PlanarGraph
    terminals: tuple[int, ...]
    terminal_faces: tuple[int, ...]
    constants: ReductionConstants
    grid: GridTilingInstance
    directory: dict = field(compare=False)
    positions: tuple[tuple[float, float], ...] = field(compare=False, default=())

    @property
    def K_M(self) -> int:
        return self.constants.K_M

    def instance(self) -> SteinerInstance:
        return SteinerInstance(self.graph, self.terminals, self.terminal_faces,
                               meta={"positions": list(self.positions)})

    def sidecar(self) -> dict:
        def enc(x):
            if isinstance(x, dict):
                return {",".join(map(str, k)) if isinstance(k, tuple) else str(k): enc(v) for k, v in x.items()}
            if isinstance(x, (list, tuple)):
                return [enc(v) for v in x]
            return x
        return {"K_M": str(self.K_M), "constants": self.constants.to_dict(),
                "terminals": list(self.terminals), "terminal_faces": list(self.terminal_faces),
                "portal_directory": enc(self.directory)}


def _rot(x: float, y: float, ang: float) -> tuple[float, float]:
    c, s = math.cos(ang), math.sin(ang)
    return x * c - y * s, x * s + y * c


def _attach_flower(b: EmbeddingBuilder, t: int, scale: int, center, radius: float,
                   west: Sequence[int], east: Sequence[int]) -> dict:
    """Embed a flower in the band between a south-facing west gadget and a
    north-facing east gadget; its portals become the given vertices."""
    f = flower_with_scale(t, scale)
    h = t // 2
    psi = 1.5 * math.pi  # turns the west arc (centred at angle -pi) upward
    glued: dict[int, tuple[int, float]] = {}
    for ell in range(1, h + 1):
        glued[f.id(f.portal(ell % t))] = (west[ell - 1], math.pi / 2)
        glued[f.id(f.portal((ell + h) % t))] = (east[ell - 1], -math.pi / 2)
    cx, cy = center
    local = f.positions
    gpos = [(cx + radius * x2, cy + radius * y2) for x2, y2 in (_rot(x, y, psi) for x, y in local)]
    gid = {}
    for v in range(f.graph.n):
        gid[v] = glued[v][0] if v in glued else b.add_vertex(*gpos[v])
    darts = []  # local edge -> (global edge, orientation flipped)
    for e in f.graph.edges:
        swapped = e.v not in glued
        u, v = (e.v, e.u) if swapped else (e.u, e.v)
        if v not in glued:
            darts.append((b.add_edge(gid[u], gid[v], e.w), swapped))
            continue
        # v is a portal; u is inside the flower
        (ux, uy), (vx, vy) = local[u], local[v]
        phi = math.atan2(vy, vx)
        at_portal = math.atan2(uy - vy, ux - vx) - phi + glued[v][1]
        at_inner = math.atan2(gpos[v][1] - gpos[u][1], gpos[v][0] - gpos[u][0])
        darts.append((b.add_edge(gid[u], gid[v], e.w, angle_u=at_inner, angle_v=at_portal), swapped))
    d = f.graph.faces[f.carpel].boundary[0]
    ge, flipped = darts[d >> 1]
    return {"vertices": [gid[v] for v in range(f.graph.n)],
            "terminals": [gid[v] for v in f.terminals],
            "carpel_dart": 2 * ge + ((d & 1) ^ flipped)}


def build_reduction(gt: GridTilingInstance) -> ReductionOutput:
    gt = gt.padded()
    c = ReductionConstants.of(gt.n, gt.k)
    n, k, N, L, t = c.n, c.k, c.N, c.L, c.t
    Ms = _powers(c.M)
    b = EmbeddingBuilder()

    width = (L - 1) * (N + 3) + N + 2          # local x of the q column
    gap = 4
    col = width + 1 + gap                       # horizontal pitch of one gadget
    radius = 0.8 * col                          # portal ring of a flower
    row_h = N + 6 + 2 * radius
    flower_r = radius / (1 + t // 2)

    def ytop(a):
        return -(a - 1) * row_h

    def xw(bb):
        return (bb - 1) * 2 * col

    def west_tf(a, bb):
        return lambda x, y: (xw(bb) + x, ytop(a) + y)

    def east_tf(a, bb):
        return lambda x, y: (xw(bb) + col + width - 1 - x, ytop(a) - N - 1 - y)

    def sets(a, bb, east):
        m = gt.cells[(a, bb)]
        if east:
            return [{N - ((i - 1) * n + l) + 1 for (i, l2) in m if l2 == l} for l in range(1, L + 1)]
        return [{(i - 1) * n + l for (i, l2) in m if l2 == l} for l in range(1, L + 1)]

    directory: dict = {"W": {}, "E": {}, "fuse": {}, "flower": {}, "dummy_top": [], "dummy_bottom": [],
                       "selectors": {}}
    dummy_top = {bb: b.add_vertex(xw(bb) + col + width / 2 - 0.5, ytop(1) + 3) for bb in range(1, k + 1)}
    dummy_bot = {bb: b.add_vertex(xw(bb) + width / 2 - 0.5, ytop(k) - N - 4) for bb in range(1, k + 1)}

    W, E = {}, {}
    for a in range(1, k + 1):
        for bb in range(1, k + 1):
            wt = [dummy_bot[bb]] * L if a == k else None
            W[(a, bb)] = _add_lvg(b, N, sets(a, bb, False), Ms, west_tf(a, bb), wt)
            et = [dummy_top[bb]] * L if a == 1 else None
            E[(a, bb)] = _add_lvg(b, N, sets(a, bb, True), Ms, east_tf(a, bb), et)
            for j in range(1, N + 1):
                b.add_edge(W[(a, bb)]["q"][j], E[(a, bb)]["q"][N - j + 1], Ms[6])

    fuse = {}
    for a in range(1, k + 1):
        for bb in range(1, k):
            x = xw(bb) + col + width + gap / 2
            for i in range(1, n + 1):
                f = b.add_vertex(x, ytop(a) - ((i - 1) * n + (n + 1) / 2))
                fuse[(a, bb, i)] = f
                for l in range(1, n + 1):
                    b.add_edge(E[(a, bb)]["p"][N - ((i - 1) * n + l) + 1], f, Ms[6])
                    b.add_edge(f, W[(a, bb + 1)]["p"][(i - 1) * n + l], Ms[6])

    mid = (ytop(1) + ytop(k) - N - 1) / 2
    r = b.add_vertex(-6, mid)
    top_edge = None
    for a in range(1, k + 1):
        for j in range(1, N + 1):
            e = b.add_edge(r, W[(a, 1)]["p"][j], Ms[6])
            top_edge = e if top_edge is None else top_edge
    heads = {}
    for a in range(1, k + 1):
        heads[a] = b.add_vertex(xw(k) + col + width + 6, ytop(a) - (N + 1) / 2)
        for j in range(1, N + 1):
            b.add_edge(E[(a, k)]["p"][j], heads[a], Ms[6])

    flowers = {}
    for a in range(1, k):
        for bb in range(1, k + 1):
            west = W[(a, bb)]["w"]
            east = E[(a + 1, bb)]["w"]
            wx = np.mean([b.positions[v][0] for v in west])
            ex = np.mean([b.positions[v][0] for v in east])
            cy = (ytop(a) - N - 2 + ytop(a + 1) + 1) / 2
            flowers[(a, bb)] = _attach_flower(b, t, t * Ms[7], ((wx + ex) / 2, cy), flower_r, west, east)

    g = b.build()
    terminals = [v for key in sorted(flowers) for v in flowers[key]["terminals"]]
    terminals += [dummy_top[bb] for bb in range(1, k + 1)] + [dummy_bot[bb] for bb in range(1, k + 1)]
    terminals += [r] + [heads[a] for a in range(1, k + 1)]

    # a carpel keeps the flower's own dart; the face leaving r along its
    # topmost edge is the unbounded one
    faces = [g.dart_face[flowers[key]["carpel_dart"]] for key in sorted(flowers)]
    faces.append(g.dart_face[2 * top_edge])
    for key in sorted(flowers):
        if not set(flowers[key]["terminals"]) <= g.faces[g.dart_face[flowers[key]["carpel_dart"]]].vertex_set:
            raise AssertionError(f"flower {key} lost its carpel")

    for (a, bb), d in W.items():
        directory["W"][(a, bb)] = {"p": [d["p"][i] for i in range(1, N + 1)], "w": list(d["w"]),
                                   "q": [d["q"][i] for i in range(1, N + 1)]}
        directory["selectors"][("W", a, bb)] = {f"{l},{i}": e for (l, i), e in d["sel"].items()}
    for (a, bb), d in E.items():
        directory["E"][(a, bb)] = {"p": [d["p"][i] for i in range(1, N + 1)], "w": list(d["w"]),
                                   "q": [d["q"][i] for i in range(1, N + 1)]}
        directory["selectors"][("E", a, bb)] = {f"{l},{i}": e for (l, i), e in d["sel"].items()}
    directory["fuse"] = fuse
    directory["flower"] = {key: fl["vertices"] for key, fl in flowers.items()}
    directory["dummy_top"] = [dummy_top[bb] for bb in range(1, k + 1)]
    directory["dummy_bottom"] = [dummy_bot[bb] for bb in range(1, k + 1)]
    directory["r"] = r
    directory["h"] = [heads[a] for a in range(1, k + 1)]
    return ReductionOutput(g, tuple(terminals), tuple(faces), c, gt, directory, tuple(b.positions))


def classify(out: ReductionOutput, cap: int = 24) -> tuple[int | None, bool]:
    """Optimum Steiner weight (``None`` if the terminals are disconnected) and
    whether it stays within the budget."""
    try:
        w = dreyfus_wagner(out.graph, out.terminals, cap=cap).weight
    except Unreachable:
        return None, False
    return w, w <= out.K_M


# --------------------------------------------------------------------------
# unit-weight subdivision


@dataclass(frozen=True)
class Subdivision:
    graph: PlanarGraph
    edge_paths: tuple[tuple[int, ...], ...]

    def dart_image(self, d: int) -> int:
        path = self.edge_paths[d >> 1]
        return 2 * path[0] if d % 2 == 0 else 2 * path[-1] + 1

    def face_image(self, original: PlanarGraph, face: int) -> int:
        return self.graph.dart_face[self.dart_image(original.faces[face].boundary[0])]


def subdivide_to_unit_weights(g: PlanarGraph, budget: int) -> Subdivision:
    """Replace each edge of weight ``w >= 1`` by a path of ``w`` unit edges.

    Zero-weight edges are kept as they are.
    """
    total = sum(e.w for e in g.edges)
    if total > budget:
        raise BudgetExceeded(f"total weight {total} exceeds the budget {budget}")
    n = g.n
    edges: list[tuple[int, int, int]] = []
    rotation: list[list[int]] = [[] for _ in range(n)]
    paths = []
    for e in g.edges:
        if e.w <= 1:
            paths.append((len(edges),))
            edges.append((e.u, e.v, e.w))
            continue
        chain = [e.u] + list(range(n, n + e.w - 1)) + [e.v]
        n += e.w - 1
        ids = []
        for x, y in zip(chain, chain[1:]):
            ids.append(len(edges))
            edges.append((x, y, 1))
        for j in range(1, len(chain) - 1):
            rotation.append([2 * ids[j - 1] + 1, 2 * ids[j]])
        paths.append(tuple(ids))
    sub = Subdivision(None, tuple(paths))  # type: ignore[arg-type]
    for v in range(g.n):
        rotation[v] = [sub.dart_image(d) for d in g.rotation[v]]
    return Subdivision(PlanarGraph.from_rotation(n, edges, rotation), tuple(paths))


# --------------------------------------------------------------------------
# gadget lemma sweeps


@dataclass
class ClauseTally:
    checked: int = 0
    failed: int = 0
    tight: int = 0
    failures: list = field(default_factory=list)

    def record(self, ok: bool, what, tight: bool = False) -> None:
        self.checked += 1
        self.tight += bool(tight)
        if not ok:
            self.failed += 1
            if len(self.failures) < 20:
                self.failures.append(what)

    @property
    def ok(self) -> bool:
        return self.checked > 0 and self.failed == 0


@dataclass
class GadgetReport:
    N: int
    L: int
    M: int
    clauses: dict[str, ClauseTally]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.clauses.values())

    def to_dict(self) -> dict:
        return {"N": self.N, "L": self.L, "M": self.M, "ok": self.ok,
                "clauses": {k: {"checked": c.checked, "failed": c.failed, "tight": c.tight,
                                "failures": [str(x) for x in c.failures]} for k, c in self.clauses.items()}}


def _dw(g: Graph, terminals) -> int | float:
    try:
        return dreyfus_wagner(g, terminals).weight
    except Unreachable:
        return math.inf


def _forced(g: Graph, terminals, forced, banned=()) -> int | float:
    try:
        return steiner_with_forced_edges(g, terminals, forced, banned)
    except Unreachable:
        return math.inf


def _subsets(N: int):
    items = range(1, N + 1)
    return [frozenset(s) for r in range(N + 1) for s in itertools.combinations(items, r)]


def _sweep_vg(N: int, M: int, tallies: dict[str, ClauseTally]) -> None:
    Ms = _powers(M)
    F = Ms[5] + (N - 1) * Ms[4] + N * Ms[3]
    for S in _subsets(N):
        gad = build_vg(N, S, M)
        g = gad.graph
        y, z, (w,) = gad.portals["y"], gad.portals["z"], gad.portals["w"]
        sel = {i: e for (_, i), e in gad.selectors.items()}
        for i in sorted(S):
            val = _forced(g, {y[i - 1], z[i - 1], w}, [sel[i]])
            tallies["vg(i)"].record(val == F, (sorted(S), i, val), tight=val == F)
        for i in range(1, N + 1):
            base = (N - 1) * Ms[4] + i * Ms[2] + i * Ms[3]
            for j in range(1, N + 1):
                val = _dw(g, {y[i - 1], z[j - 1], w})
                ok = val >= F
                if val < F + Ms[2]:
                    # every lighter subgraph must use the i-selector and no other
                    ok &= i == j and i in S
                    if ok:
                        ok &= _dw(without_edges(g, [sel[i]]), {y[i - 1], z[j - 1], w}) >= F + Ms[2]
                        ok &= all(_forced(g, {y[i - 1], z[j - 1], w}, [e]) >= F + Ms[2]
                                  for s, e in sel.items() if s != i)
                tallies["vg(ii)"].record(ok, (sorted(S), i, j, val), tight=val == F)
                two = _dw(g, {y[i - 1], z[j - 1]})
                bound = base + 2 * max(0, j - i) * Ms[3]
                tallies["vg(iv)"].record(two >= bound, (sorted(S), i, j, two), tight=two == bound)
                if i == j:
                    tallies["vg(iii)"].record(two <= base, (sorted(S), i, two), tight=two == base)


def _sweep_lvg(N: int, L: int, M: int, tallies: dict[str, ClauseTally]) -> None:
    Ms = _powers(M)
    F = L * Ms[5] + L * (N - 1) * Ms[4] + N * Ms[3] + Ms[2]
    for S_list in itertools.product(_subsets(N), repeat=L):
        gad = build_lvg(N, L, S_list, M)
        g = gad.graph
        p, q, w = gad.portals["p"], gad.portals["q"], gad.portals["w"]
        for ell in range(1, L + 1):
            for i in sorted(S_list[ell - 1]):
                val = _forced(g, {p[i - 1], q[i - 1], w[ell - 1]}, [gad.selectors[(ell, i)]])
                tallies["lvg(i)"].record(val == F, ([sorted(s) for s in S_list], ell, i, val), tight=val == F)
            for i in range(1, N + 1):
                for j in range(1, N + 1):
                    ts = {p[i - 1], q[j - 1], w[ell - 1]}
                    val = _dw(g, ts)
                    ok = val >= F
                    if val == F:
                        mine = gad.selectors.get((ell, i))
                        ok &= i == j and mine is not None
                        if ok:
                            ok &= _dw(without_edges(g, [mine]), ts) > F
                            ok &= all(_forced(g, ts, [e]) > F for key, e in gad.selectors.items() if e != mine)
                    tallies["lvg(ii)"].record(ok, ([sorted(s) for s in S_list], ell, i, j, val), tight=val == F)


def verify_gadget_lemmas(N: int, L: int, M: int | None = None, k: int = 2,
                         parts: Iterable[str] = ("vg", "lvg")) -> GadgetReport:
    """Sweep every clause of both gadget lemmas over all selector sets.

    ``M`` defaults to the value the reduction would use for ``k`` rows;
    ``parts`` picks the single gadget, the chained one, or both.
    """
    if N > 4 or L > 2:
        raise TooLarge("gadget sweeps are limited to N <= 4 and L <= 2")
    if N < 1 or L < 1:
        raise BadParameters("N and L must be positive")
    M = max(10 * k * k * N * L, 10 * N * L + 1) if M is None else M
    if M <= 10 * N * L:
        raise BadParameters("M must exceed 10 N L")
    parts = set(parts)
    if not parts or not parts <= {"vg", "lvg"}:
        raise BadParameters("parts must be drawn from {'vg', 'lvg'}")
    tallies: dict[str, ClauseTally] = {}
    if "vg" in parts:
        tallies.update({name: ClauseTally() for name in ("vg(i)", "vg(ii)", "vg(iii)", "vg(iv)")})
        _sweep_vg(N, M, tallies)
    if "lvg" in parts:
        tallies.update({name: ClauseTally() for name in ("lvg(i)", "lvg(ii)")})
        _sweep_lvg(N, L, M, tallies)
    return GadgetReport(N, L, M, tallies)
