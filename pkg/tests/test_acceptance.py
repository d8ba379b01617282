"""Acceptance suite: ten end-to-end criteria, each with its own time limit.

Run with pytest (one test per criterion) or directly as a script, which
prints one PASS/FAIL line per criterion:

    python3 tests/test_acceptance.py
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass

import numpy as np
import pytest

from pst.flower import (build_flower, canonical_forest, verify_flower_theorem,
                        verify_metric, verify_triangle_lemma)
from pst.generators import chained_instance, random_cycle_instance, random_instance, random_plane_graph
from pst.noncrossing import brute_force_minimal, enumerate_minimal_noncrossing, max_minimal_length
from pst.oracles import dreyfus_wagner, exhaustive_min_steiner, portal_anchored_forest_min
from pst.preprocess import check_subcubic_2connected, lift_solution, make_subcubic_2connected
from pst.reduction import (build_reduction, classify, random_grid_tiling, subdivide_to_unit_weights,
                           verify_gadget_lemmas)
from pst.solver import SolverConfig, solve_steiner_tree


@dataclass
class Outcome:
    number: int
    title: str
    passed: bool
    seconds: float
    limit: float
    detail: str

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"[{verdict}] criterion {self.number:2d} {self.title}: {self.detail} ({self.seconds:.1f}s / {self.limit:.0f}s)"


RESULTS: dict[int, Outcome] = {}


def _run(number: int, title: str, limit: float, body) -> Outcome:
    t0 = time.perf_counter()
    ok, detail = body()
    elapsed = time.perf_counter() - t0
    out = Outcome(number, title, bool(ok) and elapsed < limit, elapsed, limit, detail)
    RESULTS[number] = out
    print(out.line())
    return out


# ----------------------------------------------------------------- criteria


def oracle_concordance():
    checked = mismatches = 0
    seed = 0
    while checked < 200:
        seed += 1
        rng = np.random.default_rng(seed)
        n = int(rng.integers(4, 11))
        g, _ = random_plane_graph(n, seed, keep=float(rng.uniform(0.2, 0.7)))
        if g.m > 24:
            continue
        ts = [int(x) for x in rng.choice(n, size=min(n, int(rng.integers(2, 6))), replace=False)]
        checked += 1
        mismatches += dreyfus_wagner(g, ts).weight != exhaustive_min_steiner(g, ts).weight
    return mismatches == 0, f"{checked} graphs, {mismatches} mismatches"


def solver_correctness():
    plain = fired = mismatches = 0
    seed = 0
    while plain < 180:
        seed += 1
        inst = random_instance(5 + seed % 5, 2 + seed % 5, 1 + seed % 3, seed, keep=0.5)
        pp = make_subcubic_2connected(inst.graph, inst.terminals, inst.faces)
        if pp.graph.n > 25 or len(inst.terminals) > 6:
            continue
        plain += 1
        mismatches += solve_steiner_tree(inst).weight != dreyfus_wagner(inst.graph, inst.terminals).weight
    # full separator enumeration is affordable on cycles; c0 = 2 forces a split at the root
    for s in range(24):
        inst = random_cycle_instance(4 + s % 3, 3, s)
        res = solve_steiner_tree(inst, SolverConfig(c0=2, sep_max=10**6))
        mismatches += res.weight != dreyfus_wagner(inst.graph, inst.terminals).weight
        fired += res.stats.recursion_nodes > 0 and not res.stats.truncated
    extra = 0
    for s in range(6):
        inst = chained_instance(3, 5, s)
        res = solve_steiner_tree(inst, SolverConfig(c0=1, sep_max=1))
        mismatches += res.weight != dreyfus_wagner(inst.graph, inst.terminals).weight
        extra += res.stats.recursion_nodes > 0
    total = plain + 24 + 6
    ok = mismatches == 0 and plain + 24 >= 200 and fired >= 20
    return ok, (f"{total} instances, {mismatches} mismatches; recursion with the full separator bound "
                f"on {fired}, truncated recursion on {extra} more")


def flower_claims():
    notes, ok = [], True
    for t in (4, 8):
        rep = verify_flower_theorem(t)
        f = build_flower(t)
        direct = portal_anchored_forest_min(f.graph, f.terminals, f.portals)
        canon = canonical_forest(f, 1).weight
        unit = rep.optimum // f.scale
        good = (rep.passed and direct == f.optimum == canon and unit == 2 * t - 4
                and rep.relaxation_min_non_opposite > rep.optimum)
        if t == 4:
            good &= rep.structure_checked and rep.structure_ok
        ok &= good
        notes.append(f"t={t}: optimum {unit} units, non-opposite relaxation "
                     f"{rep.relaxation_min_non_opposite}>{rep.optimum}")
    return ok, "; ".join(notes)


def triangle_sweep():
    points = 0
    ok = True
    for ell in range(5):
        rep = verify_triangle_lemma(ell)
        points += len(rep.points)
        ok &= rep.passed and all(p.certified for p in rep.points)
        for j in range(ell.bit_length() + 1):
            top = (1 << j) - 1
            if top <= ell:
                ok &= rep.tips[f"[0,{top}]"] == 2 * top * rep.scale
    deep = verify_triangle_lemma(7, tips_only=True)
    tip7 = deep.tips["[0,7]"] // deep.scale
    ok &= deep.passed and tip7 == 14
    return ok, f"{points} window points certified for l<=4, tip [0,7] weighs {tip7}"


def metric_props():
    rep = verify_metric(10, 6)
    return rep.passed, (f"{rep.monotone_pairs} monotone pairs, {rep.distance_pairs} distance pairs, "
                        f"vertical={rep.vertical_ok}, diagonal={rep.diagonal_ok}")


def gadget_lemmas():
    ok, notes = True, []
    for N in (2, 3):
        rep = verify_gadget_lemmas(N, 2, parts=("vg",))
        ok &= rep.ok
        notes.append(f"VG N={N}: " + ",".join(f"{k} {c.checked}" for k, c in rep.clauses.items()))
    rep = verify_gadget_lemmas(2, 2, parts=("lvg",))
    ok &= rep.ok
    notes.append("L-VG N=2,L=2: " + ",".join(f"{k} {c.checked}" for k, c in rep.clauses.items()))
    return ok, "; ".join(notes)


def reduction_biconditional():
    right = total = 0
    for kind in (True, False):
        for seed in range(10):
            gt = random_grid_tiling(2, 2, 100 + seed, satisfiable=kind)
            red = build_reduction(gt)
            _, within = classify(red)
            total += 1
            right += within == kind
    return right == total == 20, f"{right}/{total} Grid Tiling instances classified correctly"


def noncrossing_bound():
    ok, notes = True, []
    for ell in (1, 2, 3):
        brute = set(brute_force_minimal(ell, 4 * ell + 1))
        ok &= brute == set(enumerate_minimal_noncrossing(ell))
        longest = max(map(len, brute))
        ok &= longest <= 4 * ell
        notes.append(f"l={ell}: {longest}")
    longest, _ = max_minimal_length(4)
    ok &= longest <= 16
    notes.append(f"l=4: {longest}")
    return ok, "longest minimal sequences " + ", ".join(notes)


def preprocessing_soundness():
    bad = 0
    for seed in range(100):
        inst = random_instance(6 + seed % 8, 2 + seed % 4, 1 + seed % 3, seed, keep=0.4)
        pp = make_subcubic_2connected(inst.graph, inst.terminals, inst.faces)
        if not check_subcubic_2connected(pp.graph):
            bad += 1
            continue
        before = dreyfus_wagner(inst.graph, inst.terminals).weight
        sol = dreyfus_wagner(pp.graph, pp.terminals)
        lifted = lift_solution(pp.backmap, pp.graph, sol.edges)
        bad += sol.weight != before or inst.graph.weight_of(lifted) > sol.weight
    return bad == 0, f"100 instances, {bad} violations"


def subdivision_equivalence():
    bad = checked = 0
    seed = 0
    while checked < 50:
        seed += 1
        rng = np.random.default_rng(seed)
        g, _ = random_plane_graph(int(rng.integers(4, 9)), seed, keep=0.4, max_weight=6)
        if sum(e.w for e in g.edges) > 200:
            continue
        checked += 1
        ts = [int(x) for x in rng.choice(g.n, size=min(g.n, 3), replace=False)]
        sub = subdivide_to_unit_weights(g, 200)
        bad += dreyfus_wagner(g, ts).weight != dreyfus_wagner(sub.graph, ts).weight
    return bad == 0, f"{checked} graphs, {bad} mismatches"


CRITERIA = [
    (1, "oracle concordance", 60, oracle_concordance),
    (2, "solver correctness", 600, solver_correctness),
    (3, "flower claims", 300, flower_claims),
    (4, "triangle sweep", 300, triangle_sweep),
    (5, "metric propositions", 60, metric_props),
    (6, "verification gadget lemmas", 600, gadget_lemmas),
    (7, "reduction biconditional", 1800, reduction_biconditional),
    (8, "non-crossing length bound", 60, noncrossing_bound),
    (9, "preprocessing soundness", 120, preprocessing_soundness),
    (10, "subdivision equivalence", 60, subdivision_equivalence),
]


@pytest.mark.parametrize("number,title,limit,body", CRITERIA, ids=[f"c{c[0]:02d}" for c in CRITERIA])
def test_criterion(number, title, limit, body):
    out = _run(number, title, limit, body)
    assert out.passed, out.line()


def main() -> int:
    for number, title, limit, body in CRITERIA:
        _run(number, title, limit, body)
    print(f"{sum(o.passed for o in RESULTS.values())}/{len(CRITERIA)} criteria passed")
    return 0 if all(o.passed for o in RESULTS.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
