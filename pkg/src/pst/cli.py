"""``pst`` command line.

Exit codes: 0 success, 1 a verification claim failed, 2 bad input,
3 infeasible instance.  Every flag can also be set through an environment
variable named ``PST_<COMMAND>_<FLAG>``.
"""

from __future__ import annotations

import csv
import json
import sys
import time
from pathlib import Path

import click

from . import flower, noncrossing, reduction
from .errors import Infeasible, InputError, PstError, TooLarge, Unreachable
from .generators import random_instance
from .io import SteinerInstance, instance_to_dict, loads_instance, to_dot
from .oracles import dreyfus_wagner, exhaustive_min_steiner, one_face_steiner
from .solver import SolverConfig, solve_steiner_tree

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_INFEASIBLE = 0, 1, 2, 3

BENCH_COLUMNS = ["n", "seed", "terminals", "faces", "vertices", "edges", "solver_weight", "oracle_weight",
                 "agree", "solver_seconds", "oracle_seconds", "recursion_nodes", "base_case_calls",
                 "separators_tried", "recursion_depth"]


def _emit(payload, out: str | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _read_instance(path: str) -> SteinerInstance:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    inst = loads_instance(text)
    inst.check_cover()
    return inst


def _result(weight, edges, certified: bool, stats: dict) -> dict:
    return {"weight": str(weight), "edges": sorted(int(e) for e in edges),
            "optimal_certified": bool(certified), "stats": stats}


def _config(c0, sep_max, threads, dw_cap) -> SolverConfig:
    return SolverConfig(c0=c0, sep_max=sep_max, parallel=threads > 1, threads=threads, dw_cap=dw_cap)


def _oracle(engine: str, inst: SteinerInstance, cap: int):
    g, ts = inst.graph, inst.terminals
    if not ts:
        return 0, ()
    if engine == "dw":
        sol = dreyfus_wagner(g, ts, cap=cap)
    elif engine == "exhaustive":
        sol = exhaustive_min_steiner(g, ts)
    else:
        if len(inst.faces) != 1:
            raise InputError("oneface needs exactly one terminal face")
        sol = one_face_steiner(g, ts, g.faces[inst.faces[0]])
    return sol.weight, sol.edges


solver_options = [
    click.option("--c0", type=int, default=8, show_default=True, help="Base-case threshold."),
    click.option("--sep-max", type=int, default=2, show_default=True, help="Largest separator tried."),
    click.option("--threads", type=int, default=1, show_default=True, help="Worker processes."),
    click.option("--dw-cap", type=int, default=16, show_default=True, help="Terminal cap of the subset DP."),
]


def _with(options):
    def deco(fn):
        for opt in reversed(options):
            fn = opt(fn)
        return fn
    return deco


@click.group(context_settings={"auto_envvar_prefix": "PST", "help_option_names": ["-h", "--help"]})
def main():
    """Planar Steiner tree toolkit."""


@main.command()
@click.argument("input", default="-")
@click.option("--engine", type=click.Choice(["pbsf", "oracle"]), default="pbsf", show_default=True)
@_with(solver_options)
@click.option("--out", "-o", type=click.Path(dir_okay=False), help="Write the result here.")
def solve(input, engine, c0, sep_max, threads, dw_cap, out):
    """Solve the instance in INPUT (graph JSON, '-' for stdin)."""
    inst = _read_instance(input)
    if engine == "oracle":
        w, es = _oracle("dw", inst, max(dw_cap, len(inst.terminals)))
        _emit(_result(w, es, True, {"recursion_depth": 0, "base_case_calls": 0, "separators_tried": 0}), out)
        return
    res = solve_steiner_tree(inst, _config(c0, sep_max, threads, dw_cap))
    _emit(_result(res.weight, res.edges, res.optimal_certified, res.stats.to_dict()), out)


@main.command()
@click.argument("input", default="-")
@click.option("--engine", type=click.Choice(["dw", "exhaustive", "oneface"]), default="dw", show_default=True)
@click.option("--dw-cap", type=int, default=16, show_default=True)
@click.option("--out", "-o", type=click.Path(dir_okay=False))
def oracle(input, engine, dw_cap, out):
    """Solve INPUT with an exact reference algorithm."""
    inst = _read_instance(input)
    w, es = _oracle(engine, inst, dw_cap)
    _emit(_result(w, es, True, {"recursion_depth": 0, "base_case_calls": 0, "separators_tried": 0}), out)


# --------------------------------------------------------------------------
# generators


@main.group()
def gen():
    """Emit graph JSON for gadgets and random instances."""


def _write_generated(inst: SteinerInstance, sidecar: dict, out, sidecar_path, dot, portals=()):
    _emit(instance_to_dict(inst), out)
    if sidecar_path is None and out:
        sidecar_path = str(Path(out).with_suffix("")) + ".sidecar.json"
    if sidecar_path:
        Path(sidecar_path).write_text(json.dumps(sidecar, indent=2) + "\n")
    if dot:
        Path(dot).write_text(to_dot(inst.graph, inst.terminals, portals))


gen_outputs = [
    click.option("--out", "-o", type=click.Path(dir_okay=False), help="Graph JSON (stdout if omitted)."),
    click.option("--sidecar", type=click.Path(dir_okay=False), help="Metadata JSON path."),
    click.option("--dot", type=click.Path(dir_okay=False), help="Also write a DOT rendering."),
]


def _parse_set(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


@gen.command("flower")
@click.option("--t", "t", type=int, default=4, show_default=True)
@click.option("--scale", type=int, default=None)
@_with(gen_outputs)
def gen_flower(t, scale, out, sidecar, dot):
    f = flower.build_flower(t, scale)
    inst = SteinerInstance(f.graph, f.terminals, (f.carpel,))
    meta = {"t": t, "scale": f.scale, "optimum": str(f.optimum), "portals": list(f.portals),
            "labels": [str(p) for p in f.vertices]}
    _write_generated(inst, meta, out, sidecar, dot, f.portals)


@gen.command("vg")
@click.option("--N", "N", type=int, required=True)
@click.option("--S", "S", default="", help="Comma-separated selector indices.")
@click.option("--M", "M", type=int, default=None, help="Base weight (default 10*N+1).")
@_with(gen_outputs)
def gen_vg(N, S, M, out, sidecar, dot):
    M = 10 * N + 1 if M is None else M
    gad = reduction.build_vg(N, _parse_set(S), M)
    ports = [v for vs in gad.portals.values() for v in vs]
    meta = {"N": N, "M": M, "portals": {k: list(v) for k, v in gad.portals.items()},
            "selectors": {f"{a},{b}": e for (a, b), e in gad.selectors.items()}}
    _write_generated(SteinerInstance(gad.graph, ()), meta, out, sidecar, dot, ports)


@gen.command("lvg")
@click.option("--N", "N", type=int, required=True)
@click.option("--L", "L", type=int, required=True)
@click.option("--S", "S", default="", help="Selector sets separated by ';', e.g. '1,2;2'.")
@click.option("--M", "M", type=int, default=None, help="Base weight (default 10*N*L+1).")
@_with(gen_outputs)
def gen_lvg(N, L, S, M, out, sidecar, dot):
    M = 10 * N * L + 1 if M is None else M
    parts = S.split(";") if S else []
    parts += [""] * (L - len(parts))
    gad = reduction.build_lvg(N, L, [_parse_set(p) for p in parts], M)
    ports = [v for vs in gad.portals.values() for v in vs]
    meta = {"N": N, "L": L, "M": M, "portals": {k: list(v) for k, v in gad.portals.items()},
            "selectors": {f"{a},{b}": e for (a, b), e in gad.selectors.items()}}
    _write_generated(SteinerInstance(gad.graph, ()), meta, out, sidecar, dot, ports)


@gen.command("reduction")
@click.option("--grid", type=click.Path(exists=True, dir_okay=False), required=True, help="Grid Tiling JSON.")
@click.option("--subdivide", is_flag=True, help="Replace weights by unit-edge paths.")
@click.option("--budget", type=int, default=100_000, show_default=True, help="Weight budget for --subdivide.")
@_with(gen_outputs)
def gen_reduction(grid, subdivide, budget, out, sidecar, dot):
    try:
        gt = reduction.GridTilingInstance.from_dict(json.loads(Path(grid).read_text()))
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    red = reduction.build_reduction(gt)
    inst = red.instance()
    meta = red.sidecar()
    if subdivide:
        sub = reduction.subdivide_to_unit_weights(red.graph, budget)
        faces = tuple(sub.face_image(red.graph, f) for f in red.terminal_faces)
        inst = SteinerInstance(sub.graph, red.terminals, faces)
        meta["terminal_faces"] = list(faces)
        meta["subdivided"] = True
    _write_generated(inst, meta, out, sidecar, dot)


@gen.command("random-planar")
@click.option("--n", "n", type=int, default=20, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--terminals", type=int, default=4, show_default=True)
@click.option("--faces", type=int, default=2, show_default=True)
@click.option("--keep", type=float, default=0.7, show_default=True, help="Edge survival probability.")
@_with(gen_outputs)
def gen_random(n, seed, terminals, faces, keep, out, sidecar, dot):
    inst = random_instance(n, terminals, faces, seed, keep=keep)
    _write_generated(inst, {"n": n, "seed": seed, "positions": inst.meta.get("positions")}, out, sidecar, dot)


# --------------------------------------------------------------------------
# verification suites


@main.group()
def verify():
    """Re-check quantitative claims; exit 1 if any fails."""


def _report(payload: dict, passed: bool, out) -> None:
    payload = {"passed": bool(passed), **payload}
    _emit(payload, out)
    if not passed:
        raise SystemExit(EXIT_FAILED)


@verify.command("flower")
@click.option("--t", "t", type=int, default=4, show_default=True)
@click.option("--out", "-o", type=click.Path(dir_okay=False))
def verify_flower(t, out):
    rep = flower.verify_flower_theorem(t)
    _report(rep.to_dict(), rep.passed, out)


@verify.command("triangle")
@click.option("--l", "ell", type=int, default=3, show_default=True)
@click.option("--tips-only", is_flag=True, help="Only the binary-tree tips.")
@click.option("--out", "-o", type=click.Path(dir_okay=False))
def verify_triangle(ell, tips_only, out):
    rep = flower.verify_triangle_lemma(ell, tips_only=tips_only)
    _report(rep.to_dict(), rep.passed, out)


@verify.command("metric")
@click.option("--width", type=int, default=10, show_default=True)
@click.option("--height", type=int, default=6, show_default=True)
@click.option("--out", "-o", type=click.Path(dir_okay=False))
def verify_metric(width, height, out):
    rep = flower.verify_metric(width, height)
    _report(rep.to_dict(), rep.passed, out)


@verify.command("vg")
@click.option("--N", "N", type=int, default=2, show_default=True)
@click.option("--M", "M", type=int, default=None)
@click.option("--out", "-o", type=click.Path(dir_okay=False))
def verify_vg(N, M, out):
    rep = reduction.verify_gadget_lemmas(N, 1, M, parts=("vg",))
    _report(rep.to_dict(), rep.ok, out)


@verify.command("lvg")
@click.option("--N", "N", type=int, default=2, show_default=True)
@click.option("--L", "L", type=int, default=2, show_default=True)
@click.option("--M", "M", type=int, default=None)
@click.option("--out", "-o", type=click.Path(dir_okay=False))
def verify_lvg(N, L, M, out):
    rep = reduction.verify_gadget_lemmas(N, L, M, parts=("lvg",))
    _report(rep.to_dict(), rep.ok, out)


@verify.command("reduction")
@click.option("--n", "n", type=int, default=2, show_default=True)
@click.option("--k", "k", type=int, default=2, show_default=True)
@click.option("--count", type=int, default=2, show_default=True, help="Instances of each kind.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "-o", type=click.Path(dir_okay=False))
def verify_reduction(n, k, count, seed, out):
    rows = []
    for kind in (True, False):
        for s in range(count):
            gt = reduction.random_grid_tiling(n, k, seed + s, satisfiable=kind)
            red = reduction.build_reduction(gt)
            t0 = time.perf_counter()
            w, within = reduction.classify(red)
            rows.append({"satisfiable": kind, "seed": seed + s, "weight": None if w is None else str(w),
                         "K_M": str(red.K_M), "within_budget": within, "correct": within == kind,
                         "seconds": round(time.perf_counter() - t0, 3)})
    _report({"instances": rows}, all(r["correct"] for r in rows), out)


@verify.command("noncrossing")
@click.option("--l", "ell", type=int, default=3, show_default=True)
@click.option("--out", "-o", type=click.Path(dir_okay=False))
def verify_noncrossing(ell, out):
    if ell > 5:
        raise TooLarge("noncrossing verification is limited to l <= 5")
    longest, explored = noncrossing.max_minimal_length(ell)
    _report({"l": ell, "max_length": longest, "bound": 4 * ell, "explored": explored},
            longest <= 4 * ell, out)


# --------------------------------------------------------------------------
# benchmark


@main.command()
@click.option("--sizes", default="10,14", show_default=True, help="Comma-separated vertex counts.")
@click.option("--seeds", type=int, default=3, show_default=True, help="Seeds per size.")
@click.option("--terminals", type=int, default=4, show_default=True)
@click.option("--faces", type=int, default=2, show_default=True)
@_with(solver_options)
@click.option("--out", "-o", type=click.Path(dir_okay=False), help="CSV path (stdout if omitted).")
def bench(sizes, seeds, terminals, faces, c0, sep_max, threads, dw_cap, out):
    """Solver versus subset DP on random instances, one CSV row each."""
    cfg = _config(c0, sep_max, threads, dw_cap)
    stream = open(out, "w", newline="") if out else sys.stdout
    try:
        writer = csv.DictWriter(stream, fieldnames=BENCH_COLUMNS)
        writer.writeheader()
        for n in _parse_set(sizes):
            for seed in range(seeds):
                inst = random_instance(n, terminals, faces, seed)
                t0 = time.perf_counter()
                res = solve_steiner_tree(inst, cfg)
                t1 = time.perf_counter()
                ref = dreyfus_wagner(inst.graph, inst.terminals, cap=max(dw_cap, terminals)).weight
                t2 = time.perf_counter()
                writer.writerow({
                    "n": n, "seed": seed, "terminals": len(inst.terminals), "faces": len(inst.faces),
                    "vertices": inst.graph.n, "edges": inst.graph.m,
                    "solver_weight": str(res.weight), "oracle_weight": str(ref), "agree": res.weight == ref,
                    "solver_seconds": f"{t1 - t0:.4f}", "oracle_seconds": f"{t2 - t1:.4f}",
                    "recursion_nodes": res.stats.recursion_nodes, "base_case_calls": res.stats.base_case_calls,
                    "separators_tried": res.stats.separators_tried, "recursion_depth": res.stats.recursion_depth,
                })
    finally:
        if out:
            stream.close()


def run(argv=None) -> int:
    """Entry point with the documented exit codes."""
    try:
        main.main(args=argv, standalone_mode=False)
    except click.exceptions.Abort:
        return EXIT_INPUT
    except click.ClickException as exc:
        exc.show()
        return EXIT_INPUT
    except (Infeasible, Unreachable) as exc:
        click.echo(f"infeasible: {exc}", err=True)
        return EXIT_INFEASIBLE
    except (InputError, TooLarge, ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INPUT
    except SystemExit as exc:
        return int(exc.code or 0)
    except PstError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INPUT
    return EXIT_OK


def entry() -> None:
    sys.exit(run())
