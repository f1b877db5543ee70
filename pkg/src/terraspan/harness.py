"""Experiment harness: runs the desk-scale acceptance experiments.

Every criterion function returns a :class:`CriterionResult`; expensive runs
are cached so later criteria can reuse the instances built by earlier ones.
"""

from __future__ import annotations

import functools
import hashlib
import math
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import generators
from .aw import construct_aw_spanner
from .geodesic import SteinerGraph, unfold_distance
from .metric import REL_TOL, dump_json, dw_matrix, point_arrays, spanning_ratio
from .separator import check_separator, find_balanced_separator
from .spanner import (
    build_terrain_spanner,
    point_metric,
    rep_inequality,
    spanner_stats,
    splits_balanced,
)
from .svg import render_svg
from .terrain import gen_terrain, hinge_terrain


AW_DIMS = (1, 2, 3)
AW_NS = (50, 100, 200)
AW_WMAX = (0.5, 5.0)
AW_EPS = (0.10, 0.25, 0.41)
SEEDS = range(5)
TERRAIN_RES = 4
DRIFT = 2.0


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    summary: str
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.number:>2} {self.title}: {self.summary} ({self.seconds:.1f}s)"


def _drift(values) -> float:
    values = [v for v in values if v > 0]
    return max(values) / min(values) if values else 1.0


# --- additively weighted instances ------------------------------------------


@dataclass
class AWRun:
    d: int
    n: int
    wmax: float
    eps: float
    seed: int
    coords: np.ndarray
    weights: np.ndarray
    spanner: object
    ratio: float
    seconds: float


def aw_instance(d: int, n: int, wmax: float, seed: int):
    pts = generators.weighted_points(n, d, [seed, d, n, int(wmax * 10)], wmax)
    return point_arrays(pts)


@functools.lru_cache(maxsize=None)
def aw_runs() -> tuple[AWRun, ...]:
    runs = []
    for d in AW_DIMS:
        for n in AW_NS:
            for wmax in AW_WMAX:
                for seed in SEEDS:
                    coords, weights = aw_instance(d, n, wmax, seed)
                    metric = dw_matrix(coords, weights)
                    for eps in AW_EPS:
                        t0 = time.perf_counter()
                        sp = construct_aw_spanner(coords, weights, eps)
                        ratio = spanning_ratio(sp.graph, metric).ratio
                        runs.append(AWRun(d, n, wmax, eps, seed, coords, weights, sp, ratio, time.perf_counter() - t0))
    return tuple(runs)


def criterion_1() -> CriterionResult:
    t0 = time.perf_counter()
    runs = aw_runs()
    elapsed = time.perf_counter() - t0
    bad = [(r.d, r.n, r.wmax, r.eps, r.seed, r.ratio) for r in runs if r.ratio > (2 + r.eps) * (1 + REL_TOL)]
    worst = max(runs, key=lambda r: r.ratio / (2 + r.eps))
    ok = not bad and elapsed < 120
    return CriterionResult(
        1,
        "AW spanner ratio <= 2+eps",
        ok,
        f"{len(runs)} runs, {len(bad)} violations, worst ratio {worst.ratio:.4f} at eps={worst.eps}, build+check {elapsed:.1f}s (limit 120s)",
        {"violations": bad, "elapsed": elapsed},
        elapsed,
    )


def cluster_violations(coords: np.ndarray, weights: np.ndarray, clustering) -> dict[str, int]:
    eps = clustering.epsilon
    counts = {"radius": 0, "separation": 0, "min_weight_center": 0}
    for cl in clustering.clusters:
        c = cl.center
        for p in cl.members:
            if weights[p] < weights[c]:
                counts["min_weight_center"] += 1
            if p != c:
                dwv = weights[p] + float(np.linalg.norm(coords[p] - coords[c])) + weights[c]
                if not dwv <= (2 + eps) * weights[p]:
                    counts["radius"] += 1
    cs = clustering.centers
    cx, cw = coords[cs], weights[cs]
    for a in range(len(cs)):
        d = np.linalg.norm(cx[a + 1 :] - cx[a], axis=1)
        counts["separation"] += int(np.count_nonzero(~(d > eps * np.minimum(cw[a + 1 :], cw[a]))))
    return counts


def criterion_2() -> CriterionResult:
    t0 = time.perf_counter()
    total = {"radius": 0, "separation": 0, "min_weight_center": 0}
    for r in aw_runs():
        for k, v in cluster_violations(r.coords, r.weights, r.spanner.clustering).items():
            total[k] += v
    ok = sum(total.values()) == 0
    return CriterionResult(
        2, "cluster invariants", ok, f"violations {total} over {len(aw_runs())} clusterings", total, time.perf_counter() - t0
    )


def criterion_3() -> CriterionResult:
    t0 = time.perf_counter()
    ratio_bad = []
    degree: dict[tuple[float, int], dict[int, int]] = {}
    for r in aw_runs():
        cs = r.spanner.centers
        bb = r.spanner.backbone
        if len(cs) >= 2:
            ratio = spanning_ratio(bb, dw_matrix(r.coords[cs], r.weights[cs])).ratio
            if ratio > (1 + r.eps) * (1 + REL_TOL):
                ratio_bad.append((r.d, r.n, r.eps, r.seed, ratio))
        key = (r.eps, r.d)
        degree.setdefault(key, {})
        degree[key][r.n] = max(degree[key].get(r.n, 0), bb.max_degree())
    drifts = {f"eps={e},d={d}": round(_drift(v.values()), 3) for (e, d), v in sorted(degree.items())}
    table = {f"eps={e},d={d}": [v[n] for n in AW_NS] for (e, d), v in sorted(degree.items())}
    worst = max(drifts.values())
    ok = not ratio_bad and worst <= DRIFT
    return CriterionResult(
        3,
        "backbone ratio <= 1+eps, degree drift <= 2",
        ok,
        f"{len(ratio_bad)} ratio violations; max backbone degree per (eps,d) over n={AW_NS}: {table}; worst drift {worst:.2f}",
        {"ratio_violations": ratio_bad, "max_degree": table, "drift": drifts},
        time.perf_counter() - t0,
    )


def criterion_4() -> CriterionResult:
    t0 = time.perf_counter()
    ns = (100, 200, 400)
    table = {}
    for eps in AW_EPS:
        for d in AW_DIMS:
            for wmax in AW_WMAX:
                vals = []
                for n in ns:
                    per = []
                    for seed in SEEDS:
                        coords, weights = aw_instance(d, n, wmax, seed)
                        per.append(construct_aw_spanner(coords, weights, eps).graph.num_edges / n)
                    vals.append(float(np.mean(per)))
                table[f"eps={eps},d={d},w<={wmax}"] = [round(v, 2) for v in vals]
    drifts = {k: _drift(v) for k, v in table.items()}
    worst_key = max(drifts, key=drifts.get)
    ok = drifts[worst_key] <= DRIFT
    return CriterionResult(
        4,
        "AW edges/n drift <= 2",
        ok,
        f"worst drift {drifts[worst_key]:.2f} at {worst_key} (edges/n {table[worst_key]} for n={ns})",
        {"edges_per_n": table, "drift": {k: round(v, 3) for k, v in drifts.items()}},
        time.perf_counter() - t0,
    )


# --- separators --------------------------------------------------------------


SEP_KINDS = ("flat", "ridge", "random-heights")
SEP_NS = (20, 50, 100)
SEP_MS = (2, 4)


def separator_instances(count: int = 20):
    for k in range(count):
        kind = SEP_KINDS[k % 3]
        n = SEP_NS[(k // 3) % 3]
        m_s = SEP_MS[(k // 9) % 2]
        yield k, kind, n, m_s


def criterion_5() -> CriterionResult:
    t0 = time.perf_counter()
    failures, fallbacks, rows = [], 0, []
    for k, kind, n, m_s in separator_instances():
        terrain = gen_terrain(kind, TERRAIN_RES, seed=k)
        pts = generators.xy_of(generators.plane_points(n, [5, k]))
        sg = SteinerGraph(terrain, m_s, pts)
        sep = find_balanced_separator(sg, terrain, range(n))
        problems = check_separator(sg, terrain, range(n), sep)
        fallbacks += sep.method == "fallback"
        rows.append((kind, n, m_s, sep.kind, len(sep.inside), sep.method))
        if problems:
            failures.append((k, kind, n, m_s, problems))
    ok = not failures
    return CriterionResult(
        5,
        "separator balance",
        ok,
        f"{len(rows)} instances, {len(failures)} failures, {fallbacks} fallback invocations",
        {"instances": rows, "failures": failures, "fallbacks": fallbacks},
        time.perf_counter() - t0,
    )


# --- terrain spanners ----------------------------------------------------------


@dataclass
class TerrainRun:
    kind: str
    n: int
    mode: str
    m_s: int
    ratio: float
    stats: dict
    levels: list
    graph: object
    seconds: float


@functools.lru_cache(maxsize=None)
def terrain_run(kind: str, n: int, mode: str, m_s: int, eps: float = 0.25) -> TerrainRun:
    t0 = time.perf_counter()
    terrain = gen_terrain(kind, TERRAIN_RES, seed=n)
    pts = generators.xy_of(generators.plane_points(n, [6, n]))
    sg = SteinerGraph(terrain, m_s, pts)
    res = build_terrain_spanner(terrain, sg, eps, mode)
    ratio = spanning_ratio(res.graph, point_metric(sg)).ratio
    stats = spanner_stats(res.graph, n, res.depth)
    return TerrainRun(kind, n, mode, m_s, ratio, stats, res.levels, res.graph, time.perf_counter() - t0)


def criterion_6() -> CriterionResult:
    t0 = time.perf_counter()
    out, ok = [], True
    for n in (30, 60):
        for mode, target in (("refined", 2.25), ("basic", 6.25)):
            r = terrain_run("flat", n, mode, 3)
            ok &= r.ratio <= target
            out.append(f"n={n} {mode} ratio {r.ratio:.4f} (<= {target})")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 300
    return CriterionResult(6, "flat terrain spanner ratio", ok, "; ".join(out) + f"; {elapsed:.0f}s (limit 300s)", {}, elapsed)


def hinge_gaps(m_s: int = 4, fixtures: int = 6, pairs: int = 20) -> list[float]:
    """Relative excess of Steiner-graph over exact distances on 2-face hinges."""
    gaps = []
    for k in range(fixtures):
        rng = np.random.default_rng([7, k])
        za, zb = rng.uniform(-0.6, 0.6, 2)
        apex_a = (-rng.uniform(0.5, 1.0), rng.uniform(-0.3, 0.3), float(za))
        apex_b = (rng.uniform(0.5, 1.0), rng.uniform(-0.3, 0.3), float(zb))
        terrain = hinge_terrain(apex_a, apex_b)
        e0, e1 = terrain.vertices[0], terrain.vertices[1]
        A, B = terrain.vertices[2], terrain.vertices[3]
        pa, pb = [], []
        for _ in range(pairs):
            u = rng.dirichlet((1.0, 1.0, 1.0))
            v = rng.dirichlet((1.0, 1.0, 1.0))
            pa.append(u[0] * e0 + u[1] * e1 + u[2] * A)
            pb.append(v[0] * e0 + v[1] * e1 + v[2] * B)
        sg = SteinerGraph(terrain, m_s, [tuple(p[:2]) for p in pa + pb])
        for i in range(pairs):
            a, b = sg.point_nodes[i], sg.point_nodes[pairs + i]
            exact = unfold_distance(sg.positions[a], e0, e1, sg.positions[b])
            gaps.append(sg.dist(a, b) / exact - 1.0)
    return gaps


def criterion_7() -> CriterionResult:
    t0 = time.perf_counter()
    out, ok = [], True
    for kind in ("ridge", "random-heights"):
        r = terrain_run(kind, 50, "refined", 4)
        ok &= r.ratio <= 2.25
        out.append(f"{kind} ratio {r.ratio:.4f}")
    gaps = hinge_gaps()
    out.append(f"hinge gap eps_g max {max(gaps):.4f} mean {np.mean(gaps):.4f} (informational)")
    return CriterionResult(
        7, "nonflat terrain spanner ratio <= 2.25", ok, "; ".join(out), {"gaps": gaps}, time.perf_counter() - t0
    )


def criterion_8() -> CriterionResult:
    t0 = time.perf_counter()
    runs = [terrain_run("flat", n, m, 3) for n in (30, 60) for m in ("refined", "basic")]
    runs += [terrain_run(k, 50, "refined", 4) for k in ("ridge", "random-heights")]
    levels = [lv for r in runs for lv in r.levels]
    balanced = splits_balanced(levels)
    series = {}
    for mode in ("refined", "basic"):
        series[mode] = [terrain_run("flat", n, mode, 3).stats["edges_per_nlogn"] for n in (30, 60, 120)]
    drifts = {m: _drift(v) for m, v in series.items()}
    ok = balanced and all(d <= DRIFT for d in drifts.values())
    summary = f"{len(levels)} splits, all <= 7n/9: {balanced}; edges/(n log2 n) for n=30,60,120: " + ", ".join(
        f"{m} {[round(v, 2) for v in series[m]]} drift {drifts[m]:.2f}" for m in series
    )
    return CriterionResult(8, "recursion balance and n log n size", ok, summary, {"series": series}, time.perf_counter() - t0)


def criterion_9(samples: int = 1000, eps2: float = 0.25) -> CriterionResult:
    t0 = time.perf_counter()
    terrain = gen_terrain("flat", TERRAIN_RES)
    n = 40
    pts = generators.xy_of(generators.plane_points(n, [9]))
    sg = SteinerGraph(terrain, 3, pts)
    sep = find_balanced_separator(sg, terrain, range(n))
    sides = list(sep.sides)
    # grow the pool of sides with separators from the two halves
    for half in (sorted(sep.inside), sorted(set(range(n)) - sep.inside)):
        if len(half) >= 5:
            sides.extend(find_balanced_separator(sg, terrain, half).sides)
    sides = [s for s in sides if len(s) >= 2]
    rng = np.random.default_rng([9, 1])
    violations, worst = 0, 0.0
    for _ in range(samples):
        side = sides[int(rng.integers(len(sides)))]
        p = sg.point_nodes[int(rng.integers(n))]
        k = int(rng.integers(len(side)))
        lhs, rhs = rep_inequality(sg, side, p, k, eps2)
        if rhs > 0:
            worst = max(worst, lhs / rhs)
        if lhs > rhs:
            violations += 1
    return CriterionResult(
        9,
        "case A/B inequality",
        violations == 0,
        f"{samples} samples over {len(sides)} sides, {violations} violations, max lhs/rhs {worst:.6f}",
        {"violations": violations},
        time.perf_counter() - t0,
    )


def criterion_10(eps: float = 0.25) -> CriterionResult:
    t0 = time.perf_counter()
    out, ok = [], True
    for n in (50, 100, 200):
        pts = generators.lowerbound_disk(n, [10, n])
        coords, weights = point_arrays(pts)
        sp = construct_aw_spanner(coords, weights, eps)
        ratio = spanning_ratio(sp.graph, dw_matrix(coords, weights)).ratio
        ok &= ratio <= (2 + eps) * (1 + REL_TOL)
        out.append(f"n={n} ratio {ratio:.4f} edges/n {sp.graph.num_edges / n:.2f}")
    return CriterionResult(10, "unit-disk lower-bound demo", ok, "; ".join(out), {}, time.perf_counter() - t0)


# --- artifacts and determinism ----------------------------------------------


def write_artifacts(out_dir) -> list[Path]:
    """Graphs, traces and drawings for a fixed set of small instances."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    coords, weights = aw_instance(2, 100, 0.5, 0)
    sp = construct_aw_spanner(coords, weights, 0.25)
    files.append(out / "aw_graph.json")
    dump_json(sp.graph.to_json(), files[-1])
    files.append(out / "aw_clusters.json")
    dump_json(sp.clustering.to_json(), files[-1])
    for kind in ("flat", "ridge"):
        terrain = gen_terrain(kind, TERRAIN_RES, seed=1)
        pts = generators.xy_of(generators.plane_points(30, [11, kind == "ridge"]))
        sg = SteinerGraph(terrain, 3, pts)
        res = build_terrain_spanner(terrain, sg, 0.25, "refined")
        files.append(out / f"{kind}_graph.json")
        dump_json(res.graph.to_json(), files[-1])
        files.append(out / f"{kind}_trace.json")
        dump_json(res.trace_json(), files[-1])
        sep = find_balanced_separator(sg, terrain, range(len(pts)))
        files.append(out / f"{kind}_separator.json")
        dump_json(sep.to_json(), files[-1])
        files.append(out / f"{kind}_separator.svg")
        files[-1].write_text(
            render_svg(terrain, [s.xy for s in sep.sides], np.array(pts), highlight=sorted(sep.inside))
        )
        files.append(out / f"{kind}_spanner.svg")
        files[-1].write_text(render_svg(terrain, (), np.array(pts), list(res.graph.edges)))
    return files


def digest(files) -> dict[str, str]:
    return {Path(f).name: hashlib.sha256(Path(f).read_bytes()).hexdigest() for f in files}


def criterion_11() -> CriterionResult:
    t0 = time.perf_counter()
    with tempfile.TemporaryDirectory() as a, tempfile.TemporaryDirectory() as b:
        da = digest(write_artifacts(a))
        db = digest(write_artifacts(b))
    diff = sorted(k for k in da if da[k] != db.get(k))
    return CriterionResult(
        11,
        "determinism",
        not diff and da.keys() == db.keys(),
        f"{len(da)} artifacts compared, {len(diff)} differ",
        {"differ": diff},
        time.perf_counter() - t0,
    )


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
}


def run(numbers=None) -> list[CriterionResult]:
    numbers = sorted(CRITERIA) if not numbers else list(numbers)
    results = []
    for k in numbers:
        t0 = time.perf_counter()
        res = CRITERIA[k]()
        res.seconds = time.perf_counter() - t0
        results.append(res)
    return results


def results_json(results) -> dict:
    def clean(x):
        if isinstance(x, dict):
            return {str(k): clean(v) for k, v in x.items()}
        if isinstance(x, (list, tuple)):
            return [clean(v) for v in x]
        if isinstance(x, (np.floating, float)):
            return float(x) if math.isfinite(x) else str(x)
        if isinstance(x, (np.integer,)):
            return int(x)
        if isinstance(x, np.bool_):
            return bool(x)
        return x

    return {
        "criteria": [
            {"number": r.number, "title": r.title, "pass": bool(r.passed), "summary": r.summary, "details": clean(r.details)}
            for r in results
        ]
    }

