"""Command-line front end.

Exit codes: 0 success, 1 verification or invariant failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import generators
from .aw import construct_aw_spanner
from .geodesic import SteinerGraph
from .metric import (
    SpannerGraph,
    UnreachablePairError,
    dump_json,
    dw_matrix,
    load_json,
    point_arrays,
    points_from_json,
    points_to_json,
    verify_spanner,
)
from .separator import SeparatorError, find_balanced_separator
from .spanner import build_terrain_spanner, point_metric, spanner_stats, splits_balanced
from .svg import render_svg
from .terrain import TerrainError, gen_terrain, load_terrain

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _emit(text: str, path) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _load_points(path):
    try:
        return points_from_json(load_json(path))
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        raise InputError(f"cannot read points from {path}: {exc}") from exc


def _load_terrain(path):
    try:
        return load_terrain(path)
    except (OSError, ValueError, TerrainError) as exc:
        raise InputError(f"cannot read terrain from {path}: {exc}") from exc


def _xy(points) -> list[tuple[float, float]]:
    if points and points[0].dim < 2:
        raise InputError("terrain points need at least two coordinates")
    return generators.xy_of(points)


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            flag = "-i" if name == "input" else "--" + name.replace("_", "-")
            raise InputError(f"{args.command} needs {flag}")


# --- gen ----------------------------------------------------------------------


def cmd_gen(args) -> int:
    _require(args, "seed")
    if args.kind_or_what in ("points", "weighted-points", "lowerbound-disk"):
        _require(args, "n")
        if args.n < 0:
            raise InputError("--n must be non-negative")
        if args.kind_or_what == "points":
            pts = generators.plane_points(args.n, args.seed, margin=0.0)
            if args.dim not in (None, 2):
                raise InputError("plain points are generated in the unit square (--dim 2)")
        elif args.kind_or_what == "weighted-points":
            dim = 2 if args.dim is None else args.dim
            if dim < 1:
                raise InputError("--dim must be >= 1")
            pts = generators.weighted_points(args.n, dim, args.seed)
        else:
            pts = generators.lowerbound_disk(args.n, args.seed)
        _emit(dump_json(points_to_json(pts)), args.output)
        return EXIT_OK
    kind = args.kind or "flat"
    res = 4 if args.res is None else args.res
    try:
        terrain = gen_terrain(kind, res, seed=args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit(terrain.to_off(), args.output)
    return EXIT_OK


# --- build --------------------------------------------------------------------


def cmd_build(args) -> int:
    mode = args.kind_or_what
    eps = 0.25 if args.eps is None else args.eps
    if mode == "aw":
        _require(args, "input")
        pts = _load_points(args.input)
        coords, weights = point_arrays(pts) if pts else (np.zeros((0, 1)), np.zeros(0))
        try:
            sp = construct_aw_spanner(coords, weights, eps)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        _emit(dump_json(sp.graph.to_json()), args.output)
        if args.report:
            report = spanner_stats(sp.graph, len(pts))
            report.update(sp.clustering.to_json())
            dump_json(report, args.report)
        return EXIT_OK
    _require(args, "terrain", "points")
    terrain = _load_terrain(args.terrain)
    pts = _xy(_load_points(args.points))
    m_s = 3 if args.steiner is None else args.steiner
    if not (0 < eps <= 1):
        raise InputError(f"--eps must lie in (0, 1] for terrain spanners, got {eps}")
    if m_s < 0:
        raise InputError("--steiner must be >= 0")
    try:
        sg = SteinerGraph(terrain, m_s, pts)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    res = build_terrain_spanner(terrain, sg, eps, "basic" if mode == "terrain-basic" else "refined")
    _emit(dump_json(res.graph.to_json()), args.output)
    if args.report:
        trace = res.trace_json()
        trace["stats"] = spanner_stats(res.graph, len(pts), res.depth)
        dump_json(trace, args.report)
    if not splits_balanced(res.levels):
        logging.error("a recursion split exceeds 7n/9")
        return EXIT_FAIL
    return EXIT_OK


# --- verify -------------------------------------------------------------------


def _load_graph(path) -> SpannerGraph:
    try:
        return SpannerGraph.from_json(load_json(path))
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        raise InputError(f"cannot read graph from {path}: {exc}") from exc


def cmd_verify(args) -> int:
    _require(args, "input", "points")
    g = _load_graph(args.input)
    metric_kind = args.metric or "aw"
    pts = _load_points(args.points)
    if len(pts) != g.n:
        raise InputError(f"graph has {g.n} nodes but {len(pts)} points were given")
    if metric_kind == "aw":
        coords, weights = point_arrays(pts)
        metric = dw_matrix(coords, weights)
    elif metric_kind == "terrain":
        _require(args, "terrain")
        terrain = _load_terrain(args.terrain)
        try:
            sg = SteinerGraph(terrain, 3 if args.steiner is None else args.steiner, _xy(pts))
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        metric = point_metric(sg)
    else:
        raise InputError(f"unknown metric {metric_kind!r}")
    t = 2.25 if args.t is None else args.t
    tol = 1e-9 if args.tol is None else args.tol
    try:
        rep = verify_spanner(g, metric, t, tol)
        report = rep.to_json()
    except UnreachablePairError as exc:
        report = {"ratio": None, "worst_pair": list(exc.pair), "edges": g.num_edges, "pass": False}
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    text = dump_json(report)
    _emit(text, args.report or args.output)
    return EXIT_OK if report["pass"] else EXIT_FAIL


# --- separate / export-svg ----------------------------------------------------------


def cmd_separate(args) -> int:
    _require(args, "terrain", "points")
    terrain = _load_terrain(args.terrain)
    pts = _xy(_load_points(args.points))
    if len(pts) < 5:
        raise InputError("a balanced separator needs at least 5 points")
    try:
        sg = SteinerGraph(terrain, 3 if args.steiner is None else args.steiner, pts)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    sep = find_balanced_separator(sg, terrain, range(len(pts)))
    _emit(dump_json(sep.to_json()), args.output)
    return EXIT_OK


def cmd_svg(args) -> int:
    terrain = _load_terrain(args.terrain) if args.terrain else None
    pts = np.array(_xy(_load_points(args.points))) if args.points else None
    polylines, edges, inside = [], [], []
    if args.input:
        try:
            data = load_json(args.input)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read {args.input}: {exc}") from exc
        if isinstance(data, dict) and "polylines" in data:
            polylines = [np.array(pl, dtype=float) for pl in data["polylines"]]
            inside = data.get("inside", [])
        elif isinstance(data, dict) and "edges" in data:
            g = _load_graph(args.input)
            if pts is None or len(pts) != g.n:
                raise InputError("drawing a graph needs --points with one point per node")
            edges = list(g.edges)
        else:
            raise InputError(f"{args.input} is neither a separator nor a graph")
    if terrain is None and pts is None and not polylines:
        raise InputError("nothing to draw")
    _emit(render_svg(terrain, polylines, pts, edges, inside), args.output)
    return EXIT_OK


def cmd_harness(args) -> int:
    from . import harness

    numbers = [int(k) for k in args.criteria] if args.criteria else None
    if numbers and any(k not in harness.CRITERIA for k in numbers):
        raise InputError(f"criteria must be among {sorted(harness.CRITERIA)}")
    results = harness.run(numbers)
    for r in results:
        print(r.line(), flush=True)
    if args.report:
        dump_json(harness.results_json(results), args.report)
    if args.output:
        harness.write_artifacts(args.output)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


# --- parser -------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int)
    p.add_argument("--dim", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--eps", type=float)
    p.add_argument("--steiner", type=int, help="Steiner points per mesh edge (m_s)")
    p.add_argument("--kind", help="terrain kind: flat, ridge, random-heights")
    p.add_argument("--res", type=int, help="terrain grid resolution")
    p.add_argument("-i", dest="input")
    p.add_argument("-o", dest="output")
    p.add_argument("--terrain")
    p.add_argument("--points")
    p.add_argument("--metric", choices=("aw", "terrain"))
    p.add_argument("-t", type=float, dest="t")
    p.add_argument("--tol", type=float)
    p.add_argument("--report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="terraspan", description="Weighted and geodesic spanners.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("gen", help="generate fixtures")
    p.add_argument("kind_or_what", choices=("points", "weighted-points", "terrain", "lowerbound-disk"))
    _common(p)
    p = sub.add_parser("build", help="build a spanner")
    p.add_argument("kind_or_what", choices=("aw", "terrain-basic", "terrain-refined"))
    _common(p)
    p = sub.add_parser("verify", help="measure the spanning ratio of a graph")
    _common(p)
    p = sub.add_parser("separate", help="compute a balanced separator")
    _common(p)
    for name in ("export-svg", "svg"):
        p = sub.add_parser(name, help="draw terrain, separator or graph as SVG")
        _common(p)
    p = sub.add_parser("harness", help="run acceptance experiments")
    p.add_argument("criteria", nargs="*")
    _common(p)
    return parser


COMMANDS = {
    "gen": cmd_gen,
    "build": cmd_build,
    "verify": cmd_verify,
    "separate": cmd_separate,
    "export-svg": cmd_svg,
    "svg": cmd_svg,
    "harness": cmd_harness,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SeparatorError, AssertionError) as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
