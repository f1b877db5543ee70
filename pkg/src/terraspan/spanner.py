"""Divide-and-conquer geodesic spanners on terrains.

Each recursion step finds a balanced separator, turns every separator side
into a one-dimensional additively weighted instance (points placed at
arc-length positions along the side, weighted by their geodesic distance
to it), spans that instance, and lifts each 1-D edge back to the pair of
input points it came from. The two halves are then handled recursively.

``basic`` mode places one copy of each point at its closest node on the
side. ``refined`` mode places a whole projection set per point, which
tightens the guarantee from 6+eps to 2+eps.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .aw import construct_aw_spanner
from .geodesic import GeodesicPath, SteinerGraph, build_projection_set
from .metric import SpannerGraph
from .separator import Separator, find_balanced_separator
from .terrain import Terrain

log = logging.getLogger(__name__)

MODES = ("basic", "refined")


@dataclass
class SideInstance:
    side: GeodesicPath
    coords: np.ndarray  # arc-length positions
    weights: np.ndarray
    parents: np.ndarray  # index into S for every entry

    def __len__(self) -> int:
        return len(self.coords)


@dataclass
class LiftedEdge:
    p: int
    q: int
    weight: float  # geodesic distance between the parents
    weighted_length: float  # length of the 1-D edge it came from


@dataclass
class TerrainSpanner:
    graph: SpannerGraph
    levels: list[dict] = field(default_factory=list)
    eps: float = 0.0
    mode: str = "refined"

    @property
    def depth(self) -> int:
        return max((lv["depth"] for lv in self.levels), default=-1) + 1

    def trace_json(self) -> dict:
        return {"levels": self.levels, "depth": self.depth, "mode": self.mode, "eps": self.eps}


def split_eps(eps: float, mode: str) -> tuple[float, float]:
    if mode == "basic":
        return eps / 3.0, eps / 3.0
    if mode == "refined":
        return eps / 4.0, eps / 4.0
    raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")


def point_distances(sg: SteinerGraph, S: Sequence[int]) -> np.ndarray:
    """Rows of Steiner-graph distances from each point of S to every node."""
    return sg.dist_rows([sg.point_nodes[i] for i in S])


def side_instance(
    sg: SteinerGraph, sigma: GeodesicPath, S: Sequence[int], mode: str, eps2: float
) -> SideInstance:
    rows = point_distances(sg, S)[:, list(sigma.nodes)]
    coords, weights, parents = [], [], []
    for k, p in enumerate(S):
        if mode == "basic":
            j = int(np.argmin(rows[k]))
            coords.append(float(sigma.arclength[j]))
            weights.append(float(rows[k, j]))
            parents.append(p)
        else:
            ps = build_projection_set(sg, sg.point_nodes[p], sigma, eps2, rows[k])
            for r in ps.reps:
                coords.append(r.s)
                weights.append(r.weight)
                parents.append(p)
    return SideInstance(sigma, np.array(coords), np.array(weights), np.array(parents, dtype=int))


def process_side(
    sg: SteinerGraph,
    sigma: GeodesicPath,
    S: Sequence[int],
    mode: str,
    eps1: float,
    eps2: float,
) -> list[LiftedEdge]:
    """Span the 1-D instance of one side and lift its edges to pairs of S."""
    if eps1 <= 0 or eps2 <= 0:
        raise ValueError("eps1 and eps2 must be positive")
    S = list(S)
    if len(S) < 2:
        return []
    inst = side_instance(sg, sigma, S, mode, eps2)
    aw = construct_aw_spanner(inst.coords, inst.weights, eps1)
    out: dict[tuple[int, int], LiftedEdge] = {}
    for (a, b), wlen in sorted(aw.graph.edges.items()):
        p, q = int(inst.parents[a]), int(inst.parents[b])
        if p == q:
            continue
        key = (p, q) if p < q else (q, p)
        if key not in out:
            d = sg.dist(sg.point_nodes[key[0]], sg.point_nodes[key[1]])
            out[key] = LiftedEdge(key[0], key[1], d, wlen)
        elif wlen < out[key].weighted_length:
            out[key].weighted_length = wlen
    return list(out.values())


def _complete(sg: SteinerGraph, S: Sequence[int], g: SpannerGraph) -> None:
    for a in range(len(S)):
        for b in range(a + 1, len(S)):
            p, q = S[a], S[b]
            if not g.has_edge(p, q):
                g.add_edge(p, q, sg.dist(sg.point_nodes[p], sg.point_nodes[q]))


def build_terrain_spanner(
    terrain: Terrain,
    sg: SteinerGraph,
    eps: float,
    mode: str = "refined",
    eps_override: tuple[float, float] | None = None,
) -> TerrainSpanner:
    """Geodesic spanner over the points inserted into ``sg``.

    Targets ratio 2+eps in refined mode and 6+eps in basic mode, measured in
    the Steiner-graph metric. ``eps_override`` replaces the fixed (eps1, eps2)
    split and voids the guarantee.
    """
    if not (0 < eps <= 1):
        raise ValueError(f"eps must lie in (0, 1], got {eps}")
    eps1, eps2 = eps_override if eps_override is not None else split_eps(eps, mode)
    n = len(sg.point_nodes)
    g = SpannerGraph(n)
    result = TerrainSpanner(g, [], eps, mode)
    point_distances(sg, range(n))  # warm the distance cache in one batch
    stack: list[tuple[list[int], int]] = [(list(range(n)), 0)]
    while stack:
        S, depth = stack.pop()
        if len(S) <= 4:
            _complete(sg, S, g)
            continue
        sep: Separator = find_balanced_separator(sg, terrain, S)
        for side in sep.sides:
            for e in process_side(sg, side, S, mode, eps1, eps2):
                if not g.has_edge(e.p, e.q):
                    g.add_edge(e.p, e.q, e.weight)
        s_in = sorted(sep.inside)
        s_out = sorted(set(S) - sep.inside)
        result.levels.append(
            {
                "n": len(S),
                "n_in": len(s_in),
                "sep_type": sep.kind,
                "depth": depth,
                "method": sep.method,
                "sides": len(sep.sides),
            }
        )
        # pushed in reverse so the inside half is processed first
        stack.append((s_out, depth + 1))
        stack.append((s_in, depth + 1))
    return result


def build_spanner_for_points(
    terrain: Terrain,
    points_xy: Sequence[tuple[float, float]],
    eps: float,
    mode: str = "refined",
    m_s: int = 3,
) -> tuple[TerrainSpanner, SteinerGraph]:
    sg = SteinerGraph(terrain, m_s, points_xy)
    return build_terrain_spanner(terrain, sg, eps, mode), sg


def point_metric(sg: SteinerGraph) -> np.ndarray:
    """Steiner-graph distance matrix between the inserted points."""
    idx = sg.point_nodes
    return point_distances(sg, range(len(idx)))[:, idx]


def splits_balanced(levels: Sequence[dict]) -> bool:
    return all(9 * lv["n_in"] <= 7 * lv["n"] and 9 * (lv["n"] - lv["n_in"]) <= 7 * lv["n"] for lv in levels)


def spanner_stats(g: SpannerGraph, n: int | None = None, depth: int | None = None) -> dict:
    n = g.n if n is None else n
    m = g.num_edges
    nlog = n * math.log2(n) if n > 1 else 1.0
    out = {"n": n, "edges": m, "edges_per_nlogn": m / nlog, "max_degree": g.max_degree()}
    if depth is not None:
        out["depth"] = depth
    return out


# --- proof inequalities, checked on concrete instances ----------------------


def rep_inequality(sg: SteinerGraph, sigma: GeodesicPath, p: int, r_index: int, eps2: float) -> tuple[float, float]:
    """Both sides of d(p,p') + d_sigma(p',r) <= (1+eps2) d(p,r).

    ``p`` is a node, ``r`` the node at position ``r_index`` on ``sigma`` and
    ``p'`` the representative the projection set of ``p`` picks for ``r``.
    """
    ps = build_projection_set(sg, p, sigma, eps2)
    s_r = float(sigma.arclength[r_index])
    rep = ps.select(s_r)
    lhs = rep.weight + abs(rep.s - s_r)
    rhs = (1.0 + eps2) * sg.dist(p, sigma.nodes[r_index])
    return lhs, rhs


def first_crossing(sg: SteinerGraph, sigma: GeodesicPath, a: int, b: int) -> int | None:
    """Position on ``sigma`` of the first sigma node met by the shortest a-b path."""
    _, pred = sg.shortest_path_tree(a)
    on = {v: k for k, v in enumerate(sigma.nodes)}
    for v in sg.tree_path(pred, a, b).nodes:
        if v in on:
            return on[v]
    return None


def cross_pair_inequality(
    sg: SteinerGraph, sigma: GeodesicPath, p: int, q: int, eps2: float
) -> tuple[float, float] | None:
    """Both sides of d_sigma_w(p',q') <= (1+eps2) d(p,q) for nodes p, q.

    Returns None when the shortest p-q path does not meet ``sigma``.
    """
    k = first_crossing(sg, sigma, p, q)
    if k is None:
        return None
    s_r = float(sigma.arclength[k])
    a = build_projection_set(sg, p, sigma, eps2).select(s_r)
    b = build_projection_set(sg, q, sigma, eps2).select(s_r)
    return a.weight + abs(a.s - b.s) + b.weight, (1.0 + eps2) * sg.dist(p, q)
