"""Weighted points, spanner graphs and brute-force dilation checks."""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

REL_TOL = 1e-9


@dataclass(frozen=True)
class WeightedPoint:
    coords: tuple[float, ...]
    weight: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(float(c) for c in self.coords))
        object.__setattr__(self, "weight", float(self.weight))
        if not self.weight >= 0:
            raise ValueError(f"weight must be non-negative, got {self.weight}")

    @property
    def dim(self) -> int:
        return len(self.coords)


def point_arrays(points: Sequence[WeightedPoint]) -> tuple[np.ndarray, np.ndarray]:
    """Stack a point list into an (n, d) coordinate array and a weight vector."""
    if not points:
        return np.zeros((0, 0)), np.zeros(0)
    dim = points[0].dim
    for p in points:
        if p.dim != dim:
            raise ValueError(f"dimension mismatch: {p.dim} != {dim}")
    coords = np.array([p.coords for p in points], dtype=float).reshape(len(points), dim)
    weights = np.array([p.weight for p in points], dtype=float)
    return coords, weights


def dw_distance(points: Sequence[WeightedPoint], i: int, j: int) -> float:
    """Additively weighted distance between entries ``i`` and ``j``.

    Identity is by index: coincident points at different indices are still
    at distance ``w(p) + w(q)``.
    """
    if i == j:
        return 0.0
    p, q = points[i], points[j]
    if p.dim != q.dim:
        raise ValueError(f"dimension mismatch: {p.dim} != {q.dim}")
    return p.weight + math.dist(p.coords, q.coords) + q.weight


def dw_matrix(coords: np.ndarray, weights: np.ndarray) -> np.ndarray:
    coords = np.asarray(coords, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if coords.ndim == 1:
        coords = coords[:, None]
    diff = coords[:, None, :] - coords[None, :, :]
    d = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    d += weights[:, None] + weights[None, :]
    np.fill_diagonal(d, 0.0)
    return d


def aw_metric(points: Sequence[WeightedPoint]) -> np.ndarray:
    coords, weights = point_arrays(points)
    return dw_matrix(coords, weights)


@dataclass
class SpannerGraph:
    """Undirected edge-weighted graph over vertices ``0..n-1``."""

    n: int
    edges: dict[tuple[int, int], float] = field(default_factory=dict)

    def add_edge(self, i: int, j: int, weight: float) -> bool:
        """Insert edge (i, j); returns False if it was already present."""
        if i == j:
            raise ValueError("self-loops are not allowed")
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise IndexError(f"edge ({i}, {j}) out of range for n={self.n}")
        if weight < 0:
            raise ValueError("edge weight must be non-negative")
        key = (i, j) if i < j else (j, i)
        if key in self.edges:
            return False
        self.edges[key] = float(weight)
        return True

    def has_edge(self, i: int, j: int) -> bool:
        return ((i, j) if i < j else (j, i)) in self.edges

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[list[tuple[int, float]]]:
        adj: list[list[tuple[int, float]]] = [[] for _ in range(self.n)]
        for (i, j), w in sorted(self.edges.items()):
            adj[i].append((j, w))
            adj[j].append((i, w))
        return adj

    def neighbors(self, i: int) -> list[int]:
        return sorted(j for j, _ in self.adjacency()[i])

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=int)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def max_degree(self) -> int:
        return int(self.degrees().max()) if self.n else 0

    def sorted_edges(self) -> list[tuple[int, int, float]]:
        return [(i, j, w) for (i, j), w in sorted(self.edges.items())]

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [[i, j, w] for i, j, w in self.sorted_edges()]}

    @classmethod
    def from_json(cls, data: dict) -> "SpannerGraph":
        try:
            g = cls(int(data["n"]))
            for i, j, w in data["edges"]:
                if not g.add_edge(int(i), int(j), float(w)):
                    raise ValueError(f"duplicate edge ({i}, {j})")
        except (KeyError, TypeError, IndexError) as exc:
            raise ValueError(f"malformed graph JSON: {exc}") from exc
        return g

    @classmethod
    def complete(cls, n: int, metric: "Metric") -> "SpannerGraph":
        dist = metric_matrix(metric, n)
        g = cls(n)
        for i in range(n):
            for j in range(i + 1, n):
                g.add_edge(i, j, dist[i, j])
        return g

    def check_weights(self, metric: "Metric", rel_tol: float = REL_TOL) -> list[tuple[int, int]]:
        """Return edges whose weight disagrees with the metric."""
        dist = metric_matrix(metric, self.n)
        bad = []
        for (i, j), w in self.edges.items():
            if not math.isclose(w, dist[i, j], rel_tol=rel_tol, abs_tol=1e-12):
                bad.append((i, j))
        return sorted(bad)

    def csr(self) -> csr_matrix:
        if not self.edges:
            return csr_matrix((self.n, self.n))
        ij = np.array(list(self.edges.keys()), dtype=int)
        w = np.array(list(self.edges.values()), dtype=float)
        # explicit zeros would be dropped by scipy
        w = np.where(w == 0.0, np.finfo(float).tiny, w)
        rows = np.concatenate([ij[:, 0], ij[:, 1]])
        cols = np.concatenate([ij[:, 1], ij[:, 0]])
        return csr_matrix((np.concatenate([w, w]), (rows, cols)), shape=(self.n, self.n))


Metric = Union[np.ndarray, Callable[[int, int], float]]


def metric_matrix(metric: Metric, n: int) -> np.ndarray:
    if callable(metric):
        out = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                out[i, j] = out[j, i] = metric(i, j)
        return out
    arr = np.asarray(metric, dtype=float)
    if arr.shape != (n, n):
        raise ValueError(f"metric matrix has shape {arr.shape}, expected {(n, n)}")
    return arr


def graph_distance(g: SpannerGraph, s: int, t: int) -> float | None:
    """Exact shortest-path distance from ``s`` to ``t``; ``None`` if unreachable."""
    if not (0 <= s < g.n and 0 <= t < g.n):
        raise IndexError("vertex out of range")
    if s == t:
        return 0.0
    adj = g.adjacency()
    dist = {s: 0.0}
    done = set()
    heap = [(0.0, s)]
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        if u == t:
            return d
        done.add(u)
        for v, w in adj[u]:
            nd = d + w
            if nd < dist.get(v, math.inf):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return None


def all_pairs_graph_distances(g: SpannerGraph) -> np.ndarray:
    """All-pairs shortest path matrix; unreachable pairs hold ``inf``."""
    if g.n == 0:
        return np.zeros((0, 0))
    return shortest_path(g.csr(), method="D", directed=False)


class UnreachablePairError(RuntimeError):
    def __init__(self, i: int, j: int):
        super().__init__(f"vertices {i} and {j} are disconnected in the spanner")
        self.pair = (i, j)


@dataclass(frozen=True)
class RatioResult:
    ratio: float
    pair: tuple[int, int] | None

    def __iter__(self):
        return iter((self.ratio, self.pair))


def _ratio_matrix(g: SpannerGraph, metric: Metric) -> np.ndarray:
    n = g.n
    dist = metric_matrix(metric, n)
    dg = all_pairs_graph_distances(g)
    iu = np.triu_indices(n, k=1)
    if np.any(dist[iu] <= 0):
        k = int(np.argmax(dist[iu] <= 0))
        raise ValueError(f"metric is not positive on pair ({iu[0][k]}, {iu[1][k]})")
    if not np.all(np.isfinite(dg[iu])):
        k = int(np.argmax(~np.isfinite(dg[iu])))
        raise UnreachablePairError(int(iu[0][k]), int(iu[1][k]))
    ratios = np.zeros((n, n))
    ratios[iu] = dg[iu] / dist[iu]
    return ratios


def spanning_ratio(g: SpannerGraph, metric: Metric) -> RatioResult:
    """Maximum of graph distance over metric distance across all pairs."""
    if g.n < 2:
        return RatioResult(1.0, None)
    ratios = _ratio_matrix(g, metric)
    flat = int(np.argmax(ratios))
    i, j = divmod(flat, g.n)
    return RatioResult(float(ratios[i, j]), (int(i), int(j)))


@dataclass
class SpannerReport:
    passed: bool
    ratio: float
    target: float
    worst_pairs: list[tuple[int, int, float]]
    edges: int
    max_degree: int

    def to_json(self) -> dict:
        worst = self.worst_pairs[0][:2] if self.worst_pairs else None
        return {
            "ratio": self.ratio,
            "worst_pair": list(worst) if worst else None,
            "edges": self.edges,
            "pass": self.passed,
        }


def verify_spanner(
    g: SpannerGraph, metric: Metric, t: float, tol: float = REL_TOL, k_worst: int = 5
) -> SpannerReport:
    if g.n < 2:
        return SpannerReport(True, 1.0, t, [], g.num_edges, g.max_degree())
    ratios = _ratio_matrix(g, metric)
    iu = np.triu_indices(g.n, k=1)
    vals = ratios[iu]
    order = np.argsort(-vals, kind="stable")[:k_worst]
    worst = [(int(iu[0][k]), int(iu[1][k]), float(vals[k])) for k in order]
    ratio = float(vals.max())
    return SpannerReport(
        passed=ratio <= t * (1 + tol),
        ratio=ratio,
        target=t,
        worst_pairs=worst,
        edges=g.num_edges,
        max_degree=g.max_degree(),
    )


# --- interchange formats -------------------------------------------------


def points_to_json(points: Sequence[WeightedPoint]) -> dict:
    dim = points[0].dim if points else 0
    return {
        "dim": dim,
        "points": [{"coords": list(p.coords), "weight": p.weight} for p in points],
    }


def points_from_json(data: dict) -> list[WeightedPoint]:
    try:
        dim = int(data["dim"])
        pts = [WeightedPoint(tuple(p["coords"]), p["weight"]) for p in data["points"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed weighted point JSON: {exc}") from exc
    for p in pts:
        if p.dim != dim:
            raise ValueError(f"point has dimension {p.dim}, expected {dim}")
    return pts


def dump_json(data: dict, path=None) -> str:
    text = json.dumps(data, indent=1, sort_keys=True) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def load_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def edges_from_pairs(n: int, pairs: Iterable[tuple[int, int]], dist: np.ndarray) -> SpannerGraph:
    g = SpannerGraph(n)
    for i, j in pairs:
        if i != j:
            g.add_edge(int(i), int(j), float(dist[i, j]))
    return g
