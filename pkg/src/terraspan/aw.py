"""Additively weighted (2+eps)-spanners for weighted points in R^d.

Points are clustered in order of non-decreasing weight, a greedy
(1+eps)-spanner (the backbone) is built on the cluster centers, and every
non-center point is wired to its center and to all backbone neighbours of
that center.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .metric import SpannerGraph, WeightedPoint, dw_matrix, point_arrays

MAX_EPS = math.sqrt(2.0) - 1.0


@dataclass(frozen=True)
class Cluster:
    center: int
    members: tuple[int, ...]


@dataclass(frozen=True)
class Clustering:
    clusters: tuple[Cluster, ...]
    epsilon: float

    @property
    def centers(self) -> list[int]:
        return [c.center for c in self.clusters]

    def assignment(self, n: int) -> np.ndarray:
        """Cluster position of every input index."""
        out = np.full(n, -1, dtype=int)
        for k, c in enumerate(self.clusters):
            out[list(c.members)] = k
        return out

    def to_json(self) -> dict:
        return {
            "clusters": [
                {"center": c.center, "members": list(c.members)} for c in self.clusters
            ]
        }


def check_eps(eps: float) -> None:
    if not (eps > 0 and eps <= MAX_EPS + 1e-12):
        raise ValueError(
            f"eps must lie in (0, sqrt(2)-1 = {MAX_EPS:.6f}] for the (2+eps) guarantee, got {eps}"
        )


def _as_2d(coords: np.ndarray) -> np.ndarray:
    coords = np.asarray(coords, dtype=float)
    return coords[:, None] if coords.ndim == 1 else coords


def cluster_arrays(coords: np.ndarray, weights: np.ndarray, eps: float) -> Clustering:
    coords = _as_2d(coords)
    weights = np.asarray(weights, dtype=float)
    n = len(weights)
    if n == 0:
        return Clustering((), eps)
    order = np.lexsort((np.arange(n), weights))
    centers: list[int] = []
    members: list[list[int]] = []
    cbuf = np.empty_like(coords)
    for p in order:
        p = int(p)
        m = len(centers)
        if m:
            diff = cbuf[:m] - coords[p]
            d2 = np.einsum("ij,ij->i", diff, diff)
            j = int(np.argmin(d2))  # first minimum = lowest cluster index
            if math.sqrt(d2[j]) <= eps * weights[p]:
                members[j].append(p)
                continue
        centers.append(p)
        members.append([p])
        cbuf[m] = coords[p]
    clusters = tuple(Cluster(c, tuple(sorted(ms))) for c, ms in zip(centers, members))
    return Clustering(clusters, eps)


def cluster_points(points: Sequence[WeightedPoint], eps: float) -> Clustering:
    """Partition ``points`` into clusters around low-weight centers.

    A point joins the nearest existing center ``c`` when ``|pc| <= eps*w(p)``,
    otherwise it becomes a center itself.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not points:
        return Clustering((), eps)
    coords, weights = point_arrays(points)
    return cluster_arrays(coords, weights, eps)


def greedy_spanner(dist: np.ndarray, t: float) -> SpannerGraph:
    """Path-greedy t-spanner over a full distance matrix.

    Pairs are scanned by increasing distance (ties by index) and an edge is
    added whenever the current graph distance exceeds ``t`` times the metric
    distance. Graph distances are kept as a dense matrix and updated
    incrementally after each insertion.
    """
    n = dist.shape[0]
    g = SpannerGraph(n)
    if n < 2:
        return g
    iu, ju = np.triu_indices(n, k=1)
    w_all = dist[iu, ju]
    order = np.lexsort((ju, iu, w_all))
    iu, ju, w_all = iu[order], ju[order], w_all[order]
    gd = np.full((n, n), np.inf)
    np.fill_diagonal(gd, 0.0)
    pos, m, chunk = 0, len(order), 64
    while pos < m:
        # graph distances only shrink, so satisfied pairs can be skipped in bulk
        end = min(m, pos + chunk)
        bad = np.nonzero(gd[iu[pos:end], ju[pos:end]] > t * w_all[pos:end])[0]
        if len(bad) == 0:
            pos, chunk = end, chunk * 2
            continue
        k = pos + int(bad[0])
        pos, chunk = k + 1, 64
        i, j, w = int(iu[k]), int(ju[k]), float(w_all[k])
        g.add_edge(i, j, w)
        di = gd[:, i].copy()
        dj = gd[:, j].copy()
        r1 = np.nonzero(di + w < dj)[0]
        r2 = np.nonzero(dj + w < di)[0]
        if len(r1) and len(r2):
            block = gd[np.ix_(r1, r2)]
            new = np.minimum(block, di[r1, None] + w + dj[None, r2])
            gd[np.ix_(r1, r2)] = new
            gd[np.ix_(r2, r1)] = new.T
    return g


def build_backbone(centers: Sequence[WeightedPoint], eps: float) -> SpannerGraph:
    """Greedy (1+eps)-spanner on the centers under the weighted distance."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if len(centers) < 2:
        return SpannerGraph(len(centers))
    coords, weights = point_arrays(centers)
    return greedy_spanner(dw_matrix(coords, weights), 1.0 + eps)


@dataclass
class AWSpanner:
    graph: SpannerGraph
    clustering: Clustering
    backbone: SpannerGraph
    centers: list[int]


def construct_aw_spanner(coords: np.ndarray, weights: np.ndarray, eps: float) -> AWSpanner:
    coords = _as_2d(coords)
    weights = np.asarray(weights, dtype=float)
    check_eps(eps)
    n = len(weights)
    clustering = cluster_arrays(coords, weights, eps)
    centers = clustering.centers
    g = SpannerGraph(n)
    if n == 0:
        return AWSpanner(g, clustering, SpannerGraph(0), [])
    cidx = np.array(centers, dtype=int)
    backbone = greedy_spanner(dw_matrix(coords[cidx], weights[cidx]), 1.0 + eps)
    for a, b in sorted(backbone.edges):
        g.add_edge(centers[a], centers[b], backbone.edges[(a, b)])
    adj = backbone.adjacency()
    for k, cl in enumerate(clustering.clusters):
        targets = np.array([cl.center] + [centers[b] for b, _ in adj[k]], dtype=int)
        members = np.array([p for p in cl.members if p != cl.center], dtype=int)
        if len(members) == 0:
            continue
        d = np.linalg.norm(coords[members][:, None, :] - coords[targets][None, :, :], axis=2)
        d += weights[members][:, None] + weights[targets][None, :]
        for a, p in enumerate(members.tolist()):
            for b, c in enumerate(targets.tolist()):
                g.add_edge(p, c, float(d[a, b]))
    return AWSpanner(g, clustering, backbone, centers)


def build_aw_spanner(points: Sequence[WeightedPoint], eps: float) -> SpannerGraph:
    """Additively weighted (2+eps)-spanner; requires 0 < eps <= sqrt(2)-1."""
    check_eps(eps)
    if not points:
        return SpannerGraph(0)
    coords, weights = point_arrays(points)
    return construct_aw_spanner(coords, weights, eps).graph
