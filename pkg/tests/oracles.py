"""Slow, independent reference implementations used by the tests.

Nothing here imports the package's algorithms; only plain Python and math.
"""

from __future__ import annotations

import math


def dw(p, wp, q, wq) -> float:
    if p is q:
        return 0.0
    return wp + math.dist(p, q) + wq


def floyd_warshall(n: int, edges: dict) -> list[list[float]]:
    d = [[math.inf] * n for _ in range(n)]
    for i in range(n):
        d[i][i] = 0.0
    for (i, j), w in edges.items():
        d[i][j] = min(d[i][j], w)
        d[j][i] = min(d[j][i], w)
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik == math.inf:
                continue
            di = d[i]
            for j in range(n):
                if dik + dk[j] < di[j]:
                    di[j] = dik + dk[j]
    return d


def bellman_ford(n: int, arcs: dict, src: int) -> list[float]:
    d = [math.inf] * n
    d[src] = 0.0
    for _ in range(n - 1):
        changed = False
        for (i, j), w in arcs.items():
            if d[i] + w < d[j]:
                d[j] = d[i] + w
                changed = True
            if d[j] + w < d[i]:
                d[i] = d[j] + w
                changed = True
        if not changed:
            break
    return d


def naive_greedy(dist: list[list[float]], t: float) -> set[tuple[int, int]]:
    """Path-greedy spanner recomputing all graph distances after each insertion."""
    n = len(dist)
    pairs = sorted(((dist[i][j], i, j) for i in range(n) for j in range(i + 1, n)))
    edges: dict = {}
    for w, i, j in pairs:
        gd = floyd_warshall(n, edges)
        if gd[i][j] > t * w:
            edges[(i, j)] = w
    return set(edges)


def naive_clusters(coords, weights, eps):
    """Cluster assignment by the weight-ordered rule, written from scratch."""
    order = sorted(range(len(weights)), key=lambda i: (weights[i], i))
    centers: list[int] = []
    owner = {}
    for p in order:
        best, bd = None, math.inf
        for k, c in enumerate(centers):
            d = math.dist(coords[p], coords[c])
            if d < bd:
                best, bd = k, d
        if best is not None and bd <= eps * weights[p]:
            owner[p] = centers[best]
        else:
            centers.append(p)
            owner[p] = p
    return centers, owner


def ratio(n: int, edges: dict, metric) -> float:
    gd = floyd_warshall(n, edges)
    return max(gd[i][j] / metric[i][j] for i in range(n) for j in range(i + 1, n))
