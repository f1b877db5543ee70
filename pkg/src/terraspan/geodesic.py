"""Steiner-graph geodesics on terrains.

All geodesic quantities (distances, shortest paths, closest points on a
path, projection sets) are computed in a discrete surface graph whose nodes
are the mesh vertices, ``m_s`` evenly spaced points on every mesh edge, and
any extra points inserted for an input point set. Every pair of nodes that
share a face is joined by a straight chord of 3D Euclidean length.

By default the chords are planarized: wherever two chords of a face cross,
the crossing point becomes a node and both chords are split there. The
drawn segments are unchanged, but two paths can then only cross at a
shared node, which is what the separator-based spanner relies on.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .geometry import in_polygon, on_polyline
from .terrain import SurfacePoint, Terrain

REL_TOL = 1e-9


class SteinerGraph:
    """Discrete surface graph over a terrain.

    Node ids: mesh vertices first (same ids as the terrain), then the edge
    Steiner points edge by edge, then inserted points.
    """

    def __init__(
        self, terrain: Terrain, m_s: int, points: Sequence[tuple[float, float]] = (), planar: bool = True
    ):
        if m_s < 0:
            raise ValueError("m_s must be >= 0")
        self.terrain = terrain
        self.m_s = int(m_s)
        verts = terrain.vertices
        pos: list[np.ndarray] = [v for v in verts]
        faces_of: list[set[int]] = [set() for _ in range(len(verts))]
        kind = ["vertex"] * len(verts)
        for f, tri in enumerate(terrain.triangles.tolist()):
            for v in tri:
                faces_of[v].add(f)
        face_nodes: list[list[int]] = [list(tri) for tri in terrain.triangles.tolist()]
        self.edge_nodes: dict[tuple[int, int], list[int]] = {}
        for a, b in terrain.edges:
            chain = [a]
            for k in range(1, self.m_s + 1):
                t = k / (self.m_s + 1)
                pos.append((1 - t) * verts[a] + t * verts[b])
                nid = len(pos) - 1
                kind.append("steiner")
                fs = set(terrain.edge_faces[(a, b)])
                faces_of.append(fs)
                for f in fs:
                    face_nodes[f].append(nid)
                chain.append(nid)
            chain.append(b)
            self.edge_nodes[(a, b)] = chain
        self.num_base_nodes = len(pos)

        self.point_nodes: list[int] = []
        base_xy = np.array([p[:2] for p in pos])
        snap = 1e-12 * max(terrain.diameter, 1.0)
        seen: set[tuple[float, float]] = set()
        for x, y in points:
            q = np.array([x, y], dtype=float)
            key = (round(float(x) / snap), round(float(y) / snap))
            if key in seen:
                raise ValueError(f"input points must be pairwise distinct; ({x}, {y}) repeats")
            seen.add(key)
            d = np.linalg.norm(base_xy - q, axis=1)
            hit = int(np.argmin(d))
            if d[hit] <= snap:
                self.point_nodes.append(hit)
                continue
            fs = terrain.faces_containing(float(x), float(y))
            if not fs:
                terrain.locate(float(x), float(y))  # raises OutsideDomainError
            pos.append(terrain.lift(float(x), float(y)))
            nid = len(pos) - 1
            kind.append("point")
            faces_of.append(set(fs))
            for f in fs:
                face_nodes[f].append(nid)
            self.point_nodes.append(nid)
        if len(set(self.point_nodes)) != len(self.point_nodes):
            raise ValueError("input points must be pairwise distinct")

        if planar:
            arcs = _planar_arcs(pos, kind, faces_of, face_nodes, terrain)
        self.positions = np.array(pos, dtype=float)
        self.positions.setflags(write=False)
        self.node_faces = [tuple(sorted(s)) for s in faces_of]
        self.kind = kind
        self.face_nodes = [sorted(set(fn)) for fn in face_nodes]
        self.planar = bool(planar)

        if not planar:
            arcs = {}
            for fn in self.face_nodes:
                p = self.positions[fn]
                d = np.linalg.norm(p[:, None, :] - p[None, :, :], axis=2)
                for a in range(len(fn)):
                    for b in range(a + 1, len(fn)):
                        key = (fn[a], fn[b])
                        if key not in arcs:
                            arcs[key] = float(d[a, b])
        self.arcs = dict(sorted(arcs.items()))
        adj: list[list[tuple[int, float]]] = [[] for _ in range(len(pos))]
        for (i, j), w in self.arcs.items():
            adj[i].append((j, w))
            adj[j].append((i, w))
        for lst in adj:
            lst.sort()
        self.adj = adj
        self._build_boundary()
        self._rows: dict[int, np.ndarray] = {}
        self._all = ArcSet.from_arcs(self.arcs, len(pos))
        self._csr = self._all.csr

    def _build_boundary(self) -> None:
        t = self.terrain
        order: list[int] = []
        point_ids = [i for i in range(self.num_base_nodes, len(self.positions)) if self.kind[i] == "point"]
        for a, b in t.boundary_edges:
            key = (a, b) if a < b else (b, a)
            chain = self.edge_nodes[key]
            if chain[0] != a:
                chain = chain[::-1]
            pa, pb = self.positions[a, :2], self.positions[b, :2]
            # inserted points lying on this boundary edge, ordered along it
            extra = []
            dab = float(np.linalg.norm(pb - pa))
            for nid in point_ids:
                q = self.positions[nid, :2]
                tpar = float((q - pa) @ (pb - pa)) / dab**2
                if 0 < tpar < 1 and np.linalg.norm(pa + tpar * (pb - pa) - q) <= 1e-12 * max(dab, 1):
                    extra.append((tpar, nid))
            merged = [(k / (len(chain) - 1), nid) for k, nid in enumerate(chain)] + extra
            merged.sort()
            order.extend(nid for _, nid in merged[:-1])
        self.boundary_order = order
        flags = np.zeros(len(self.positions), dtype=bool)
        flags[order] = True
        self.is_boundary = flags
        self.boundary_index = {nid: k for k, nid in enumerate(order)}

    # --- basic queries --------------------------------------------------

    @property
    def num_nodes(self) -> int:
        return len(self.positions)

    @property
    def num_arcs(self) -> int:
        return len(self.arcs)

    def xy(self, nodes=None) -> np.ndarray:
        if nodes is None:
            return self.positions[:, :2]
        return self.positions[np.asarray(nodes, dtype=int), :2]

    def surface_point(self, node: int) -> SurfacePoint:
        f = self.node_faces[node][0]
        tri = self.terrain.vertices[self.terrain.triangles[f]][:, :2]
        q = self.positions[node, :2]
        m = np.array([[tri[0, 0], tri[1, 0], tri[2, 0]], [tri[0, 1], tri[1, 1], tri[2, 1]], [1, 1, 1]])
        b = np.linalg.solve(m, np.array([q[0], q[1], 1.0]))
        b = np.clip(b, 0.0, 1.0)
        b = b / b.sum()
        return SurfacePoint(f, (float(b[0]), float(b[1]), float(b[2])))

    def shares_face(self, a: int, b: int) -> bool:
        return bool(set(self.node_faces[a]) & set(self.node_faces[b]))

    def arc_faces(self, a: int, b: int) -> tuple[int, ...]:
        return tuple(sorted(set(self.node_faces[a]) & set(self.node_faces[b])))

    def segment_length(self, a: int, b: int) -> float:
        key = (a, b) if a < b else (b, a)
        return self.arcs[key]

    def dist_row(self, src: int) -> np.ndarray:
        """Graph distances from ``src`` to every node (cached)."""
        row = self._rows.get(src)
        if row is None:
            row = dijkstra(self._csr, directed=False, indices=src)
            row.setflags(write=False)
            self._rows[src] = row
        return row

    def dist_rows(self, sources: Iterable[int]) -> np.ndarray:
        sources = [int(s) for s in sources]
        missing = [s for s in sources if s not in self._rows]
        if missing:
            block = dijkstra(self._csr, directed=False, indices=missing)
            for s, row in zip(missing, np.atleast_2d(block)):
                row.setflags(write=False)
                self._rows[s] = row
        if not sources:
            return np.zeros((0, self.num_nodes))
        return np.vstack([self._rows[s] for s in sources])

    def dist(self, a: int, b: int) -> float:
        if a == b:
            return 0.0
        return float(self.dist_row(a)[b])

    def is_connected(self) -> bool:
        return bool(np.all(np.isfinite(self.dist_row(0))))

    # --- shortest path trees --------------------------------------------

    def shortest_path_tree(self, src: int, arcs: "ArcSet | None" = None) -> tuple[np.ndarray, np.ndarray]:
        """Shortest-path tree from ``src`` with deterministic tie-breaking.

        Among equally short routes the predecessor with the smaller node id
        wins, so every tree path is unique for a given input. ``arcs``
        restricts the search to a subset of the arcs.
        """
        arcs = self._all if arcs is None else arcs
        dist = dijkstra(arcs.csr, directed=True, indices=src)
        n = self.num_nodes
        tie = dist[arcs.tail] + arcs.weight == dist[arcs.head]
        best = np.full(n, n, dtype=np.int64)
        np.minimum.at(best, arcs.head[tie], arcs.tail[tie])
        pred = np.where(best < n, best, -1)
        pred[src] = -1
        return dist, pred

    def tree_path(self, pred: np.ndarray, src: int, dst: int) -> "GeodesicPath":
        nodes = [dst]
        while nodes[-1] != src:
            p = int(pred[nodes[-1]])
            if p < 0:
                raise ValueError(f"node {dst} is unreachable from {src}")
            nodes.append(p)
        return GeodesicPath.from_nodes(self, nodes[::-1])

    def restricted_arcs(self, allowed_arcs: Iterable[tuple[int, int]]) -> "ArcSet":
        keep = {}
        for i, j in allowed_arcs:
            key = (i, j) if i < j else (j, i)
            keep[key] = self.arcs[key]
        return ArcSet.from_arcs(dict(sorted(keep.items())), self.num_nodes)


@dataclass(frozen=True)
class ArcSet:
    """Both orientations of a set of arcs, ready for Dijkstra."""

    tail: np.ndarray
    head: np.ndarray
    weight: np.ndarray
    csr: csr_matrix

    @classmethod
    def from_arcs(cls, arcs: dict[tuple[int, int], float], n: int) -> "ArcSet":
        ij = np.array(list(arcs.keys()), dtype=np.int64).reshape(-1, 2)
        w = np.array(list(arcs.values()), dtype=float)
        tail = np.concatenate([ij[:, 0], ij[:, 1]])
        head = np.concatenate([ij[:, 1], ij[:, 0]])
        ww = np.concatenate([w, w])
        # csgraph treats explicit zeros as missing arcs
        stored = np.where(ww == 0.0, np.finfo(float).tiny, ww)
        csr = csr_matrix((stored, (tail, head)), shape=(n, n))
        return cls(tail, head, ww, csr)


def _planar_arcs(pos, kind, faces_of, face_nodes, terrain: Terrain) -> dict[tuple[int, int], float]:
    """Split every face's chords at their mutual crossings and at nodes they pass through.

    Crossing points become new nodes (appended to ``pos`` and friends), so
    two arcs of the result only ever meet at a shared node.
    """
    tol = 1e-10 * max(terrain.diameter, 1.0)
    arcs: dict[tuple[int, int], float] = {}
    for f in range(len(face_nodes)):
        fn = sorted(set(face_nodes[f]))
        P3 = np.array([pos[v] for v in fn])
        P = P3[:, :2]
        k = len(fn)
        ia, ib = np.triu_indices(k, 1)
        A, B = P[ia], P[ib]
        AB = B - A
        L2 = np.einsum("ij,ij->i", AB, AB)
        M = len(ia)
        splits: list[list[tuple[float, int]]] = [[(0.0, fn[ia[s]]), (1.0, fn[ib[s]])] for s in range(M)]
        # nodes lying inside a chord
        t = np.einsum("mkj,mj->mk", P[None, :, :] - A[:, None, :], AB) / L2[:, None]
        foot = A[:, None, :] + t[..., None] * AB[:, None, :]
        dd = np.linalg.norm(foot - P[None, :, :], axis=2)
        on = (dd <= tol) & (t > 0) & (t < 1)
        on[np.arange(M), ia] = False
        on[np.arange(M), ib] = False
        for s, c in zip(*np.nonzero(on)):
            splits[s].append((float(t[s, c]), fn[c]))
        # proper crossings between chords without a common endpoint
        r = AB[:, None, :]
        q = AB[None, :, :]
        d0 = A[None, :, :] - A[:, None, :]
        rxq = r[..., 0] * q[..., 1] - r[..., 1] * q[..., 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            tt = (d0[..., 0] * q[..., 1] - d0[..., 1] * q[..., 0]) / rxq
            uu = (d0[..., 0] * r[..., 1] - d0[..., 1] * r[..., 0]) / rxq
        lens = np.sqrt(L2)
        par = np.abs(rxq) <= 1e-12 * lens[:, None] * lens[None, :]
        et = tol / lens[:, None]
        eu = tol / lens[None, :]
        hit = (~par) & (tt > et) & (tt < 1 - et) & (uu > eu) & (uu < 1 - eu)
        hit = np.triu(hit, 1)
        s1, s2 = np.nonzero(hit)
        if len(s1):
            X = A[s1] + tt[s1, s2][:, None] * AB[s1]
            X3 = P3[ia[s1]] + tt[s1, s2][:, None] * (P3[ib[s1]] - P3[ia[s1]])
            ids = _merge_crossings(P, X, tol)
            new_of: dict[int, int] = {}
            for m in range(len(s1)):
                rep = ids[m]
                if rep < k:
                    node = fn[rep]
                else:
                    node = new_of.get(rep)
                    if node is None:
                        pos.append(X3[rep - k])
                        kind.append("crossing")
                        faces_of.append({f})
                        node = len(pos) - 1
                        new_of[rep] = node
                        face_nodes[f].append(node)
                splits[s1[m]].append((float(tt[s1[m], s2[m]]), node))
                splits[s2[m]].append((float(uu[s1[m], s2[m]]), node))
        for sp in splits:
            sp.sort()
            for (_, a), (_, b) in zip(sp, sp[1:]):
                if a == b:
                    continue
                key = (a, b) if a < b else (b, a)
                if key not in arcs:
                    arcs[key] = float(np.linalg.norm(np.asarray(pos[a]) - np.asarray(pos[b])))
    return arcs


def _merge_crossings(P: np.ndarray, X: np.ndarray, tol: float) -> np.ndarray:
    """Representative id for each crossing: a face node (< len(P)) or len(P)+first crossing index."""
    from scipy.spatial import cKDTree

    k = len(P)
    allp = np.vstack([P, X])
    parent = np.arange(len(allp))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in sorted(cKDTree(allp).query_pairs(tol)):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    return np.array([find(k + m) for m in range(len(X))])


def build_steiner_graph(
    terrain: Terrain, m_s: int, points: Sequence[tuple[float, float]] = (), planar: bool = True
) -> SteinerGraph:
    return SteinerGraph(terrain, m_s, points, planar)


@dataclass(frozen=True)
class GeodesicPath:
    nodes: tuple[int, ...]
    positions: np.ndarray = field(repr=False, compare=False)
    arclength: np.ndarray = field(repr=False, compare=False)

    @classmethod
    def from_nodes(cls, sg: SteinerGraph, nodes: Sequence[int]) -> "GeodesicPath":
        nodes = tuple(int(v) for v in nodes)
        if not nodes:
            raise ValueError("a path needs at least one node")
        seg = [sg.segment_length(a, b) for a, b in zip(nodes, nodes[1:])]
        s = np.concatenate([[0.0], np.cumsum(seg)])
        pos = sg.positions[list(nodes)].copy()
        pos.setflags(write=False)
        s.setflags(write=False)
        return cls(nodes, pos, s)

    @property
    def length(self) -> float:
        return float(self.arclength[-1])

    @property
    def start(self) -> int:
        return self.nodes[0]

    @property
    def end(self) -> int:
        return self.nodes[-1]

    @property
    def xy(self) -> np.ndarray:
        return self.positions[:, :2]

    def __len__(self) -> int:
        return len(self.nodes)

    def index(self, node: int) -> int:
        return self.nodes.index(node)

    def reversed(self) -> "GeodesicPath":
        s = self.length - self.arclength[::-1]
        s.setflags(write=False)
        return GeodesicPath(self.nodes[::-1], self.positions[::-1], s)

    def subpath(self, i: int, j: int) -> "GeodesicPath":
        """Nodes ``i..j`` inclusive (indices along the path)."""
        if i > j:
            return self.subpath(j, i).reversed()
        s = self.arclength[i : j + 1] - self.arclength[i]
        s.setflags(write=False)
        return GeodesicPath(self.nodes[i : j + 1], self.positions[i : j + 1], s)

    def to_json(self) -> dict:
        return {"nodes": [[float(c) for c in p] for p in self.positions], "length": self.length}

    def is_simple(self) -> bool:
        return len(set(self.nodes)) == len(self.nodes)


def geodesic_distance(sg: SteinerGraph, a: int, b: int) -> tuple[float, GeodesicPath]:
    """Shortest Steiner-graph path from ``a`` to ``b`` and its length."""
    if a == b:
        return 0.0, GeodesicPath.from_nodes(sg, [a])
    if a > b:
        # computed from the smaller id so both directions agree bit for bit
        d, path = geodesic_distance(sg, b, a)
        return d, path.reversed()
    _, pred = sg.shortest_path_tree(a)
    path = sg.tree_path(pred, a, b)
    return path.length, path


def is_shortest(sg: SteinerGraph, path: GeodesicPath, rel_tol: float = REL_TOL) -> bool:
    if len(path) == 1:
        return True
    d = sg.dist(path.start, path.end)
    return math.isclose(path.length, d, rel_tol=rel_tol, abs_tol=1e-12)


# --- closest points and projection sets ------------------------------------


def closest_on_path(
    sg: SteinerGraph, p: int, sigma: GeodesicPath, interval: tuple[float, float] | None = None
) -> tuple[int, float]:
    """Node of ``sigma`` nearest to ``p``; ties go to the smaller arc-length."""
    k, d = _closest_index(sg.dist_row(p)[list(sigma.nodes)], sigma, interval)
    return sigma.nodes[k], d


def _closest_index(dists: np.ndarray, sigma: GeodesicPath, interval=None) -> tuple[int, float]:
    idx = np.arange(len(sigma))
    if interval is not None:
        lo, hi = interval
        tol = REL_TOL * max(sigma.length, 1.0)
        idx = idx[(sigma.arclength >= lo - tol) & (sigma.arclength <= hi + tol)]
        if len(idx) == 0:
            raise ValueError(f"no node of the path lies in arc-length interval {interval}")
    k = int(idx[np.argmin(dists[idx])])
    return k, float(dists[k])


@dataclass(frozen=True)
class Rep:
    node: int
    index: int  # position along sigma
    s: float  # arc-length coordinate
    weight: float
    piece: tuple[float, float]
    piece_index: int = 0


@dataclass(frozen=True)
class ProjectionSet:
    source: int
    base: Rep
    reps: tuple[Rep, ...]
    window: float  # half-width of the arc-length window around the base
    piece_length: float
    eps2: float

    def piece_of(self, s: float) -> int | None:
        """Index of the piece containing arc-length ``s``, or None outside the window."""
        if self.base.weight == 0.0:
            return None
        tol = REL_TOL * max(self.window, 1.0)
        if abs(s - self.base.s) > self.window + tol:
            return None
        lo = self.base.s - self.window
        k = int(math.floor((s - lo) / self.piece_length))
        return min(max(k, 0), max_pieces(self.eps2) - 1)

    def select(self, s: float) -> Rep:
        """Representative used for a crossing at arc-length ``s``.

        Outside the window this is the base point; inside it is the
        representative of the piece that contains ``s``.
        """
        k = self.piece_of(s)
        if k is None:
            return self.base
        for r in self.reps:
            if r.piece_index == k:
                return r
        raise ValueError(f"no node of the path lies in piece {k}")


def max_pieces(eps2: float) -> int:
    x = 2.0 * (1.0 + 2.0 / eps2) / eps2
    return int(math.ceil(x - 1e-9))


def build_projection_set(
    sg: SteinerGraph, p: int, sigma: GeodesicPath, eps2: float, dists: np.ndarray | None = None
) -> ProjectionSet:
    if eps2 <= 0:
        raise ValueError("eps2 must be positive")
    if dists is None:
        dists = sg.dist_row(p)[list(sigma.nodes)]
    k0, d0 = _closest_index(dists, sigma)
    s0 = float(sigma.arclength[k0])
    if d0 == 0.0:
        base = Rep(sigma.nodes[k0], k0, s0, 0.0, (s0, s0))
        return ProjectionSet(p, base, (base,), 0.0, 0.0, eps2)
    window = (1.0 + 2.0 / eps2) * d0
    npieces = max_pieces(eps2)
    plen = 2.0 * window / npieces
    lo = s0 - window
    tol = REL_TOL * max(window, 1.0)
    s = sigma.arclength
    inside = np.nonzero(np.abs(s - s0) <= window + tol)[0]
    best: dict[int, int] = {}
    for k in inside:
        piece = min(max(int(math.floor((s[k] - lo) / plen)), 0), npieces - 1)
        cur = best.get(piece)
        if cur is None or dists[k] < dists[cur]:
            best[piece] = int(k)
    reps = []
    base = None
    for piece in sorted(best):
        k = best[piece]
        r = Rep(sigma.nodes[k], k, float(s[k]), float(dists[k]), (lo + piece * plen, lo + (piece + 1) * plen), piece)
        reps.append(r)
        if k == k0:
            base = r
    assert base is not None
    return ProjectionSet(p, base, tuple(reps), window, plen, eps2)


# --- sidedness ----------------------------------------------------------------


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    ON = "on"


def _boundary_param(poly: np.ndarray, q: np.ndarray, tol: float) -> float:
    k = len(poly)
    for i in range(k):
        a, b = poly[i], poly[(i + 1) % k]
        ab = b - a
        t = float((q - a) @ ab) / float(ab @ ab)
        if -tol <= t <= 1 + tol and np.linalg.norm(a + min(max(t, 0), 1) * ab - q) <= tol * max(1, np.linalg.norm(ab)):
            return i + min(max(t, 0.0), 1.0 - 1e-15)
    raise ValueError(f"point {q.tolist()} is not on the terrain boundary")


def boundary_arc(terrain: Terrain, start_xy: np.ndarray, end_xy: np.ndarray) -> np.ndarray:
    """Counterclockwise boundary polyline from ``start_xy`` to ``end_xy``."""
    poly = terrain.boundary_polygon()
    tol = 1e-9
    s = _boundary_param(poly, np.asarray(start_xy, float), tol)
    e = _boundary_param(poly, np.asarray(end_xy, float), tol)
    k = len(poly)
    out = [np.asarray(start_xy, float)]
    if e <= s:
        e += k
    i = int(math.floor(s)) + 1
    while i <= e - 1e-12:
        out.append(poly[i % k])
        i += 1
    out.append(np.asarray(end_xy, float))
    return np.array(out)


def right_region(terrain: Terrain, sigma: GeodesicPath) -> np.ndarray:
    """Ring bounding the region to the right of a boundary-to-boundary path.

    The region is closed off by the counterclockwise boundary arc from the
    start of the path to its end.
    """
    xy = sigma.xy
    arc = boundary_arc(terrain, xy[0], xy[-1])
    return np.vstack([arc[:-1], xy[::-1][:-1]])


def side_tol(terrain: Terrain) -> float:
    return 1e-9 * max(terrain.diameter, 1.0)


def classify_points(terrain: Terrain, sigma: GeodesicPath, pts_xy: np.ndarray) -> np.ndarray:
    """Vectorised sidedness: returns an array of 'L', 'R', 'O'."""
    for end in (sigma.xy[0], sigma.xy[-1]):
        _boundary_param(terrain.boundary_polygon(), end, 1e-9)
    pts_xy = np.atleast_2d(np.asarray(pts_xy, dtype=float))
    tol = side_tol(terrain)
    on = on_polyline(pts_xy, sigma.xy, tol)
    ring = right_region(terrain, sigma)
    arc = boundary_arc(terrain, sigma.xy[0], sigma.xy[-1])
    inside = in_polygon(pts_xy, ring) | on_polyline(pts_xy, arc, tol)
    out = np.where(on, "O", np.where(inside, "R", "L"))
    return out


def classify_side(terrain: Terrain, sigma: GeodesicPath, q) -> Side:
    if isinstance(q, SurfacePoint):
        q = terrain.position(q)[:2]
    code = classify_points(terrain, sigma, np.asarray(q, dtype=float)[:2])[0]
    return {"L": Side.LEFT, "R": Side.RIGHT, "O": Side.ON}[code]


# --- unfolding oracle ---------------------------------------------------------


def unfold_distance(a, e0, e1, b) -> float:
    """Exact surface distance between points on two triangles hinged at e0-e1.

    ``a`` lies on the triangle (a, e0, e1) side and ``b`` on the other; the
    second triangle is rotated about the hinge into the plane of the first.
    """
    a, e0, e1, b = (np.asarray(x, dtype=float) for x in (a, e0, e1, b))
    axis = e1 - e0
    L = float(np.linalg.norm(axis))
    u = axis / L

    def planar(p):
        x = float((p - e0) @ u)
        y = float(np.linalg.norm(p - e0 - x * u))
        return x, y

    xa, ya = planar(a)
    xb, yb = planar(b)
    yb = -yb
    if ya - yb == 0:
        xc = xa
    else:
        xc = xa + (xb - xa) * ya / (ya - yb)
    if 0.0 <= xc <= L:
        return math.hypot(xa - xb, ya - yb)
    return min(
        float(np.linalg.norm(a - e0) + np.linalg.norm(e0 - b)),
        float(np.linalg.norm(a - e1) + np.linalg.norm(e1 - b)),
    )
