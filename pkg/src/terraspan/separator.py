"""Balanced shortest-path separators on a terrain.

A separator is either a shortest path between two boundary nodes, with the
closed region to its right as the inside, or a shortest-path triangle
(three shortest paths meeting only at their corners, possibly degenerate
to a single path) with its closed region as the inside. Balanced means
``2n/9 <= |inside| <= 2n/3``.

The search sweeps a boundary node ``v`` counterclockwise and watches the
right-hand region of the tree path from a fixed ``u`` to ``v``. If the count
never enters the balanced window it must jump over more than ``4n/9``
points between two consecutive positions; the jumped region becomes a
triangle which is then shrunk by splitting it at interior input points.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .geodesic import (
    GeodesicPath,
    SteinerGraph,
    boundary_arc,
    is_shortest,
    right_region,
    side_tol,
)
from .geometry import (
    in_closed_region,
    in_polygon,
    on_polyline,
    polylines_properly_cross,
    segment_inside_region,
)
from .terrain import Terrain

log = logging.getLogger(__name__)


class SeparatorError(RuntimeError):
    pass


def lower_bound(n: int) -> int:
    """Smallest count c with c >= 2n/9."""
    return -(-2 * n // 9)


def is_balanced(count: int, n: int) -> bool:
    return 9 * count >= 2 * n and 3 * count <= 2 * n


@dataclass
class Separator:
    kind: str  # "path" or "triangle"
    sides: tuple[GeodesicPath, ...]
    corners: tuple[int, ...]
    inside: frozenset[int]
    method: str = "sweep"
    trace: list[tuple[int, int]] = field(default_factory=list)

    @property
    def degenerate(self) -> bool:
        return self.kind == "triangle" and len(self.sides) == 1

    def to_json(self) -> dict:
        return {
            "type": self.kind,
            "polylines": [[[float(c) for c in p] for p in side.positions] for side in self.sides],
            "inside": sorted(int(i) for i in self.inside),
            "method": self.method,
        }


@dataclass
class Jump:
    u: int
    v_prev: int
    v_next: int
    sigma: GeodesicPath
    sigma_next: GeodesicPath
    count_prev: int
    count_next: int


@dataclass
class Triangle:
    """Closed region bounded by sides a->b, b->c, c->a (or a single path)."""

    sides: tuple[GeodesicPath, ...]

    @property
    def corners(self) -> tuple[int, ...]:
        if len(self.sides) == 1:
            return (self.sides[0].start, self.sides[0].end)
        return tuple(s.start for s in self.sides)

    def ring(self) -> np.ndarray:
        if len(self.sides) == 1:
            return self.sides[0].xy
        parts = [self.sides[0].xy, self.sides[1].xy[1:], self.sides[2].xy[1:-1]]
        return np.vstack(parts)


# --- membership ---------------------------------------------------------------


def _point_xy(sg: SteinerGraph, S: Sequence[int]) -> np.ndarray:
    return sg.xy([sg.point_nodes[i] for i in S])


def path_inside(sg: SteinerGraph, terrain: Terrain, sigma: GeodesicPath, S: Sequence[int]) -> frozenset[int]:
    """Points of S to the right of (or on) a boundary-to-boundary path."""
    if not S:
        return frozenset()
    pts = _point_xy(sg, S)
    tol = side_tol(terrain)
    on = on_polyline(pts, sigma.xy, tol)
    ring = right_region(terrain, sigma)
    arc = boundary_arc(terrain, sigma.xy[0], sigma.xy[-1])
    inside = on | in_polygon(pts, ring) | on_polyline(pts, arc, tol)
    return frozenset(int(S[k]) for k in np.nonzero(inside)[0])


@dataclass
class Membership:
    closed: frozenset[int]
    interior: frozenset[int]
    on_side: tuple[frozenset[int], ...]


def triangle_membership(sg: SteinerGraph, terrain: Terrain, tri: Triangle, S: Sequence[int]) -> Membership:
    S = list(S)
    pts = _point_xy(sg, S) if S else np.zeros((0, 2))
    tol = side_tol(terrain)
    on_side = []
    any_on = np.zeros(len(S), dtype=bool)
    for side in tri.sides:
        on = on_polyline(pts, side.xy, tol) if S else np.zeros(0, dtype=bool)
        on_side.append(frozenset(S[k] for k in np.nonzero(on)[0]))
        any_on |= on
    if len(tri.sides) == 1:
        interior = np.zeros(len(S), dtype=bool)
    else:
        interior = in_polygon(pts, tri.ring()) & ~any_on if S else np.zeros(0, dtype=bool)
    closed = any_on | interior
    return Membership(
        frozenset(S[k] for k in np.nonzero(closed)[0]),
        frozenset(S[k] for k in np.nonzero(interior)[0]),
        tuple(on_side),
    )


# --- path and triangle validity ----------------------------------------------


def sides_disjoint(sides: Sequence[GeodesicPath], tol: float) -> bool:
    """Sides may meet only at shared endpoints."""
    for side in sides:
        if not side.is_simple():
            return False
    for i in range(len(sides)):
        for j in range(i + 1, len(sides)):
            a, b = sides[i], sides[j]
            shared = {a.start, a.end} & {b.start, b.end}
            if set(a.nodes) & set(b.nodes) - shared:
                return False
            for x, y in ((a, b), (b, a)):
                keep = [k for k, v in enumerate(x.nodes) if v not in shared]
                if keep and np.any(on_polyline(x.xy[keep], y.xy, tol)):
                    return False
            if polylines_properly_cross(a.xy, b.xy, tol):
                return False
    return True


def check_separator(sg: SteinerGraph, terrain: Terrain, S: Sequence[int], sep: Separator) -> list[str]:
    """Independent re-verification of a separator; returns a list of problems."""
    problems = []
    n = len(S)
    if sep.kind == "path":
        inside = path_inside(sg, terrain, sep.sides[0], S)
        if not (sg.is_boundary[sep.sides[0].start] and sg.is_boundary[sep.sides[0].end]):
            problems.append("path endpoints are not boundary nodes")
    else:
        inside = triangle_membership(sg, terrain, Triangle(sep.sides), S).closed
        if len(sep.sides) == 3 and not sides_disjoint(sep.sides, side_tol(terrain)):
            problems.append("triangle sides intersect away from the corners")
    if inside != sep.inside:
        problems.append("recounted inside set differs from the reported one")
    if not is_balanced(len(inside), n):
        problems.append(f"unbalanced: |inside| = {len(inside)}, n = {n}")
    for side in sep.sides:
        if not is_shortest(sg, side):
            problems.append(f"side {side.start}->{side.end} is not a shortest path")
    return problems


# --- sweep ------------------------------------------------------------------


def choose_u(sg: SteinerGraph, S: Sequence[int]) -> int:
    occupied = {sg.point_nodes[i] for i in S}
    for v in sg.boundary_order:
        if v not in occupied:
            return v
    raise SeparatorError("every boundary node carries an input point")


def sweep_path_separator(sg: SteinerGraph, terrain: Terrain, S: Sequence[int], u: int) -> Separator | Jump:
    """Sweep v counterclockwise from u; return a balanced path or the jump."""
    n = len(S)
    if sg.point_nodes and u in {sg.point_nodes[i] for i in S}:
        raise ValueError("the sweep origin must not carry an input point")
    _, pred = sg.shortest_path_tree(u)
    k0 = sg.boundary_index[u]
    order = sg.boundary_order[k0 + 1 :] + sg.boundary_order[:k0]
    prev_path: GeodesicPath | None = None
    prev_v, prev_count = u, 0
    for v in order:
        sigma = sg.tree_path(pred, u, v)
        inside = path_inside(sg, terrain, sigma, S)
        c = len(inside)
        if c < prev_count:
            log.warning("non-monotone sweep count at node %d: %d -> %d", v, prev_count, c)
        if is_balanced(c, n):
            return Separator("path", (sigma,), (u, v), inside, "sweep")
        if 9 * prev_count < 2 * n and 3 * c > 2 * n and prev_path is not None:
            return Jump(u, prev_v, v, prev_path, sigma, prev_count, c)
        prev_path, prev_v, prev_count = sigma, v, c
    raise SeparatorError("sweep ended without a balanced path or an interior jump")


def jump_triangle(sg: SteinerGraph, jump: Jump) -> Triangle:
    """Triangle enclosed by the two tree paths of a jump and the boundary step."""
    a, b = jump.sigma.nodes, jump.sigma_next.nodes
    k = 0
    while k + 1 < len(a) and k + 1 < len(b) and a[k + 1] == b[k + 1]:
        k += 1
    first = jump.sigma.subpath(k, len(a) - 1)
    step = GeodesicPath.from_nodes(sg, [jump.v_prev, jump.v_next])
    if not is_shortest(sg, step):
        raise SeparatorError("consecutive boundary nodes are not joined by a shortest arc")
    second = jump.sigma_next.subpath(k, len(b) - 1).reversed()
    if len(first) == 1 or len(second) == 1:
        raise SeparatorError("jump paths do not enclose a region")
    return Triangle((first, step, second))


# --- refinement -------------------------------------------------------------


def subpath_separator(
    sg: SteinerGraph, terrain: Terrain, side: GeodesicPath, S: Sequence[int], on: frozenset[int]
) -> Separator:
    """Prefix of ``side`` holding ceil(2n/9) of the points lying on it."""
    need = lower_bound(len(S))
    pts = sorted(on)
    xy = sg.xy([sg.point_nodes[i] for i in pts])
    # arc-length position of each on-path point, measured along the side
    seg_a, seg_b = side.xy[:-1], side.xy[1:]
    pos = []
    for q in xy:
        if len(side) == 1:
            pos.append((0.0, 0))
            continue
        ab = seg_b - seg_a
        den = np.einsum("ij,ij->i", ab, ab)
        t = np.clip(np.einsum("ij,ij->i", q - seg_a, ab) / np.where(den > 0, den, 1), 0, 1)
        d = np.linalg.norm(seg_a + t[:, None] * ab - q, axis=1)
        k = int(np.argmin(d))
        end_index = k if t[k] == 0 else k + 1
        pos.append((side.arclength[k] + t[k] * (side.arclength[k + 1] - side.arclength[k]), end_index))
    ranked = sorted(zip(pos, pts))
    if len(ranked) < need:
        raise SeparatorError("side holds fewer than 2n/9 points")
    end_index = ranked[need - 1][0][1]
    sub = side.subpath(0, end_index)
    inside = triangle_membership(sg, terrain, Triangle((sub,)), S).closed
    if not is_balanced(len(inside), len(S)):
        raise SeparatorError("subpath selection is unbalanced")
    return Separator("triangle", (sub,), (sub.start, sub.end), inside, "refine")


class _Region:
    """Nodes and arcs of the Steiner graph that lie in a closed triangle."""

    def __init__(self, sg: SteinerGraph, terrain: Terrain, tri: Triangle):
        ring = tri.ring()
        tol = side_tol(terrain)
        xy = sg.xy()
        ring_nodes = [v for side in tri.sides for v in side.nodes]
        ring_arcs = {(min(a, b), max(a, b)) for side in tri.sides for a, b in zip(side.nodes, side.nodes[1:])}
        if sg.planar:
            # nodes touch the ring only if they are ring nodes
            node_in = in_polygon(xy, ring)
        else:
            node_in = in_closed_region(xy, ring, tol)
        node_in[ring_nodes] = True
        self.interior_nodes = np.nonzero(node_in)[0]
        self.ring_nodes = set(ring_nodes)
        cand = [(i, j) for (i, j) in sg.arcs if node_in[i] and node_in[j]]
        if not cand:
            self.arcs = sg.restricted_arcs([])
            return
        arr = np.array(cand)
        mid = 0.5 * (xy[arr[:, 0]] + xy[arr[:, 1]])
        if sg.planar:
            ok = in_polygon(mid, ring) | np.array([e in ring_arcs for e in cand])
            # arcs meet the boundary only at nodes, so the midpoint decides
            allowed = [e for e, good in zip(cand, ok) if good]
        else:
            touched: set[int] = set()
            for side in tri.sides:
                for a, b in zip(side.nodes, side.nodes[1:]):
                    touched.update(sg.arc_faces(a, b))
            ok = in_closed_region(mid, ring, tol)
            allowed = []
            for e, good in zip(cand, ok):
                if set(sg.arc_faces(*e)) & touched:
                    good = segment_inside_region(xy[e[0]], xy[e[1]], ring, tol)
                if good:
                    allowed.append(e)
        self.arcs = sg.restricted_arcs(allowed)


def _two_gon(first: GeodesicPath, back: GeodesicPath) -> Triangle | None:
    """Triangle for a region bounded by two shortest paths with the same ends.

    ``first`` runs z1 -> z2 and ``back`` runs z2 -> z1; the longer one is cut
    at its middle node to provide the third corner.
    """
    if len(first) >= len(back):
        if len(first) < 3:
            return None
        m = len(first) // 2
        return Triangle((first.subpath(0, m), first.subpath(m, len(first) - 1), back))
    m = len(back) // 2
    return Triangle((first, back.subpath(0, m), back.subpath(m, len(back) - 1)))


def split_faces(sg: SteinerGraph, tri: Triangle, region: _Region, root: int) -> list[Triangle] | None:
    """Cut a triangle along good paths from ``root`` to its three corners.

    Returns the faces of (boundary + path tree), each as a shortest-path
    triangle, or None if some corner has no shortest path inside the
    triangle. Each face is bounded by the boundary stretch between two
    consecutive nodes where the tree meets the boundary, and by the tree
    path between those two nodes.
    """
    dist, pred = sg.shortest_path_tree(root, region.arcs)
    paths = {}
    for c in tri.corners:
        if not np.isfinite(dist[c]) or not math.isclose(dist[c], sg.dist(root, c), rel_tol=1e-9, abs_tol=1e-12):
            return None
        paths[c] = sg.tree_path(pred, root, c)
    tree_nodes = set()
    tree_arcs = set()
    for path in paths.values():
        tree_nodes.update(path.nodes)
        tree_arcs.update((min(x, y), max(x, y)) for x, y in zip(path.nodes, path.nodes[1:]))
    # boundary cycle as (node, side index, position on side)
    cyc: list[tuple[int, int, int]] = []
    for k, side in enumerate(tri.sides):
        cyc.extend((v, k, i) for i, v in enumerate(side.nodes[:-1]))
    touch = [i for i, (v, _, _) in enumerate(cyc) if v in tree_nodes]
    faces = []
    for t, i in enumerate(touch):
        j = touch[(t + 1) % len(touch)]
        z1, k, i1 = cyc[i]
        side = tri.sides[k]
        i2 = i1 + ((j - i) % len(cyc))
        z2 = side.nodes[i2]
        if i2 == i1 + 1 and (min(z1, z2), max(z1, z2)) in tree_arcs:
            continue  # the tree runs along this boundary arc
        along = side.subpath(i1, i2)
        up1 = sg.tree_path(pred, root, z1)
        up2 = sg.tree_path(pred, root, z2)
        h = 0
        while h + 1 < len(up1) and h + 1 < len(up2) and up1.nodes[h + 1] == up2.nodes[h + 1]:
            h += 1
        down1 = up1.subpath(h, len(up1) - 1)  # lca -> z1
        back = up2.subpath(len(up2) - 1, h)  # z2 -> lca
        if len(down1) == 1:
            face = _two_gon(along, back)
        elif len(back) == 1:
            face = _two_gon(along, down1.reversed())
        else:
            face = Triangle((down1, along, back))
        if face is not None:
            faces.append(face)
    return faces


def _root_candidates(sg: SteinerGraph, region: _Region, mem: Membership, limit: int) -> list[int]:
    """Interior input points first, then other interior nodes spread evenly."""
    roots = [sg.point_nodes[p] for p in sorted(mem.interior)]
    seen = set(roots) | region.ring_nodes
    rest = [int(v) for v in region.interior_nodes if int(v) not in seen]
    if len(rest) > limit:
        rest = [rest[k] for k in np.linspace(0, len(rest) - 1, limit).astype(int)]
    return roots + rest


def refine_triangle(
    sg: SteinerGraph,
    terrain: Terrain,
    S: Sequence[int],
    tri: Triangle,
    max_iter: int | None = None,
    root_limit: int = 200,
) -> Separator:
    """Shrink a triangle holding at least 2n/9 points until it is balanced.

    Every accepted step lowers the closed count or the interior count of
    the current triangle, so the loop terminates.
    """
    n = len(S)
    max_iter = max_iter if max_iter is not None else 2 * n + 10
    trace: list[tuple[int, int]] = []
    tol = side_tol(terrain)
    for _ in range(max_iter):
        mem = triangle_membership(sg, terrain, tri, S)
        trace.append((len(mem.closed), len(mem.interior)))
        if 9 * len(mem.closed) < 2 * n:
            raise SeparatorError("triangle lost the 2n/9 lower bound")
        if 3 * len(mem.closed) <= 2 * n:
            return Separator("triangle", tri.sides, tri.corners, mem.closed, "refine", trace)
        for side, on in zip(tri.sides, mem.on_side):
            if 9 * len(on) >= 2 * n:
                sep = subpath_separator(sg, terrain, side, S, on)
                sep.trace = trace
                return sep
        if len(tri.sides) == 1:
            raise SeparatorError("heavy degenerate triangle without a heavy side")
        region = _Region(sg, terrain, tri)
        cur = (len(mem.closed), len(mem.interior))
        nxt = None
        for root in _root_candidates(sg, region, mem, root_limit):
            faces = split_faces(sg, tri, region, root)
            if not faces:
                continue
            for face in faces:
                if len(face.sides) == 3 and not sides_disjoint(face.sides, tol):
                    continue
                m = triangle_membership(sg, terrain, face, S)
                c = len(m.closed)
                if is_balanced(c, n):
                    trace.append((c, len(m.interior)))
                    return Separator("triangle", face.sides, face.corners, m.closed, "refine", trace)
                if 3 * c > 2 * n and (c, len(m.interior)) != cur and c <= cur[0] and len(m.interior) <= cur[1]:
                    nxt = face
                    break
            if nxt is not None:
                break
        if nxt is None:
            raise SeparatorError("no root splits the triangle into a smaller heavy or balanced face")
        tri = nxt
    raise SeparatorError("refinement iteration cap exceeded")


# --- driver -----------------------------------------------------------------


def exhaustive_separator(sg: SteinerGraph, terrain: Terrain, S: Sequence[int]) -> Separator:
    """Brute-force search over boundary paths and point-cornered triangles."""
    n = len(S)
    occupied = {sg.point_nodes[i] for i in S}
    trees = {}
    for u in sg.boundary_order:
        trees[u] = sg.shortest_path_tree(u)[1]
        if u in occupied:
            continue
        for v in sg.boundary_order:
            if v == u:
                continue
            sigma = sg.tree_path(trees[u], u, v)
            inside = path_inside(sg, terrain, sigma, S)
            if is_balanced(len(inside), n):
                return Separator("path", (sigma,), (u, v), inside, "fallback")
    tol = side_tol(terrain)
    bnodes = sg.boundary_order
    for p in sorted(S):
        pn = sg.point_nodes[p]
        ptree = sg.shortest_path_tree(pn)[1]
        for i, b1 in enumerate(bnodes):
            for b2 in bnodes[i + 1 :]:
                sides = (
                    sg.tree_path(trees[b1], b1, b2),
                    sg.tree_path(trees[b2], b2, pn),
                    sg.tree_path(ptree, pn, b1),
                )
                tri = Triangle(sides)
                mem = triangle_membership(sg, terrain, tri, S)
                if is_balanced(len(mem.closed), n) and sides_disjoint(sides, tol):
                    return Separator("triangle", sides, tri.corners, mem.closed, "fallback")
    raise SeparatorError("exhaustive search found no balanced separator")


def find_balanced_separator(sg: SteinerGraph, terrain: Terrain, S: Sequence[int]) -> Separator:
    """Balanced separator for the point indices ``S`` (needs ``len(S) >= 5``)."""
    S = sorted(int(i) for i in S)
    if len(S) < 5:
        raise ValueError("balanced separators need at least 5 points")
    try:
        u = choose_u(sg, S)
        res = sweep_path_separator(sg, terrain, S, u)
        if isinstance(res, Separator):
            return res
        return refine_triangle(sg, terrain, S, jump_triangle(sg, res))
    except SeparatorError as exc:
        log.warning("separator pipeline failed (%s); falling back to exhaustive search", exc)
    return exhaustive_separator(sg, terrain, S)
