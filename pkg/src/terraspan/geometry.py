"""Planar predicates on xy-projections (vectorised with numpy)."""

from __future__ import annotations

import numpy as np


def point_segment_distance(pts: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distance from each point (P, 2) to each segment a[k]-b[k]; shape (P, K)."""
    pts = np.atleast_2d(pts)[:, None, :]
    a = np.atleast_2d(a)[None, :, :]
    b = np.atleast_2d(b)[None, :, :]
    ab = b - a
    den = np.einsum("ijk,ijk->ij", ab, ab)
    t = np.einsum("ijk,ijk->ij", pts - a, ab) / np.where(den > 0, den, 1.0)
    t = np.clip(t, 0.0, 1.0)
    foot = a + t[..., None] * ab
    return np.linalg.norm(pts - foot, axis=2)


def _near_box(pts: np.ndarray, poly: np.ndarray, pad: float) -> np.ndarray:
    lo = poly.min(axis=0) - pad
    hi = poly.max(axis=0) + pad
    return np.all((pts >= lo) & (pts <= hi), axis=1)


def on_polyline(pts: np.ndarray, poly: np.ndarray, tol: float) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    poly = np.atleast_2d(np.asarray(poly, dtype=float))
    if len(poly) == 1:
        return np.linalg.norm(pts - poly[0], axis=1) <= tol
    out = np.zeros(len(pts), dtype=bool)
    near = np.nonzero(_near_box(pts, poly, tol))[0]
    for lo in range(0, len(near), 2048):
        idx = near[lo : lo + 2048]
        d = point_segment_distance(pts[idx], poly[:-1], poly[1:])
        out[idx] = d.min(axis=1) <= tol
    return out


def in_polygon(pts: np.ndarray, ring: np.ndarray) -> np.ndarray:
    """Even-odd interior test; the ring is implicitly closed.

    Results for points lying on the ring itself are unspecified; callers
    combine this with :func:`on_polyline`.
    """
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    ring = np.asarray(ring, dtype=float)
    out = np.zeros(len(pts), dtype=bool)
    if len(ring) < 3:
        return out
    near = np.nonzero(_near_box(pts, ring, 0.0))[0]
    for lo in range(0, len(near), 2048):
        idx = near[lo : lo + 2048]
        out[idx] = _even_odd(pts[idx], ring)
    return out


def _even_odd(pts: np.ndarray, ring: np.ndarray) -> np.ndarray:
    x0, y0 = ring[:, 0], ring[:, 1]
    x1, y1 = np.roll(x0, -1), np.roll(y0, -1)
    px, py = pts[:, 0:1], pts[:, 1:2]
    straddle = (y0 > py) != (y1 > py)
    with np.errstate(divide="ignore", invalid="ignore"):
        xcross = x0 + (py - y0) * (x1 - x0) / (y1 - y0)
    hits = straddle & (px < xcross)
    return (np.count_nonzero(hits, axis=1) % 2) == 1


def closed_ring(ring: np.ndarray) -> np.ndarray:
    ring = np.asarray(ring, dtype=float)
    return np.vstack([ring, ring[:1]])


def in_closed_region(pts: np.ndarray, ring: np.ndarray, tol: float) -> np.ndarray:
    return in_polygon(pts, ring) | on_polyline(pts, closed_ring(ring), tol)


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def segment_hits(p: np.ndarray, q: np.ndarray, a: np.ndarray, b: np.ndarray, tol: float) -> np.ndarray:
    """Parameters along p->q where it meets any of the segments a[k]-b[k].

    Includes touching points and the ends of collinear overlaps.
    """
    r = q - p
    s = b - a
    rxs = _cross(r[0], r[1], s[:, 0], s[:, 1])
    qp = a - p
    out = []
    rr = float(r @ r)
    if rr == 0:
        return np.array([])
    par = np.abs(rxs) <= tol * (np.linalg.norm(s, axis=1) * np.sqrt(rr) + 1e-300)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = _cross(qp[:, 0], qp[:, 1], s[:, 0], s[:, 1]) / rxs
        u = _cross(qp[:, 0], qp[:, 1], r[0], r[1]) / rxs
    ok = (~par) & (t >= -tol) & (t <= 1 + tol) & (u >= -tol) & (u <= 1 + tol)
    out.extend(np.clip(t[ok], 0.0, 1.0).tolist())
    if np.any(par):
        # collinear pieces: project their endpoints that lie on p->q
        for k in np.nonzero(par)[0]:
            for e in (a[k], b[k]):
                te = float((e - p) @ r) / rr
                foot = p + te * r
                if -tol <= te <= 1 + tol and np.linalg.norm(foot - e) <= tol * (1 + np.sqrt(rr)):
                    out.append(min(max(te, 0.0), 1.0))
    return np.array(out)


def segment_inside_region(p: np.ndarray, q: np.ndarray, ring: np.ndarray, tol: float) -> bool:
    """True if the whole segment p-q lies in the closed region bounded by ring."""
    cr = closed_ring(ring)
    ts = segment_hits(p, q, cr[:-1], cr[1:], tol)
    ts = np.unique(np.concatenate([[0.0, 1.0], ts]))
    mids = 0.5 * (ts[:-1] + ts[1:])
    if len(mids) == 0:
        mids = np.array([0.5])
    pts = p[None, :] + mids[:, None] * (q - p)[None, :]
    return bool(np.all(in_closed_region(pts, ring, tol)))


def polylines_properly_cross(p1: np.ndarray, p2: np.ndarray, tol: float) -> bool:
    """True if some segment of p1 crosses some segment of p2 at interior points of both."""
    if len(p1) < 2 or len(p2) < 2:
        return False
    a, b = p1[:-1], p1[1:]
    c, d = p2[:-1], p2[1:]
    r = (b - a)[:, None, :]
    s = (d - c)[None, :, :]
    qp = c[None, :, :] - a[:, None, :]
    rxs = _cross(r[..., 0], r[..., 1], s[..., 0], s[..., 1])
    with np.errstate(divide="ignore", invalid="ignore"):
        t = _cross(qp[..., 0], qp[..., 1], s[..., 0], s[..., 1]) / rxs
        u = _cross(qp[..., 0], qp[..., 1], r[..., 0], r[..., 1]) / rxs
    eps = 1e-9
    hit = (np.abs(rxs) > tol) & (t > eps) & (t < 1 - eps) & (u > eps) & (u < 1 - eps)
    return bool(np.any(hit))
