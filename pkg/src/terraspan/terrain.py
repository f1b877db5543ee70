"""Triangulated height-field terrains: parsing, validation, point location."""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

BARY_TOL = 1e-9


class TerrainError(ValueError):
    """Raised when a mesh violates a terrain invariant."""

    invariant = "terrain"

    def __init__(self, message: str):
        super().__init__(f"[{self.invariant}] {message}")


class TerrainParseError(TerrainError):
    invariant = "parse"


class NonManifoldEdgeError(TerrainError):
    invariant = "manifold-edge"


class BoundaryCycleError(TerrainError):
    invariant = "single-boundary-cycle"


class NonInjectiveProjectionError(TerrainError):
    invariant = "injective-projection"


class OutsideDomainError(ValueError):
    pass


class NonConvexDomainWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SurfacePoint:
    face: int
    bary: tuple[float, float, float]

    def __post_init__(self):
        b = tuple(float(x) for x in self.bary)
        if any(x < -BARY_TOL or x > 1 + BARY_TOL for x in b) or abs(sum(b) - 1) > BARY_TOL:
            raise ValueError(f"invalid barycentric coordinates {b}")
        object.__setattr__(self, "bary", b)


def _signed_area2(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


class Terrain:
    """A validated triangulated height field over a polygonal disk.

    ``boundary`` is the counterclockwise (in the xy-projection) cycle of
    boundary vertex indices. Construction validates every invariant and
    raises a :class:`TerrainError` subclass on the first violation.
    """

    def __init__(self, vertices, triangles):
        v = np.asarray(vertices, dtype=float)
        t = np.asarray(triangles, dtype=int)
        if v.ndim != 2 or v.shape[1] != 3 or len(v) == 0:
            raise TerrainParseError("vertices must be a non-empty (V, 3) array")
        if t.ndim != 2 or t.shape[1] != 3 or len(t) == 0:
            raise TerrainParseError("triangles must be a non-empty (F, 3) array")
        if t.min() < 0 or t.max() >= len(v):
            raise TerrainParseError("triangle references a missing vertex")
        self.vertices = v
        self.triangles = t.copy()
        self._validate()
        self.vertices.setflags(write=False)
        self.triangles.setflags(write=False)

    # --- validation ---------------------------------------------------

    def _validate(self) -> None:
        v, t = self.vertices, self.triangles
        for f, tri in enumerate(t):
            if len(set(tri.tolist())) != 3:
                raise TerrainParseError(f"triangle {f} repeats a vertex")
        xy = np.round(v[:, :2], 12)
        _, counts = np.unique(xy, axis=0, return_counts=True)
        if counts.max() > 1:
            raise NonInjectiveProjectionError("two vertices share the same (x, y)")

        edge_faces: dict[tuple[int, int], list[int]] = {}
        for f, (a, b, c) in enumerate(t.tolist()):
            for e in ((a, b), (b, c), (c, a)):
                edge_faces.setdefault(tuple(sorted(e)), []).append(f)
        for e, fs in edge_faces.items():
            if len(fs) > 2:
                raise NonManifoldEdgeError(f"edge {e} is shared by {len(fs)} triangles")

        areas = np.array([_signed_area2(v[a], v[b], v[c]) for a, b, c in t])
        if np.any(np.abs(areas) <= 1e-14):
            raise NonInjectiveProjectionError("a triangle has zero projected area")
        if np.all(areas < 0):
            self.triangles = t = self.triangles[:, [0, 2, 1]].copy()
            areas = -areas
        elif np.any(areas < 0):
            raise NonInjectiveProjectionError("projected triangles overlap (mixed orientation)")

        # directed boundary edges of ccw triangles traverse the boundary ccw
        succ: dict[int, int] = {}
        for f, (a, b, c) in enumerate(t.tolist()):
            for x, y in ((a, b), (b, c), (c, a)):
                if len(edge_faces[tuple(sorted((x, y)))]) == 1:
                    if x in succ:
                        raise BoundaryCycleError(f"vertex {x} has several outgoing boundary edges")
                    succ[x] = y
        if not succ:
            raise BoundaryCycleError("mesh has no boundary")
        start = min(succ)
        cycle = [start]
        while True:
            nxt = succ.get(cycle[-1])
            if nxt is None:
                raise BoundaryCycleError("boundary chain is not closed")
            if nxt == start:
                break
            if len(cycle) > len(succ):
                raise BoundaryCycleError("boundary walk does not return to its start")
            cycle.append(nxt)
        if len(cycle) != len(succ):
            raise BoundaryCycleError(
                f"found {len(set(succ))} boundary edges but the cycle through vertex {start} "
                f"has only {len(cycle)}"
            )
        used = np.unique(t)
        if len(used) != len(v):
            raise TerrainParseError("mesh has isolated vertices")

        poly = v[cycle, :2]
        poly_area2 = float(np.sum(poly[:, 0] * np.roll(poly[:, 1], -1) - np.roll(poly[:, 0], -1) * poly[:, 1]))
        if not np.isclose(poly_area2, areas.sum(), rtol=1e-9, atol=1e-12):
            raise NonInjectiveProjectionError("projected triangles do not tile the boundary polygon")

        n_v, n_e, n_f = len(v), len(edge_faces), len(t)
        if n_v - n_e + n_f != 1:
            raise BoundaryCycleError(f"Euler characteristic V-E+F = {n_v - n_e + n_f}, expected 1")

        self.boundary = tuple(cycle)
        self._edge_faces = {e: tuple(fs) for e, fs in edge_faces.items()}
        if not self._is_convex():
            warnings.warn("projected domain is not convex", NonConvexDomainWarning, stacklevel=3)

    def _is_convex(self) -> bool:
        p = self.vertices[list(self.boundary), :2]
        k = len(p)
        for i in range(k):
            if _signed_area2(p[i - 1], p[i], p[(i + 1) % k]) < -1e-12:
                return False
        return True

    # --- combinatorics ------------------------------------------------

    @property
    def edge_faces(self) -> dict[tuple[int, int], tuple[int, ...]]:
        return self._edge_faces

    @cached_property
    def edges(self) -> list[tuple[int, int]]:
        return sorted(self._edge_faces)

    @cached_property
    def boundary_edges(self) -> list[tuple[int, int]]:
        b = self.boundary
        return [(b[i], b[(i + 1) % len(b)]) for i in range(len(b))]

    @property
    def interior_edges(self) -> list[tuple[int, int]]:
        return [e for e in self.edges if len(self._edge_faces[e]) == 2]

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.triangles)

    @cached_property
    def diameter(self) -> float:
        xy = self.vertices[:, :2]
        return float(np.linalg.norm(xy.max(axis=0) - xy.min(axis=0)))

    def boundary_polygon(self) -> np.ndarray:
        return self.vertices[list(self.boundary), :2]

    # --- geometry -----------------------------------------------------

    def locate(self, x: float, y: float) -> SurfacePoint:
        """Face containing (x, y) with barycentric coordinates.

        Points on shared edges or vertices resolve to the lowest face index.
        """
        bary = self._bary_all(np.array([x, y], dtype=float))
        ok = np.all(bary >= -BARY_TOL, axis=1)
        hits = np.nonzero(ok)[0]
        if len(hits) == 0:
            raise OutsideDomainError(f"point ({x}, {y}) lies outside the terrain")
        f = int(hits[0])
        b = np.clip(bary[f], 0.0, 1.0)
        b = b / b.sum()
        return SurfacePoint(f, (float(b[0]), float(b[1]), float(b[2])))

    def faces_containing(self, x: float, y: float) -> list[int]:
        bary = self._bary_all(np.array([x, y], dtype=float))
        return [int(f) for f in np.nonzero(np.all(bary >= -BARY_TOL, axis=1))[0]]

    def _bary_all(self, q: np.ndarray) -> np.ndarray:
        tri = self.vertices[self.triangles][:, :, :2]
        a, b, c = tri[:, 0], tri[:, 1], tri[:, 2]
        v0, v1, v2 = b - a, c - a, q - a
        den = v0[:, 0] * v1[:, 1] - v1[:, 0] * v0[:, 1]
        l1 = (v2[:, 0] * v1[:, 1] - v1[:, 0] * v2[:, 1]) / den
        l2 = (v0[:, 0] * v2[:, 1] - v2[:, 0] * v0[:, 1]) / den
        return np.stack([1 - l1 - l2, l1, l2], axis=1)

    def position(self, sp: SurfacePoint) -> np.ndarray:
        corners = self.vertices[self.triangles[sp.face]]
        return np.asarray(sp.bary) @ corners

    def lift(self, x: float, y: float) -> np.ndarray:
        return self.position(self.locate(x, y))

    # --- serialisation ------------------------------------------------

    def to_off(self) -> str:
        lines = ["OFF", f"{len(self.vertices)} {len(self.triangles)} 0"]
        lines += [" ".join(repr(float(c)) for c in row) for row in self.vertices]
        lines += ["3 " + " ".join(str(int(i)) for i in tri) for tri in self.triangles]
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "vertices": [[float(c) for c in row] for row in self.vertices],
            "triangles": [[int(i) for i in tri] for tri in self.triangles],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Terrain":
        try:
            return cls(data["vertices"], data["triangles"])
        except (KeyError, TypeError) as exc:
            raise TerrainParseError(f"malformed terrain JSON: {exc}") from exc


def parse_off(text: str) -> Terrain:
    tokens: list[str] = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        tokens.extend(line.split())
    if not tokens or tokens[0] != "OFF":
        raise TerrainParseError("missing OFF header")
    try:
        n_v, n_f = int(tokens[1]), int(tokens[2])
        pos = 4
        verts = []
        for _ in range(n_v):
            verts.append([float(x) for x in tokens[pos : pos + 3]])
            pos += 3
        tris = []
        for _ in range(n_f):
            k = int(tokens[pos])
            if k != 3:
                raise TerrainParseError(f"face with {k} vertices; only triangles are supported")
            tris.append([int(x) for x in tokens[pos + 1 : pos + 4]])
            pos += 4
    except (IndexError, ValueError) as exc:
        if isinstance(exc, TerrainError):
            raise
        raise TerrainParseError(f"truncated or malformed OFF body: {exc}") from exc
    if any(len(row) != 3 for row in verts) or any(len(tri) != 3 for tri in tris):
        raise TerrainParseError("truncated OFF body")
    return Terrain(verts, tris)


def load_terrain(path, fmt: str | None = None) -> Terrain:
    path = Path(path)
    fmt = (fmt or path.suffix.lstrip(".")).lower()
    text = path.read_text()
    if fmt == "off":
        return parse_off(text)
    if fmt == "json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise TerrainParseError(f"invalid JSON: {exc}") from exc
        return Terrain.from_json(data)
    raise TerrainParseError(f"unknown terrain format {fmt!r}")


def grid_mesh(resolution: int, heights) -> Terrain:
    """Unit-square grid; each cell is split along its (i,j)-(i+1,j+1) diagonal."""
    k = resolution
    xs = np.linspace(0.0, 1.0, k + 1)
    verts = []
    for j in range(k + 1):
        for i in range(k + 1):
            x, y = xs[i], xs[j]
            verts.append((x, y, float(heights(x, y, i, j))))
    tris = []
    for j in range(k):
        for i in range(k):
            a = j * (k + 1) + i
            b, c, d = a + 1, a + k + 2, a + k + 1
            tris.append((a, b, c))
            tris.append((a, c, d))
    return Terrain(verts, tris)


def gen_terrain(kind: str, resolution: int, seed: int = 0) -> Terrain:
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    if kind == "flat":
        return grid_mesh(resolution, lambda x, y, i, j: 0.0)
    if kind == "ridge":
        # the crease x == y lies on grid diagonals, so the surface is exactly piecewise linear
        return grid_mesh(resolution, lambda x, y, i, j: 0.5 * (1.0 - abs(x - y)))
    if kind == "random-heights":
        rng = np.random.default_rng(seed)
        z = rng.uniform(0.0, 0.3, size=(resolution + 1, resolution + 1))
        return grid_mesh(resolution, lambda x, y, i, j: z[j, i])
    raise ValueError(f"unknown terrain kind {kind!r}")


def tent_terrain() -> Terrain:
    """Two unit squares folded at a right angle along the ridge x = 1/sqrt(2)."""
    h = 1.0 / np.sqrt(2.0)
    verts = [
        (0.0, 0.0, 0.0), (h, 0.0, h), (2 * h, 0.0, 0.0),
        (0.0, 1.0, 0.0), (h, 1.0, h), (2 * h, 1.0, 0.0),
    ]
    tris = [(0, 1, 4), (0, 4, 3), (1, 2, 5), (1, 5, 4)]
    return Terrain(verts, tris)


def hinge_terrain(apex_a, apex_b, e0=(0.0, -0.5, 0.0), e1=(0.0, 0.5, 0.0)) -> Terrain:
    """Two triangles sharing the edge e0-e1 (a 2-face unfolding fixture)."""
    return Terrain([e0, e1, apex_a, apex_b], [(0, 1, 2), (1, 0, 3)])
