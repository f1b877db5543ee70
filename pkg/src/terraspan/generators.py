"""Seeded fixture generators.

Each generator draws from a single ``numpy.random.default_rng(seed)``;
``seed`` may be an int or a sequence of ints.
"""

from __future__ import annotations

import numpy as np

from .metric import WeightedPoint


def weighted_points(n: int, dim: int, seed, wmax: float = 0.5) -> list[WeightedPoint]:
    """Uniform coordinates in [0,1]^dim with weights uniform in [0, wmax]."""
    if n < 0 or dim < 1:
        raise ValueError("need n >= 0 and dim >= 1")
    rng = np.random.default_rng(seed)
    coords = rng.random((n, dim))
    weights = rng.uniform(0.0, wmax, n)
    return [WeightedPoint(tuple(float(c) for c in row), float(w)) for row, w in zip(coords, weights)]


def plane_points(n: int, seed, margin: float = 0.01) -> list[WeightedPoint]:
    """Points in the unit square (kept ``margin`` away from its boundary), weight 0."""
    if n < 0:
        raise ValueError("need n >= 0")
    rng = np.random.default_rng(seed)
    xy = margin + (1.0 - 2.0 * margin) * rng.random((n, 2))
    return [WeightedPoint((float(x), float(y)), 0.0) for x, y in xy]


def lowerbound_disk(n: int, seed) -> list[WeightedPoint]:
    """Uniform points inside the unit disk, each of weight 1."""
    if n < 0:
        raise ValueError("need n >= 0")
    rng = np.random.default_rng(seed)
    r = np.sqrt(rng.random(n))
    t = rng.uniform(0.0, 2.0 * np.pi, n)
    return [WeightedPoint((float(a * np.cos(b)), float(a * np.sin(b))), 1.0) for a, b in zip(r, t)]


def xy_of(points) -> list[tuple[float, float]]:
    return [(float(p.coords[0]), float(p.coords[1])) for p in points]
