import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from terraspan.geometry import (
    in_closed_region,
    in_polygon,
    on_polyline,
    point_segment_distance,
    polylines_properly_cross,
    segment_hits,
    segment_inside_region,
)

SQUARE = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)


def test_point_segment_distance():
    d = point_segment_distance(np.array([[0.5, 1.0], [2.0, 0.0], [-1.0, 0.0]]), np.array([[0.0, 0.0]]), np.array([[1.0, 0.0]]))
    assert d[:, 0] == pytest.approx([1.0, 1.0, 1.0])


def test_on_polyline():
    poly = np.array([[0, 0], [1, 0], [1, 1]], dtype=float)
    got = on_polyline(np.array([[0.5, 0], [1, 0.5], [0.5, 0.5], [1, 1 + 1e-12]]), poly, 1e-9)
    assert got.tolist() == [True, True, False, True]


@given(st.floats(0.001, 0.999), st.floats(0.001, 0.999))
def test_in_polygon_square(x, y):
    assert in_polygon(np.array([[x, y]]), SQUARE)[0]
    assert not in_polygon(np.array([[x + 1.5, y]]), SQUARE)[0]


def test_in_polygon_non_convex():
    ring = np.array([[0, 0], [2, 0], [2, 2], [1, 0.5], [0, 2]], dtype=float)
    got = in_polygon(np.array([[1, 0.25], [1, 1.5], [0.3, 1.2]]), ring)
    assert got.tolist() == [True, False, True]


def test_closed_region_includes_border():
    assert in_closed_region(np.array([[1.0, 0.5]]), SQUARE, 1e-9)[0]


def test_segment_hits():
    a = np.array([[0.5, -1.0], [0.0, 0.0]])
    b = np.array([[0.5, 1.0], [1.0, 0.0]])
    ts = sorted(segment_hits(np.array([0.0, 0.0]), np.array([1.0, 0.0]), a, b, 1e-12).tolist())
    # perpendicular crossing at 0.5 plus the collinear piece's two ends
    assert ts == pytest.approx([0.0, 0.5, 1.0])


def test_segment_inside_region():
    assert segment_inside_region(np.array([0.1, 0.1]), np.array([0.9, 0.9]), SQUARE, 1e-9)
    assert not segment_inside_region(np.array([0.5, 0.5]), np.array([1.5, 0.5]), SQUARE, 1e-9)
    ring = np.array([[0, 0], [2, 0], [2, 2], [1, 0.5], [0, 2]], dtype=float)
    assert not segment_inside_region(np.array([0.2, 1.5]), np.array([1.8, 1.5]), ring, 1e-9)


def test_proper_crossing():
    p1 = np.array([[0, 0], [1, 1]], dtype=float)
    p2 = np.array([[0, 1], [1, 0]], dtype=float)
    p3 = np.array([[1, 1], [2, 0]], dtype=float)
    assert polylines_properly_cross(p1, p2, 1e-12)
    assert not polylines_properly_cross(p1, p3, 1e-12)  # shared endpoint only
