import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from terraspan.terrain import (
    BoundaryCycleError,
    NonConvexDomainWarning,
    NonInjectiveProjectionError,
    NonManifoldEdgeError,
    OutsideDomainError,
    Terrain,
    TerrainParseError,
    gen_terrain,
    grid_mesh,
    hinge_terrain,
    load_terrain,
    parse_off,
    tent_terrain,
)

SQUARE_OFF = """OFF
# unit square split along a diagonal
4 2 0
0 0 0
1 0 0
1 1 1
0 1 0
3 0 1 2
3 0 2 3
"""


def test_parse_off():
    t = parse_off(SQUARE_OFF)
    assert len(t.vertices) == 4 and len(t.triangles) == 2
    assert t.euler_characteristic() == 1
    assert sorted(t.boundary) == [0, 1, 2, 3]
    assert t.interior_edges == [(0, 2)]


def test_off_round_trip():
    t = gen_terrain("random-heights", 3, seed=4)
    back = parse_off(t.to_off())
    assert np.array_equal(back.vertices, t.vertices)
    assert np.array_equal(back.triangles, t.triangles)


def test_json_round_trip(tmp_path):
    t = gen_terrain("ridge", 2)
    p = tmp_path / "t.json"
    import json

    p.write_text(json.dumps(t.to_json()))
    back = load_terrain(p)
    assert np.array_equal(back.vertices, t.vertices)


@pytest.mark.parametrize(
    "text",
    [
        "",
        "PLY\n",
        "OFF\n4 2 0\n0 0 0\n1 0 0\n",
        "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n4 0 1 2 0\n",
        "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n",
        "OFF\n3 1 0\n0 0 0\n1 0 x\n0 1 0\n3 0 1 2\n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(TerrainParseError):
        parse_off(text)


def test_unknown_format(tmp_path):
    p = tmp_path / "t.stl"
    p.write_text("solid")
    with pytest.raises(TerrainParseError):
        load_terrain(p)


def test_non_manifold_edge():
    verts = [(0, 0, 0), (1, 0, 0), (0.5, 1, 0), (0.5, -1, 0), (0.5, 2, 0)]
    with pytest.raises(NonManifoldEdgeError):
        Terrain(verts, [(0, 1, 2), (1, 0, 3), (0, 1, 4)])


def test_bowtie_boundary():
    verts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (-1, 0, 0), (0, -1, 0)]
    with pytest.raises(BoundaryCycleError):
        Terrain(verts, [(0, 1, 2), (0, 3, 4)])


def test_annulus_rejected():
    grid = grid_mesh(3, lambda x, y, i, j: 0.0)
    keep = [tuple(tri) for f, tri in enumerate(grid.triangles.tolist()) if f not in (8, 9)]
    with pytest.raises(BoundaryCycleError):
        Terrain(grid.vertices.copy(), keep)


def test_duplicate_xy():
    verts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    with pytest.raises(NonInjectiveProjectionError):
        Terrain(verts, [(0, 1, 2), (3, 1, 2)])


def test_mixed_orientation():
    verts = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)]
    with pytest.raises(NonInjectiveProjectionError):
        Terrain(verts, [(0, 1, 2), (0, 3, 2)])


def test_degenerate_triangle():
    verts = [(0, 0, 0), (1, 0, 0), (2, 0, 0)]
    with pytest.raises(NonInjectiveProjectionError):
        Terrain(verts, [(0, 1, 2)])


def test_clockwise_input_is_reoriented():
    t = Terrain([(0, 0, 0), (1, 0, 0), (0, 1, 0)], [(0, 2, 1)])
    poly = t.boundary_polygon()
    area2 = np.sum(poly[:, 0] * np.roll(poly[:, 1], -1) - np.roll(poly[:, 0], -1) * poly[:, 1])
    assert area2 > 0


def test_non_convex_warns():
    verts = [(0, 0, 0), (2, 0, 0), (2, 2, 0), (1, 0.5, 0), (0, 2, 0)]
    with pytest.warns(NonConvexDomainWarning):
        Terrain(verts, [(0, 1, 3), (1, 2, 3), (0, 3, 4)])


def test_locate_and_lift():
    t = gen_terrain("ridge", 4)
    z = t.lift(0.3, 0.1)[2]
    assert z == pytest.approx(0.5 * (1 - 0.2))
    with pytest.raises(OutsideDomainError):
        t.locate(1.5, 0.5)


def test_shared_edge_resolves_to_lowest_face():
    t = parse_off(SQUARE_OFF)
    assert t.faces_containing(0.5, 0.5) == [0, 1]
    assert t.locate(0.5, 0.5).face == 0


@given(st.floats(0, 1), st.floats(0, 1))
def test_ridge_height_function(x, y):
    t = gen_terrain("ridge", 4)
    assert t.lift(x, y)[2] == pytest.approx(0.5 * (1 - abs(x - y)), abs=1e-9)


@pytest.mark.parametrize("kind", ["flat", "ridge", "random-heights"])
@pytest.mark.parametrize("res", [1, 3, 6])
def test_generated_invariants(kind, res):
    t = gen_terrain(kind, res, seed=1)
    assert len(t.vertices) == (res + 1) ** 2
    assert len(t.triangles) == 2 * res * res
    assert t.euler_characteristic() == 1
    assert len(t.boundary) == 4 * res
    assert t.diameter == pytest.approx(math.sqrt(2))


def test_random_heights_seeded():
    a = gen_terrain("random-heights", 4, seed=3)
    b = gen_terrain("random-heights", 4, seed=3)
    c = gen_terrain("random-heights", 4, seed=4)
    assert np.array_equal(a.vertices, b.vertices)
    assert not np.array_equal(a.vertices, c.vertices)


def test_bad_generator_args():
    with pytest.raises(ValueError):
        gen_terrain("volcano", 3)
    with pytest.raises(ValueError):
        gen_terrain("flat", 0)


def test_fixtures():
    tent = tent_terrain()
    assert len(tent.triangles) == 4
    assert tent.lift(1 / math.sqrt(2), 0.5)[2] == pytest.approx(1 / math.sqrt(2))
    hinge = hinge_terrain((-1.0, 0.0, 0.5), (1.0, 0.0, -0.2))
    assert hinge.interior_edges == [(0, 1)]
