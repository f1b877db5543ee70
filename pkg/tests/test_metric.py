import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from terraspan.metric import (
    SpannerGraph,
    UnreachablePairError,
    WeightedPoint,
    all_pairs_graph_distances,
    aw_metric,
    dump_json,
    dw_distance,
    dw_matrix,
    graph_distance,
    load_json,
    point_arrays,
    points_from_json,
    points_to_json,
    spanning_ratio,
    verify_spanner,
)

coord = st.floats(-10, 10, allow_nan=False)
weight = st.floats(0, 5, allow_nan=False)


def wpoints(dim=2, min_size=2, max_size=8):
    return st.lists(
        st.builds(WeightedPoint, st.tuples(*[coord] * dim), weight), min_size=min_size, max_size=max_size
    )


def test_dw_small_example():
    pts = [WeightedPoint((0, 0), 1.0), WeightedPoint((3, 4), 0.5)]
    assert dw_distance(pts, 0, 1) == pytest.approx(6.5)
    assert dw_distance(pts, 0, 0) == 0.0


def test_coincident_points_keep_weight_by_index():
    pts = [WeightedPoint((1, 1), 0.25), WeightedPoint((1, 1), 0.25)]
    assert dw_distance(pts, 0, 1) == pytest.approx(0.5)


def test_negative_weight_rejected():
    with pytest.raises(ValueError):
        WeightedPoint((0, 0), -0.1)


def test_dimension_mismatch():
    pts = [WeightedPoint((0, 0), 0), WeightedPoint((0, 0, 0), 0)]
    with pytest.raises(ValueError):
        dw_distance(pts, 0, 1)
    with pytest.raises(ValueError):
        point_arrays(pts)


@given(wpoints())
def test_matrix_matches_scalar(pts):
    m = aw_metric(pts)
    for i in range(len(pts)):
        for j in range(len(pts)):
            expect = 0.0 if i == j else oracles.dw(pts[i].coords, pts[i].weight, pts[j].coords, pts[j].weight)
            assert m[i, j] == pytest.approx(expect, rel=1e-12, abs=1e-12)


@given(wpoints(min_size=3))
def test_dw_is_a_metric(pts):
    m = aw_metric(pts)
    n = len(pts)
    assert np.allclose(m, m.T)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                assert m[i, j] <= m[i, k] + m[k, j] + 1e-9


def test_graph_basics():
    g = SpannerGraph(4)
    assert g.add_edge(0, 1, 1.0)
    assert not g.add_edge(1, 0, 1.0)
    g.add_edge(1, 2, 2.0)
    assert g.has_edge(2, 1) and not g.has_edge(0, 2)
    assert g.num_edges == 2
    assert g.max_degree() == 2
    assert graph_distance(g, 0, 2) == pytest.approx(3.0)
    assert graph_distance(g, 0, 3) is None


def test_self_loop_rejected():
    g = SpannerGraph(2)
    with pytest.raises(ValueError):
        g.add_edge(1, 1, 0.0)


def test_json_round_trip(tmp_path):
    g = SpannerGraph(3)
    g.add_edge(2, 0, 1.5)
    g.add_edge(0, 1, 0.25)
    back = SpannerGraph.from_json(g.to_json())
    assert back.n == 3 and back.edges == g.edges
    path = tmp_path / "g.json"
    dump_json(g.to_json(), path)
    assert SpannerGraph.from_json(load_json(path)).edges == g.edges


@pytest.mark.parametrize(
    "data",
    [
        {"edges": []},
        {"n": 2, "edges": [[0, 5, 1.0]]},
        {"n": 2, "edges": [[0, 1]]},
        {"n": 2, "edges": [[0, 1, -1.0]]},
    ],
)
def test_bad_graph_json(data):
    with pytest.raises(ValueError):
        SpannerGraph.from_json(data)


def test_points_json_round_trip():
    pts = [WeightedPoint((0.1, 0.2), 0.3), WeightedPoint((1, 2), 0)]
    assert points_from_json(points_to_json(pts)) == pts


@settings(max_examples=40)
@given(st.integers(2, 9), st.data())
def test_apsp_matches_floyd_warshall(n, data):
    edges = {}
    for i in range(n):
        for j in range(i + 1, n):
            if data.draw(st.booleans()):
                edges[(i, j)] = data.draw(st.floats(0.01, 10))
    g = SpannerGraph(n)
    for (i, j), w in edges.items():
        g.add_edge(i, j, w)
    ref = oracles.floyd_warshall(n, edges)
    got = all_pairs_graph_distances(g)
    assert np.allclose(got, np.array(ref), rtol=1e-12)


def test_ratio_of_path_on_collinear_points():
    pts = [WeightedPoint((float(x),), 0.0) for x in range(5)]
    m = aw_metric(pts)
    g = SpannerGraph(5)
    for i in range(4):
        g.add_edge(i, i + 1, 1.0)
    res = spanning_ratio(g, m)
    assert res.ratio == pytest.approx(1.0)


def test_ratio_of_square_without_diagonal():
    # unit square, cycle only: opposite corners go around two sides
    pts = [WeightedPoint(c, 0.0) for c in [(0, 0), (1, 0), (1, 1), (0, 1)]]
    m = aw_metric(pts)
    g = SpannerGraph(4)
    for i in range(4):
        g.add_edge(i, (i + 1) % 4, 1.0)
    ratio, pair = spanning_ratio(g, m)
    assert ratio == pytest.approx(math.sqrt(2))
    assert pair == (0, 2)


def test_unreachable_pair():
    m = dw_matrix(np.array([[0.0], [1.0], [2.0]]), np.zeros(3))
    g = SpannerGraph(3)
    g.add_edge(0, 1, 1.0)
    with pytest.raises(UnreachablePairError) as info:
        spanning_ratio(g, m)
    assert set(info.value.pair) == {0, 2} or set(info.value.pair) == {1, 2}


def test_verify_report():
    m = dw_matrix(np.array([[0.0], [1.0], [2.0]]), np.zeros(3))
    g = SpannerGraph.complete(3, m)
    rep = verify_spanner(g, m, 1.0)
    out = rep.to_json()
    assert out["pass"] and out["ratio"] == pytest.approx(1.0) and out["edges"] == 3
    g2 = SpannerGraph(3)
    g2.add_edge(0, 2, 2.0)
    g2.add_edge(1, 2, 1.0)
    assert not verify_spanner(g2, m, 1.5).passed


def test_wrong_edge_weight_detected():
    m = dw_matrix(np.array([[0.0], [1.0]]), np.zeros(2))
    g = SpannerGraph(2)
    g.add_edge(0, 1, 0.5)
    assert g.check_weights(m) == [(0, 1)]
