import json
import subprocess
import sys

import pytest

from terraspan.cli import main
from terraspan.metric import SpannerGraph, WeightedPoint, dump_json, load_json, points_to_json


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def pts(tmp_path):
    p = tmp_path / "pts.json"
    assert run("gen", "weighted-points", "--n", 40, "--dim", 2, "--seed", 7, "-o", p) == 0
    return p


@pytest.fixture
def flat_pts(tmp_path):
    terrain = tmp_path / "flat.off"
    points = tmp_path / "tp.json"
    assert run("gen", "terrain", "--kind", "flat", "--res", 2, "--seed", 0, "-o", terrain) == 0
    assert run("gen", "points", "--n", 14, "--seed", 3, "-o", points) == 0
    return terrain, points


def test_gen_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run("gen", "weighted-points", "--n", 100, "--dim", 2, "--seed", 7, "-o", p) == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(load_json(a)["points"]) == 100


def test_gen_lowerbound_disk(tmp_path):
    p = tmp_path / "d.json"
    assert run("gen", "lowerbound-disk", "--n", 50, "--seed", 1, "-o", p) == 0
    data = load_json(p)["points"]
    assert len(data) == 50
    for q in data:
        assert q["weight"] == 1.0
        assert all(abs(c) <= 1 for c in q["coords"])


def test_gen_terrain_loads(tmp_path):
    from terraspan.terrain import load_terrain

    p = tmp_path / "t.off"
    assert run("gen", "terrain", "--kind", "flat", "--res", 4, "--seed", 0, "-o", p) == 0
    assert len(load_terrain(p).triangles) == 32


def test_gen_needs_seed(tmp_path):
    assert run("gen", "points", "--n", 5, "-o", tmp_path / "x.json") == 2


def test_gen_bad_kind(tmp_path):
    assert run("gen", "terrain", "--kind", "volcano", "--seed", 1, "-o", tmp_path / "x.off") == 2


def test_build_and_verify_aw(tmp_path, pts):
    g = tmp_path / "g.json"
    rep = tmp_path / "r.json"
    assert run("build", "aw", "-i", pts, "--eps", 0.25, "-o", g) == 0
    assert run("verify", "-i", g, "--points", pts, "--metric", "aw", "-t", 2.25, "--report", rep) == 0
    out = load_json(rep)
    assert out["pass"] and out["ratio"] <= 2.25
    assert set(out) == {"ratio", "worst_pair", "edges", "pass"}


def test_build_aw_eps_gate(tmp_path, pts):
    assert run("build", "aw", "-i", pts, "--eps", 0.9, "-o", tmp_path / "g.json") == 2


def test_verify_complete_graph_t1(tmp_path, pts):
    from terraspan.metric import aw_metric, points_from_json

    m = aw_metric(points_from_json(load_json(pts)))
    g = tmp_path / "k.json"
    dump_json(SpannerGraph.complete(len(m), m).to_json(), g)
    rep = tmp_path / "r.json"
    assert run("verify", "-i", g, "--points", pts, "-t", 1, "--report", rep) == 0
    assert load_json(rep)["ratio"] == pytest.approx(1.0)


def test_verify_deleted_bridge(tmp_path):
    pts = tmp_path / "line.json"
    dump_json(points_to_json([WeightedPoint((float(x),), 0.0) for x in range(4)]), pts)
    g = tmp_path / "path.json"
    dump_json({"n": 4, "edges": [[0, 1, 1.0], [2, 3, 1.0]]}, g)  # bridge 1-2 removed
    rep = tmp_path / "r.json"
    assert run("verify", "-i", g, "--points", pts, "-t", 2.25, "--report", rep) == 1
    assert load_json(rep)["pass"] is False


def test_verify_too_stretched(tmp_path):
    pts = tmp_path / "line.json"
    dump_json(points_to_json([WeightedPoint((float(x),), 0.0) for x in range(3)]), pts)
    g = tmp_path / "g.json"
    dump_json({"n": 3, "edges": [[0, 1, 1.0], [1, 2, 1.0]]}, g)
    assert run("verify", "-i", g, "--points", pts, "-t", 1.0) == 0
    dump_json({"n": 3, "edges": [[0, 2, 2.0], [1, 2, 1.0]]}, g)
    assert run("verify", "-i", g, "--points", pts, "-t", 1.5) == 1


@pytest.mark.parametrize("content", ["not json", '{"n": 2}', '{"n": 2, "edges": [[0, 9, 1.0]]}'])
def test_verify_malformed_graph(tmp_path, pts, content):
    g = tmp_path / "bad.json"
    g.write_text(content)
    assert run("verify", "-i", g, "--points", pts) == 2


def test_verify_size_mismatch(tmp_path, pts):
    g = tmp_path / "g.json"
    dump_json({"n": 3, "edges": []}, g)
    assert run("verify", "-i", g, "--points", pts) == 2


def test_missing_file(tmp_path):
    assert run("build", "aw", "-i", tmp_path / "nope.json") == 2


def test_terrain_build_verify(tmp_path, flat_pts):
    terrain, points = flat_pts
    g, trace, rep = tmp_path / "g.json", tmp_path / "trace.json", tmp_path / "r.json"
    code = run(
        "build", "terrain-refined", "--terrain", terrain, "--points", points,
        "--eps", 0.25, "--steiner", 3, "-o", g, "--report", trace,
    )
    assert code == 0
    tr = load_json(trace)
    for lv in tr["levels"]:
        assert 9 * lv["n_in"] <= 7 * lv["n"] and 9 * (lv["n"] - lv["n_in"]) <= 7 * lv["n"]
    code = run(
        "verify", "-i", g, "--points", points, "--metric", "terrain", "--terrain", terrain,
        "--steiner", 3, "-t", 2.25, "--report", rep,
    )
    assert code == 0 and load_json(rep)["pass"]


def test_terrain_build_bad_eps(tmp_path, flat_pts):
    terrain, points = flat_pts
    assert run("build", "terrain-basic", "--terrain", terrain, "--points", points, "--eps", 1.5) == 2


def test_terrain_bad_off(tmp_path, flat_pts):
    _, points = flat_pts
    bad = tmp_path / "bad.off"
    bad.write_text("OFF\n3 1 0\n0 0 0\n")
    assert run("separate", "--terrain", bad, "--points", points) == 2


def test_separate_and_svg(tmp_path, flat_pts):
    terrain, points = flat_pts
    sep = tmp_path / "sep.json"
    assert run("separate", "--terrain", terrain, "--points", points, "-o", sep) == 0
    data = load_json(sep)
    assert data["type"] in ("path", "triangle")
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    for out in (a, b):
        assert run("export-svg", "--terrain", terrain, "--points", points, "-i", sep, "-o", out) == 0
    assert a.read_bytes() == b.read_bytes()
    assert b"<polyline" in a.read_bytes()


def test_svg_mesh_only(tmp_path, flat_pts):
    terrain, _ = flat_pts
    out = tmp_path / "m.svg"
    assert run("svg", "--terrain", terrain, "-o", out) == 0
    text = out.read_text()
    assert "<polygon" in text and "<circle" not in text


def test_svg_nothing_to_draw(tmp_path):
    assert run("export-svg", "-o", tmp_path / "x.svg") == 2


def test_unknown_flag_exit_code():
    with pytest.raises(SystemExit) as info:
        main(["build", "aw", "--bogus"])
    assert info.value.code == 2


def test_module_entry_point(tmp_path):
    out = tmp_path / "p.json"
    proc = subprocess.run(
        [sys.executable, "-m", "terraspan", "gen", "points", "--n", "3", "--seed", "2", "-o", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert len(json.loads(out.read_text())["points"]) == 3
