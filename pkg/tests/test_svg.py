import hashlib

import numpy as np

from terraspan.geodesic import SteinerGraph
from terraspan.separator import sweep_path_separator
from terraspan.svg import render_svg
from terraspan.terrain import gen_terrain

# sha256 of the drawing below, frozen after inspecting it by eye
GOLDEN = "6446c20116ebf0579004fba793e2eeeb8d89bf0b805d54836fd4710bdddf5e1c"


def _row_fixture():
    t = gen_terrain("flat", 2)
    pts = [(0.08 + 0.0763 * k, 0.37) for k in range(12)]
    sg = SteinerGraph(t, 3, pts)
    sep = sweep_path_separator(sg, t, list(range(12)), 3)
    return t, sep, np.array(pts)


def test_mesh_only():
    svg = render_svg(gen_terrain("flat", 3))
    assert svg.count("<polygon") == 18
    assert "<polyline" not in svg and "<circle" not in svg and "<line" not in svg
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")


def test_path_separator_golden():
    t, sep, pts = _row_fixture()
    svg = render_svg(t, [s.xy for s in sep.sides], pts, (), sorted(sep.inside))
    assert svg.count("<polyline") == 1
    assert svg.count('fill="#ff9900"') == len(sep.inside)
    assert svg.count("<circle") == 12
    assert hashlib.sha256(svg.encode()).hexdigest() == GOLDEN


def test_byte_identical():
    t, sep, pts = _row_fixture()
    a = render_svg(t, [s.xy for s in sep.sides], pts, [(0, 1), (3, 2)], [1])
    b = render_svg(t, [s.xy for s in sep.sides], pts.copy(), [(2, 3), (1, 0)], [1])
    assert a == b
    assert a.count("<line") == 2


def test_empty_drawing():
    svg = render_svg()
    assert svg.count("<rect") == 1
