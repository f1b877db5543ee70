"""Additively weighted spanners and geodesic spanners on polyhedral terrains."""

from .aw import build_aw_spanner, build_backbone, cluster_points, construct_aw_spanner
from .geodesic import GeodesicPath, SteinerGraph, build_projection_set, classify_side, geodesic_distance
from .metric import SpannerGraph, WeightedPoint, aw_metric, dw_distance, spanning_ratio, verify_spanner
from .separator import Separator, find_balanced_separator
from .spanner import build_terrain_spanner, process_side, spanner_stats
from .terrain import Terrain, gen_terrain, load_terrain

__all__ = [
    "GeodesicPath",
    "Separator",
    "SpannerGraph",
    "SteinerGraph",
    "Terrain",
    "WeightedPoint",
    "aw_metric",
    "build_aw_spanner",
    "build_backbone",
    "build_projection_set",
    "build_terrain_spanner",
    "classify_side",
    "cluster_points",
    "construct_aw_spanner",
    "dw_distance",
    "find_balanced_separator",
    "gen_terrain",
    "geodesic_distance",
    "load_terrain",
    "process_side",
    "spanner_stats",
    "spanning_ratio",
    "verify_spanner",
]
