"""Robust planar and toroidal Delaunay triangulations with cavity deltas."""

from .planar import (
    CavityDelta,
    Point2,
    Rect,
    Tile,
    Triangulation,
    crossing_tiles,
    delaunay,
    insert_cavity,
    tiles_covering_point,
)
from .predicates import circumcircle, circumcircle_exact, in_circle, orientation
from .snapshots import Snapshot, read_snapshot, write_snapshot
from .torus import TorusTriangulation, delaunay_torus

__all__ = [
    "CavityDelta",
    "Point2",
    "Rect",
    "Tile",
    "Triangulation",
    "TorusTriangulation",
    "Snapshot",
    "circumcircle",
    "circumcircle_exact",
    "crossing_tiles",
    "delaunay",
    "delaunay_torus",
    "in_circle",
    "insert_cavity",
    "orientation",
    "read_snapshot",
    "tiles_covering_point",
    "write_snapshot",
]
