"""delgibbs: Gibbs point processes with Delaunay tile interactions.

Simulation and verification toolkit for planar Gibbs point processes whose
energy is a bounded potential on the tiles of the Delaunay triangulation:
robust triangulations with cavity insertion, tile Hamiltonians with periodic
or configurational boundary, birth-death-move Monte Carlo, and estimators
for tile statistics, pressure and the free-energy variational inequality.
"""

__version__ = "0.1.0"

from .geometry import (
    CavityDelta,
    Point2,
    Rect,
    Tile,
    TorusTriangulation,
    Triangulation,
    crossing_tiles,
    delaunay,
    delaunay_torus,
    insert_cavity,
    tiles_covering_point,
)

__all__ = [
    "CavityDelta",
    "Point2",
    "Rect",
    "Tile",
    "TorusTriangulation",
    "Triangulation",
    "crossing_tiles",
    "delaunay",
    "delaunay_torus",
    "insert_cavity",
    "tiles_covering_point",
    "__version__",
]
