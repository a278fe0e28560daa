"""Tile-energy functionals over finite windows.

Two Hamiltonians are implemented for a bounded potential ``phi``:

* configurational: the sum of ``phi`` over tiles of the pasted configuration
  (inside points plus frozen outside data) whose circumdisc meets the window;
* periodic: the sum over representative tiles (circumcenter in the window)
  of the periodic continuation of the window configuration.

Supporting machinery: insertion energy differences, the grid-certified range
radius bounding the influence region of boundary data, the boundary-defect
estimate comparing the two Hamiltonians, and crossing-tile statistics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from scipy.spatial import cKDTree

from .errors import InsufficientBoundaryDataError
from .geometry import (
    Point2,
    Rect,
    Tile,
    TorusTriangulation,
    Triangulation,
    crossing_tiles,
    delaunay,
    delaunay_torus,
    insert_cavity,
)
from .interaction import TrianglePotential

__all__ = [
    "Window",
    "Periodic",
    "Configurational",
    "lambda_rect",
    "square_neighbourhood_area",
    "h_config",
    "h_periodic",
    "h_periodic_value",
    "h_meeting_periodic",
    "delta_h_insert",
    "range_radius",
    "boundary_defect",
    "empty_config_energy_bound",
    "crossing_count",
    "tiles_meeting_count",
    "BOUNDARY_GAMMA",
]

# Universal constant of the boundary estimate |H_per - H_omega| <=
# gamma * c_phi * (S_n(omega) + S_n(zeta)).
BOUNDARY_GAMMA = 156.0


def lambda_rect(level: float) -> Rect:
    """Centred open square of side ``2 * level + 1``."""
    h = level + 0.5
    return Rect(-h, -h, h, h)


@dataclass(frozen=True)
class Window:
    """Centred square window at integer level n: side 2n+1, area (2n+1)^2."""

    n: int

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 0):
            raise ValueError(f"window level must be a nonnegative integer: {self.n}")

    @property
    def extent(self) -> Rect:
        return lambda_rect(self.n)

    @property
    def volume(self) -> float:
        s = 2 * self.n + 1
        return float(s * s)

    @property
    def period(self) -> float:
        return float(2 * self.n + 1)

    @property
    def cell_origin(self) -> tuple[float, float]:
        return (-(self.n + 0.5), -(self.n + 0.5))


@dataclass(frozen=True)
class Periodic:
    """Periodic boundary condition."""


@dataclass(frozen=True)
class Configurational:
    """Frozen outside data, known exactly on ``data_window`` only."""

    outside: tuple[Point2, ...]
    data_window: Rect

    def __post_init__(self):
        object.__setattr__(self, "outside", tuple(
            p if isinstance(p, Point2) else Point2(*p) for p in self.outside))


BoundaryCondition = Union[Periodic, Configurational]


def square_neighbourhood_area(n: int, rho: float) -> float:
    """Area of the rho-neighbourhood of the level-n square:
    ``v_n + 4 * rho * sqrt(v_n) + pi * rho**2``."""
    v = float((2 * n + 1) ** 2)
    return v + 4.0 * rho * math.sqrt(v) + math.pi * rho * rho


def _as_rect(window: Union[Window, Rect]) -> Rect:
    return window.extent if isinstance(window, Window) else window


def h_config(zeta: Iterable[Point2], bc: Configurational,
             window: Union[Window, Rect], phi: TrianglePotential) -> float:
    """Energy of ``zeta`` in the window with frozen outside data.

    Sums ``phi`` over tiles of the pasted configuration whose circumdisc
    meets the window.  Every counted tile's disc must be contained in the
    boundary data window, otherwise the tile set is not certified and
    :class:`InsufficientBoundaryDataError` is raised.
    """
    rect = _as_rect(window)
    zeta = [p if isinstance(p, Point2) else Point2(*p) for p in zeta]
    for p in zeta:
        if not rect.contains(p.x, p.y):
            raise ValueError(f"inside configuration has point outside window: {p}")
    for p in bc.outside:
        if rect.contains(p.x, p.y):
            raise ValueError(f"outside data has point inside window: {p}")
    dw = bc.data_window
    if not (dw.x0 <= rect.x0 and dw.y0 <= rect.y0
            and dw.x1 >= rect.x1 and dw.y1 >= rect.y1):
        raise InsufficientBoundaryDataError(
            f"data window {dw} does not contain the window {rect}")
    pasted = zeta + list(bc.outside)
    if len(pasted) < 3:
        return 0.0
    tri = delaunay(pasted)
    total = 0.0
    for tile in tri.tiles:
        cx, cy, r2 = tile.center.x, tile.center.y, tile.radius ** 2
        if rect.disc_meets(cx, cy, r2):
            if not dw.contains_disc(cx, cy, r2):
                raise InsufficientBoundaryDataError(
                    f"tile disc at ({cx:.3f},{cy:.3f}) r={math.sqrt(r2):.3f} "
                    f"leaves the data window")
            total += phi(tile)
    return total


def h_periodic(zeta: Iterable[Point2], n: int, phi: TrianglePotential) -> float:
    """Periodic energy: sum of ``phi`` over torus tiles with representative
    circumcenter in the level-n window.  Fewer than 3 points give 0."""
    pts = [p if isinstance(p, Point2) else Point2(*p) for p in zeta]
    if len(pts) < 3:
        return 0.0
    win = Window(n)
    tor = delaunay_torus(pts, win.period, win.cell_origin)
    return h_periodic_value(tor, phi)


def h_periodic_value(tor: TorusTriangulation, phi: TrianglePotential) -> float:
    """Periodic energy of an already-built torus triangulation."""
    return sum(phi(t) for t in tor.tiles)


def h_meeting_periodic(tor: TorusTriangulation, rect: Rect,
                       phi: TrianglePotential) -> float:
    """Sum of ``phi`` over periodic tiles whose circumdisc meets ``rect``.

    Translated copies are enumerated exactly, so this is the configurational
    Hamiltonian of the periodic continuation on an arbitrary rectangle.
    """
    total = 0.0
    for tile in tor._iter_translates(rect):
        if rect.disc_meets(tile.center.x, tile.center.y, tile.radius ** 2):
            total += phi(tile)
    return total


def delta_h_insert(t: Union[Triangulation, TorusTriangulation],
                   phi: TrianglePotential, x: Point2,
                   region: Rect | None = None,
                   data_window: Rect | None = None):
    """Insert ``x`` and return ``(delta_h, cavity_delta)``.

    The energy difference is the potential summed over created minus
    destroyed tiles; for insertion points inside the region all cavity discs
    meet it, so this equals the recomputed energy difference.  ``t`` is
    mutated in place.
    """
    _, delta = insert_cavity(t, x)
    created, destroyed = delta.created, delta.destroyed
    if region is not None:
        created = tuple(tl for tl in created if region.disc_meets(
            tl.center.x, tl.center.y, tl.radius ** 2))
        destroyed = tuple(tl for tl in destroyed if region.disc_meets(
            tl.center.x, tl.center.y, tl.radius ** 2))
    if data_window is not None:
        for tl in created + destroyed:
            if not data_window.contains_disc(tl.center.x, tl.center.y,
                                             tl.radius ** 2):
                raise InsufficientBoundaryDataError(
                    "cavity tile disc leaves the data window")
    dh = sum(phi(tl) for tl in created) - sum(phi(tl) for tl in destroyed)
    return dh, delta


def range_radius(omega: Iterable[Point2], delta: Rect,
                 grid_step: float) -> float:
    """Certified upper bound on the range radius of ``delta`` given ``omega``.

    The range radius is the smallest r such that every open r-disc meeting
    ``delta`` contains a point of ``omega`` outside ``delta``.  Disc centres
    are scanned on a grid of pitch ``grid_step`` and the reported bound is
    inflated by the grid covering radius, so it is conservative.  Returns
    ``inf`` when no finite radius certifies.
    """
    if not grid_step > 0:
        raise ValueError("grid_step must be positive")
    pts = [(p.x, p.y) if isinstance(p, Point2) else (float(p[0]), float(p[1]))
           for p in omega]
    outside = [(x, y) for (x, y) in pts if not delta.contains(x, y)]
    if not outside:
        return math.inf
    tree = cKDTree(np.asarray(outside))
    h = float(grid_step)
    inflation = h / math.sqrt(2.0) + 1e-12
    arr = np.asarray(outside)
    span = max(arr[:, 0].max() - arr[:, 0].min(),
               arr[:, 1].max() - arr[:, 1].min(),
               delta.x1 - delta.x0, delta.y1 - delta.y0)
    cap = 8.0 * (span + 1.0)
    R = h
    for _ in range(64):
        region = delta.pad(R)
        xs = np.arange(region.x0, region.x1 + h, h)
        ys = np.arange(region.y0, region.y1 + h, h)
        gx, gy = np.meshgrid(xs, ys)
        centres = np.column_stack([gx.ravel(), gy.ravel()])
        dist, _ = tree.query(centres)
        m = float(dist.max()) + inflation
        if m <= R:
            return m
        if m > cap:
            return math.inf
        R = m
    return math.inf


def _jitter_off_boundary(points: Sequence[Point2], rect: Rect) -> list[Point2]:
    # Points exactly on the window boundary (a null set) are nudged inward by
    # one ulp so the empty-trace precondition holds.
    out = []
    for p in points:
        x, y = p.x, p.y
        if x == rect.x0 or x == rect.x1:
            x = math.nextafter(x, 0.5 * (rect.x0 + rect.x1))
        if y == rect.y0 or y == rect.y1:
            y = math.nextafter(y, 0.5 * (rect.y0 + rect.y1))
        out.append(Point2(x, y, p.mark))
    return out


def _bbox(points: Sequence[Point2]) -> Rect | None:
    if not points:
        return None
    xs = [p.x for p in points]
    ys = [p.y for p in points]
    return Rect(min(xs), min(ys), max(xs), max(ys))


def crossing_count(t_or_points, rect: Rect,
                   data_window: Rect | None = None) -> int:
    """Number of tiles whose circumdisc crosses the rectangle boundary.

    With a data window given, every crossing tile is certified to have its
    disc inside it (raises :class:`InsufficientBoundaryDataError` otherwise).
    """
    t = t_or_points
    if not isinstance(t, (Triangulation, TorusTriangulation)):
        pts = [p if isinstance(p, Point2) else Point2(*p) for p in t_or_points]
        if len(pts) < 3:
            return 0
        t = delaunay(pts)
    tiles = crossing_tiles(t, rect)
    if data_window is not None:
        for tile in tiles:
            if not data_window.contains_disc(tile.center.x, tile.center.y,
                                             tile.radius ** 2):
                raise InsufficientBoundaryDataError(
                    "crossing tile disc leaves the data window")
    return len(tiles)


def tiles_meeting_count(t, rect: Rect) -> int:
    """Number of (periodic) tiles whose circumdisc meets the rectangle."""
    if isinstance(t, TorusTriangulation):
        return sum(1 for tile in t._iter_translates(rect)
                   if rect.disc_meets(tile.center.x, tile.center.y,
                                      tile.radius ** 2))
    return sum(1 for tile in t.tiles
               if rect.disc_meets(tile.center.x, tile.center.y,
                                  tile.radius ** 2))


def boundary_defect(zeta: Sequence[Point2], omega: Sequence[Point2], n: int,
                    phi: TrianglePotential,
                    data_window: Rect | None = None) -> tuple[float, float]:
    """Defect |H_periodic(zeta) - H_omega(zeta)| and its budget
    ``156 * c_phi * (S_n(omega) + S_n(zeta))``.

    Both configurations are finite samples on a data window strictly larger
    than the level-n square; points exactly on the square boundary are
    nudged inward by one ulp.
    """
    win = Window(n)
    rect = win.extent
    zeta = _jitter_off_boundary([p if isinstance(p, Point2) else Point2(*p)
                                 for p in zeta], rect)
    omega = _jitter_off_boundary([p if isinstance(p, Point2) else Point2(*p)
                                  for p in omega], rect)
    if data_window is None:
        boxes = [b for b in (_bbox(zeta), _bbox(omega)) if b is not None]
        if not boxes:
            return 0.0, 0.0
        data_window = Rect(max(b.x0 for b in boxes), max(b.y0 for b in boxes),
                           min(b.x1 for b in boxes), min(b.y1 for b in boxes))
    zeta_in = [p for p in zeta if rect.contains(p.x, p.y)]
    omega_out = [p for p in omega if not rect.contains(p.x, p.y)]
    h_per = h_periodic(zeta_in, n, phi)
    h_om = h_config(zeta_in, Configurational(tuple(omega_out), data_window),
                    win, phi)
    s_om = crossing_count(omega, rect, data_window)
    s_ze = crossing_count(zeta, rect, data_window)
    defect = abs(h_per - h_om)
    budget = BOUNDARY_GAMMA * phi.c_phi * (s_om + s_ze)
    return defect, budget


def empty_config_energy_bound(omega: Sequence[Point2], n: int,
                              phi: TrianglePotential,
                              C: float | None = None,
                              data_window: Rect | None = None):
    """Check ``|H_{n,omega}(empty)| <= C * S_n(omega)``.

    ``C`` defaults to ``156 * c_phi`` (the boundary-estimate constant applied
    with an empty inside configuration).  Returns ``(ok, lhs, rhs)``.
    """
    win = Window(n)
    rect = win.extent
    omega = _jitter_off_boundary([p if isinstance(p, Point2) else Point2(*p)
                                  for p in omega], rect)
    if data_window is None:
        box = _bbox(omega)
        if box is None:
            return True, 0.0, 0.0
        data_window = box
    omega_out = [p for p in omega if not rect.contains(p.x, p.y)]
    lhs = abs(h_config([], Configurational(tuple(omega_out), data_window),
                       win, phi))
    s_om = crossing_count(omega, rect, data_window)
    if C is None:
        C = BOUNDARY_GAMMA * phi.c_phi
    rhs = C * s_om
    return lhs <= rhs + 1e-9, lhs, rhs
