"""Public geometry types and planar triangulation operations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

from ..errors import DuplicatePointError
from . import kernel as _k
from .predicates import circumcircle, orientation

__all__ = [
    "Point2",
    "Rect",
    "Tile",
    "CavityDelta",
    "Triangulation",
    "delaunay",
    "insert_cavity",
    "crossing_tiles",
    "tiles_covering_point",
]


class Point2(NamedTuple):
    """Planar point with an optional small-integer colour mark."""

    x: float
    y: float
    mark: Optional[int] = None

    def validate(self) -> "Point2":
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinates: {self}")
        if self.mark is not None and (not isinstance(self.mark, int) or self.mark < 1):
            raise ValueError(f"mark must be a positive integer: {self}")
        return self


class Rect(NamedTuple):
    """Axis-aligned rectangle [x0, x1] x [y0, y1] (open/closed per use)."""

    x0: float
    y0: float
    x1: float
    y1: float

    @property
    def area(self) -> float:
        return (self.x1 - self.x0) * (self.y1 - self.y0)

    def contains(self, x: float, y: float) -> bool:
        """Open-rectangle membership."""
        return self.x0 < x < self.x1 and self.y0 < y < self.y1

    def contains_halfopen(self, x: float, y: float) -> bool:
        return self.x0 <= x < self.x1 and self.y0 <= y < self.y1

    def dist2(self, x: float, y: float) -> float:
        """Squared distance from (x, y) to the closed rectangle."""
        dx = self.x0 - x if x < self.x0 else (x - self.x1 if x > self.x1 else 0.0)
        dy = self.y0 - y if y < self.y0 else (y - self.y1 if y > self.y1 else 0.0)
        return dx * dx + dy * dy

    def disc_meets(self, cx: float, cy: float, r2: float) -> bool:
        """Does the open disc meet the (closure of the) rectangle?"""
        return self.dist2(cx, cy) < r2

    def contains_disc(self, cx: float, cy: float, r2: float) -> bool:
        """Is the open disc contained in the closed rectangle?"""
        r = math.sqrt(r2)
        return (cx - r >= self.x0 and cx + r <= self.x1
                and cy - r >= self.y0 and cy + r <= self.y1)

    def pad(self, margin: float) -> "Rect":
        return Rect(self.x0 - margin, self.y0 - margin,
                    self.x1 + margin, self.y1 + margin)


def _tile_from_coords(va: Point2, vb: Point2, vc: Point2,
                      circ: tuple[float, float, float] | None = None) -> "Tile":
    verts = tuple(sorted((va, vb, vc), key=lambda p: (p.x, p.y)))
    a, b, c = verts
    if circ is None:
        circ = circumcircle(a.x, a.y, b.x, b.y, c.x, c.y)
    cx, cy, r2 = circ
    area = abs((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)) / 2.0
    return Tile(
        vertices=verts,
        center=Point2(cx, cy),
        radius=math.sqrt(r2),
        barycenter=Point2((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0),
        area=area,
    )


@dataclass(frozen=True)
class Tile:
    """Triangle of a triangulation with derived circumdisc data.

    ``vertices`` are sorted lexicographically (x, then y); ``center`` and
    ``radius`` describe the circumscribed disc.
    """

    vertices: tuple[Point2, Point2, Point2]
    center: Point2
    radius: float
    barycenter: Point2
    area: float

    @classmethod
    def from_points(cls, a: Point2, b: Point2, c: Point2) -> "Tile":
        return _tile_from_coords(a, b, c)

    @property
    def marks(self) -> tuple[Optional[int], Optional[int], Optional[int]]:
        return tuple(v.mark for v in self.vertices)

    def translated(self, dx: float, dy: float) -> "Tile":
        verts = tuple(Point2(v.x + dx, v.y + dy, v.mark) for v in self.vertices)
        return Tile(
            vertices=verts,
            center=Point2(self.center.x + dx, self.center.y + dy),
            radius=self.radius,
            barycenter=Point2(self.barycenter.x + dx, self.barycenter.y + dy),
            area=self.area,
        )

    def contains_point(self, x: float, y: float) -> bool:
        """Closed-triangle membership (exact orientation tests)."""
        a, b, c = self.vertices
        o1 = orientation(a.x, a.y, b.x, b.y, x, y)
        o2 = orientation(b.x, b.y, c.x, c.y, x, y)
        o3 = orientation(c.x, c.y, a.x, a.y, x, y)
        pos = (o1 >= 0 and o2 >= 0 and o3 >= 0)
        neg = (o1 <= 0 and o2 <= 0 and o3 <= 0)
        return pos or neg

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __eq__(self, other) -> bool:
        return isinstance(other, Tile) and self.vertices == other.vertices


@dataclass(frozen=True)
class CavityDelta:
    """Tiles destroyed and created by one point insertion."""

    destroyed: tuple[Tile, ...]
    created: tuple[Tile, ...]

    @property
    def region(self) -> tuple[Tile, ...]:
        """The difference region, as the destroyed tiles covering it."""
        return self.destroyed

    def region_contains(self, x: float, y: float) -> bool:
        return any(t.contains_point(x, y) for t in self.region)


class Triangulation:
    """Delaunay triangulation of a finite planar point set.

    The ``window`` is carried metadata (tiles are filtered by predicates,
    never clipped); construction always triangulates the convex hull.  One
    actor may mutate an instance at a time; queries are read-only.
    """

    def __init__(self, points: Iterable[Point2], window: Rect | None = None):
        self.window = window
        self._kern = _k.Kernel()
        self._marks: dict[int, Optional[int]] = {}
        ids = []
        for p in points:
            p = Point2(*p) if not isinstance(p, Point2) else p
            p.validate()
            vid = self._kern.add_vertex(p.x, p.y)
            self._marks[vid] = p.mark
            ids.append(vid)
        self._kern.build(ids)
        self._tile_cache: dict[tuple, Tile] = {}

    # -- views ---------------------------------------------------------

    @property
    def points(self) -> tuple[Point2, ...]:
        k = self._kern
        return tuple(Point2(k.px[i], k.py[i], self._marks.get(i))
                     for i in sorted(k.alive))

    def point(self, vid: int) -> Point2:
        k = self._kern
        return Point2(k.px[vid], k.py[vid], self._marks.get(vid))

    def _tile(self, key: tuple) -> Tile:
        t = self._tile_cache.get(key)
        if t is None:
            a, b, c = key
            t = _tile_from_coords(self.point(a), self.point(b), self.point(c),
                                  self._kern.tiles.get(key))
            self._tile_cache[key] = t
        return t

    @property
    def tiles(self) -> frozenset[Tile]:
        return frozenset(self._tile(k) for k, _ in self._kern.real_items())

    @property
    def tile_count(self) -> int:
        return self._kern.real_tile_count()

    @property
    def edge_count(self) -> int:
        return self._kern.edge_count()

    @property
    def hull_count(self) -> int:
        """Number of hull boundary edges (= hull boundary vertices)."""
        return self._kern.hull_edge_count()

    @property
    def point_count(self) -> int:
        return len(self._kern.alive)

    # -- mutation ------------------------------------------------------

    def _insert_point(self, p: Point2) -> CavityDelta:
        p.validate()
        k = self._kern
        if (p.x, p.y) in k.pindex:
            raise DuplicatePointError(f"point ({p.x}, {p.y}) already present")
        self._tile_cache.clear()
        if k.real_tile_count() == 0:
            old: set = set()
            vid = k.add_vertex(p.x, p.y)
            self._marks[vid] = p.mark
            # Degenerate base (fewer than 3 points, or collinear): rebuild.
            rebuilt = _k.Kernel()
            for i in sorted(k.alive):
                j = rebuilt.add_vertex(k.px[i], k.py[i])
                assert j == len(rebuilt.px) - 1
            remap = {j: i for j, i in enumerate(sorted(k.alive))}
            rebuilt.build(list(range(len(rebuilt.px))))
            marks = {j: self._marks.get(remap[j]) for j in range(len(rebuilt.px))}
            self._kern = rebuilt
            self._marks = marks
            created = tuple(self._tile(key) for key, _ in self._kern.real_items())
            return CavityDelta(destroyed=tuple(), created=created)
        vid = k.add_vertex(p.x, p.y)
        self._marks[vid] = p.mark
        ops: list = []
        k.insert(vid, ops)
        removed, added = _k.net_delta(ops)
        destroyed = tuple(sorted(
            (_tile_from_coords(self.point(a), self.point(b), self.point(c))
             for (a, b, c) in removed if a != _k.GHOST),
            key=lambda t: t.vertices))
        created = tuple(sorted(
            (self._tile(key) for key in added if key[0] != _k.GHOST),
            key=lambda t: t.vertices))
        return CavityDelta(destroyed=destroyed, created=created)


def delaunay(points: Iterable[Point2], window: Rect | None = None) -> Triangulation:
    """Delaunay triangulation of the point set.

    Fewer than 3 points, or an entirely collinear set, yield an empty tile
    set.  The result is a pure function of the point set: co-circular ties
    are broken by the lexicographically smallest triangulation of each
    co-circular polygon.
    """
    return Triangulation(points, window)


def insert_cavity(t, p: Point2):
    """Insert a point, returning ``(t, delta)`` with the destroyed/created tiles.

    Works on :class:`Triangulation` and on ``TorusTriangulation`` (where the
    delta is reported at the level of orbit representatives).  The input
    triangulation is mutated in place.
    """
    if not isinstance(p, Point2):
        p = Point2(*p)
    if isinstance(t, Triangulation):
        if t.window is not None and not t.window.contains(p.x, p.y):
            raise ValueError(f"insertion point {p} outside the window {t.window}")
        delta = t._insert_point(p)
        return t, delta
    delta = t._insert_orbit(p)  # TorusTriangulation
    return t, delta


def crossing_tiles(t, rect: Rect) -> set[Tile]:
    """Tiles whose circumdisc meets both ``rect`` and its complement."""
    out = set()
    for tile in _iter_tiles_near(t, rect):
        cx, cy, r2 = tile.center.x, tile.center.y, tile.radius ** 2
        if rect.disc_meets(cx, cy, r2) and not rect.contains_disc(cx, cy, r2):
            out.add(tile)
    return out


def tiles_covering_point(t, p: Point2) -> int:
    """Number of tiles whose open circumdisc contains the point."""
    if not isinstance(p, Point2):
        p = Point2(*p)
    count = 0
    for tile in _iter_tiles_near(t, None, point=p):
        dx = p.x - tile.center.x
        dy = p.y - tile.center.y
        if dx * dx + dy * dy < tile.radius ** 2:
            count += 1
    return count


def _iter_tiles_near(t, rect: Rect | None, point: Point2 | None = None):
    """All tiles (with periodic translates for torus triangulations)."""
    if isinstance(t, Triangulation):
        for key, _ in t._kern.real_items():
            yield t._tile(key)
        return
    # TorusTriangulation: enumerate translates whose disc could be relevant.
    yield from t._iter_translates(rect, point)
