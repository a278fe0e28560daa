"""Delaunay triangulation on a flat square torus.

The periodic triangulation is realised through a 3x3 block of translated
copies of the cell configuration.  Any non-empty periodic configuration
contains a translate of the full period lattice, so every circumdisc of the
periodic triangulation has diameter at most sqrt(2) * L; tiles whose
circumcenter lies in the half-open cell are therefore determined exactly by
the 3x3 block, and those tiles are kept as the orbit representatives.

Mutations (orbit insertion/removal) are transactional so a rejected
Monte-Carlo proposal can be rolled back cheaply.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from ..errors import DegeneratePeriodicInputError, DuplicatePointError
from . import kernel as _k
from .planar import CavityDelta, Point2, Rect, Tile, _tile_from_coords
from .predicates import circumcircle_exact

__all__ = ["TorusTriangulation", "delaunay_torus"]

# Copy shifts; the home copy comes first.
SHIFTS9 = ((0, 0), (1, 0), (-1, 0), (0, 1), (0, -1),
           (1, 1), (1, -1), (-1, 1), (-1, -1))

_BOUNDARY_TOL = 1e-9


@dataclass
class TorusTxn:
    """Reversible record of one orbit insertion or removal."""

    kind: str                      # "insert" | "remove" | "recolor"
    oid: int
    delta: CavityDelta
    vids: tuple[int, ...] = ()
    ops: list = field(default_factory=list)
    reps_added: tuple = ()
    reps_removed: tuple = ()
    rebuilt: tuple | None = None   # saved (kern, v2o, o2v, reps) for rebuild path
    old_mark: Optional[int] = None


class TorusTriangulation:
    """Periodic Delaunay triangulation of points on a flat torus.

    Points live in the half-open cell ``[ox, ox+L) x [oy, oy+L)``; exactly
    one representative tile per orbit is kept (circumcenter in the cell), so
    the representative count is ``2 * point_count`` in general position.
    """

    def __init__(self, points: Iterable[Point2], period: float,
                 origin: tuple[float, float] = (0.0, 0.0)):
        if not (period > 0 and math.isfinite(period)):
            raise ValueError(f"period must be positive and finite: {period}")
        self.period = float(period)
        self.origin = (float(origin[0]), float(origin[1]))
        self._ox: list[float] = []
        self._oy: list[float] = []
        self._omark: list[Optional[int]] = []
        self._alive: set[int] = set()
        self._oindex: dict[tuple[float, float], int] = {}
        for p in points:
            p = Point2(*p) if not isinstance(p, Point2) else p
            self._register_orbit(p)
        if len(self._alive) < 3:
            raise DegeneratePeriodicInputError(
                f"torus triangulation needs >= 3 points, got {len(self._alive)}")
        self._build()
        self._check_invariants()

    # ------------------------------------------------------------------

    def _register_orbit(self, p: Point2) -> int:
        p.validate()
        ox, oy = self.origin
        L = self.period
        if not (ox <= p.x < ox + L and oy <= p.y < oy + L):
            raise ValueError(f"point {p} outside the torus cell")
        if (p.x, p.y) in self._oindex:
            raise DuplicatePointError(f"orbit ({p.x}, {p.y}) already present")
        oid = len(self._ox)
        self._ox.append(p.x)
        self._oy.append(p.y)
        self._omark.append(p.mark)
        self._alive.add(oid)
        self._oindex[(p.x, p.y)] = oid
        return oid

    def _unregister_orbit(self, oid: int) -> None:
        self._alive.discard(oid)
        del self._oindex[(self._ox[oid], self._oy[oid])]

    def _build(self) -> None:
        kern = _k.Kernel()
        v2o: dict[int, int] = {}
        o2v: dict[int, tuple[int, ...]] = {}
        L = self.period
        for oid in sorted(self._alive, key=lambda o: (self._ox[o], self._oy[o])):
            x, y = self._ox[oid], self._oy[oid]
            vids = []
            for (sx, sy) in SHIFTS9:
                vid = kern.add_vertex(x + sx * L, y + sy * L)
                v2o[vid] = oid
                vids.append(vid)
            o2v[oid] = tuple(vids)
        kern.build(list(range(len(kern.px))))
        self._kern = kern
        self._v2o = v2o
        self._o2v = o2v
        self._reps = {key for key, val in kern.real_items()
                      if self._cell_shift(kern, key, val) == (0, 0)}
        self._tile_cache: dict[tuple, Tile] = {}

    def _check_invariants(self) -> None:
        n = len(self._alive)
        limit = (math.sqrt(2.0) * self.period) * (1.0 + 1e-9)
        for key in self._reps:
            val = self._kern.tiles[key]
            if 2.0 * math.sqrt(val[2]) > limit:
                raise DegeneratePeriodicInputError(
                    "circumdiameter exceeds sqrt(2) * period")
        if len(self._reps) != 2 * n:
            raise DegeneratePeriodicInputError(
                f"expected {2 * n} representative tiles, found {len(self._reps)}")

    def _cell_shift(self, kern: _k.Kernel, key, val) -> tuple[int, int]:
        """Lattice shift putting the tile's circumcenter into the cell."""
        ox, oy = self.origin
        L = self.period
        cx, cy, _ = val
        fx = (cx - ox) / L
        fy = (cy - oy) / L
        kx = math.floor(fx)
        ky = math.floor(fy)
        if (min(fx - kx, kx + 1 - fx) < _BOUNDARY_TOL
                or min(fy - ky, ky + 1 - fy) < _BOUNDARY_TOL):
            a, b, c = key
            ecx, ecy, _ = circumcircle_exact(
                kern.px[a], kern.py[a], kern.px[b], kern.py[b],
                kern.px[c], kern.py[c])
            kx = math.floor((ecx - Fraction(ox)) / Fraction(L))
            ky = math.floor((ecy - Fraction(oy)) / Fraction(L))
        return kx, ky

    # ------------------------------------------------------------------
    # views

    @property
    def point_count(self) -> int:
        return len(self._alive)

    @property
    def points(self) -> tuple[Point2, ...]:
        out = [Point2(self._ox[o], self._oy[o], self._omark[o]) for o in self._alive]
        return tuple(sorted(out, key=lambda p: (p.x, p.y)))

    def orbit_ids(self) -> list[int]:
        return sorted(self._alive)

    def orbit_point(self, oid: int) -> Point2:
        return Point2(self._ox[oid], self._oy[oid], self._omark[oid])

    def _tile(self, key) -> Tile:
        t = self._tile_cache.get(key)
        if t is None:
            a, b, c = key
            k = self._kern
            t = _tile_from_coords(
                Point2(k.px[a], k.py[a], self._omark[self._v2o[a]]),
                Point2(k.px[b], k.py[b], self._omark[self._v2o[b]]),
                Point2(k.px[c], k.py[c], self._omark[self._v2o[c]]),
                k.tiles.get(key))
            self._tile_cache[key] = t
        return t

    @property
    def tiles(self) -> frozenset[Tile]:
        """Orbit-representative tiles (circumcenter in the cell)."""
        return frozenset(self._tile(k) for k in self._reps)

    @property
    def tile_count(self) -> int:
        return len(self._reps)

    def _iter_translates(self, rect: Rect | None, point: Point2 | None = None):
        """Candidate periodic translates whose disc could meet the query."""
        L = self.period
        for key in self._reps:
            tile = self._tile(key)
            r = tile.radius
            cx, cy = tile.center.x, tile.center.y
            if rect is not None:
                sx0 = math.ceil((rect.x0 - r - cx) / L)
                sx1 = math.floor((rect.x1 + r - cx) / L)
                sy0 = math.ceil((rect.y0 - r - cy) / L)
                sy1 = math.floor((rect.y1 + r - cy) / L)
            else:
                sx0 = math.ceil((point.x - r - cx) / L)
                sx1 = math.floor((point.x + r - cx) / L)
                sy0 = math.ceil((point.y - r - cy) / L)
                sy1 = math.floor((point.y + r - cy) / L)
            for sx in range(sx0, sx1 + 1):
                for sy in range(sy0, sy1 + 1):
                    if sx == 0 and sy == 0:
                        yield tile
                    else:
                        yield tile.translated(sx * L, sy * L)

    # ------------------------------------------------------------------
    # mutation

    def _net_rep_changes(self, ops) -> tuple[tuple, tuple]:
        removed, added = _k.net_delta(ops)
        kern = self._kern
        reps_removed = tuple(k for k in removed if k in self._reps)
        reps_added = tuple(
            k for k in added
            if k[0] != _k.GHOST
            and self._cell_shift(kern, k, kern.tiles[k]) == (0, 0))
        return reps_removed, reps_added

    def insert_txn(self, p: Point2) -> TorusTxn:
        """Insert one orbit (all nine copies); returns a reversible record."""
        p = Point2(*p) if not isinstance(p, Point2) else p
        # Snapshot rep tiles for the delta before mutating.
        oid = self._register_orbit(p)
        L = self.period
        kern = self._kern
        ops: list = []
        vids = []
        try:
            for (sx, sy) in SHIFTS9:
                vid = kern.add_vertex(p.x + sx * L, p.y + sy * L)
                self._v2o[vid] = oid
                vids.append(vid)
                kern.insert(vid, ops)
        except Exception:
            kern.rollback(ops)
            for vid in vids:
                kern.remove_vertex(vid)
                self._v2o.pop(vid, None)
            self._unregister_orbit(oid)
            raise
        self._o2v[oid] = tuple(vids)
        reps_removed, reps_added = self._net_rep_changes(ops)
        destroyed = tuple(sorted((self._tile(k) for k in reps_removed),
                                 key=lambda t: t.vertices))
        self._reps.difference_update(reps_removed)
        self._reps.update(reps_added)
        self._tile_cache.clear()
        created = tuple(sorted((self._tile(k) for k in reps_added),
                               key=lambda t: t.vertices))
        return TorusTxn(kind="insert", oid=oid, vids=tuple(vids), ops=ops,
                        reps_added=reps_added, reps_removed=reps_removed,
                        delta=CavityDelta(destroyed=destroyed, created=created))

    def remove_txn(self, oid: int) -> TorusTxn:
        """Remove one orbit; falls back to a full rebuild near degeneracy."""
        if oid not in self._alive:
            raise KeyError(f"orbit {oid} not present")
        if len(self._alive) <= 3:
            raise DegeneratePeriodicInputError(
                "removal would leave fewer than 3 orbits")
        kern = self._kern
        vids = self._o2v[oid]
        ops: list = []
        try:
            for vid in vids:
                kern.delete(vid, ops)
        except (_k.HullVertexError, _k.RetriangulationError):
            kern.rollback(ops)
            return self._remove_by_rebuild(oid)
        for vid in vids:
            kern.remove_vertex(vid)
        reps_removed, reps_added = self._net_rep_changes(ops)
        destroyed = tuple(sorted((self._tile(k) for k in reps_removed),
                                 key=lambda t: t.vertices))
        self._reps.difference_update(reps_removed)
        self._reps.update(reps_added)
        self._tile_cache.clear()
        created = tuple(sorted((self._tile(k) for k in reps_added),
                               key=lambda t: t.vertices))
        point = self.orbit_point(oid)
        self._unregister_orbit(oid)
        return TorusTxn(kind="remove", oid=oid, vids=vids, ops=ops,
                       reps_added=reps_added, reps_removed=reps_removed,
                       delta=CavityDelta(destroyed=destroyed, created=created),
                       old_mark=point.mark)

    def _remove_by_rebuild(self, oid: int) -> TorusTxn:
        old_state = (self._kern, self._v2o, self._o2v, self._reps,
                     self._tile_cache)
        old_tiles = {t.vertices: t for t in self.tiles}
        point = self.orbit_point(oid)
        self._unregister_orbit(oid)
        self._build()
        new_tiles = {t.vertices: t for t in self.tiles}
        destroyed = tuple(sorted((t for v, t in old_tiles.items()
                                  if v not in new_tiles),
                                 key=lambda t: t.vertices))
        created = tuple(sorted((t for v, t in new_tiles.items()
                                if v not in old_tiles),
                               key=lambda t: t.vertices))
        return TorusTxn(kind="remove", oid=oid, rebuilt=old_state,
                       delta=CavityDelta(destroyed=destroyed, created=created),
                       old_mark=point.mark)

    def recolor_txn(self, oid: int, mark: Optional[int]) -> TorusTxn:
        """Change an orbit's mark (no topology change)."""
        if oid not in self._alive:
            raise KeyError(f"orbit {oid} not present")
        old_tiles = tuple(sorted((self._tile(k) for k in self._star_reps(oid)),
                                 key=lambda t: t.vertices))
        old_mark = self._omark[oid]
        self._omark[oid] = mark
        self._tile_cache.clear()
        new_tiles = tuple(sorted((self._tile(k) for k in self._star_reps(oid)),
                                 key=lambda t: t.vertices))
        return TorusTxn(kind="recolor", oid=oid, old_mark=old_mark,
                       delta=CavityDelta(destroyed=old_tiles, created=new_tiles))

    def _star_reps(self, oid: int) -> set:
        """Representative tiles having some copy of the orbit as a vertex."""
        out = set()
        for vid in self._o2v[oid]:
            try:
                star = self._kern._star(vid)
            except (_k.RetriangulationError, KeyError):
                continue
            for key in star:
                if key in self._reps:
                    out.add(key)
        return out

    def abort(self, txn: TorusTxn) -> None:
        """Undo the most recent transaction."""
        if txn.kind == "recolor":
            self._omark[txn.oid] = txn.old_mark
            self._tile_cache.clear()
            return
        if txn.rebuilt is not None:
            (self._kern, self._v2o, self._o2v, self._reps,
             self._tile_cache) = txn.rebuilt
            x, y = self._ox[txn.oid], self._oy[txn.oid]
            self._alive.add(txn.oid)
            self._oindex[(x, y)] = txn.oid
            return
        kern = self._kern
        kern.rollback(txn.ops)
        self._reps.difference_update(txn.reps_added)
        self._reps.update(txn.reps_removed)
        self._tile_cache.clear()
        if txn.kind == "insert":
            for vid in txn.vids:
                kern.remove_vertex(vid)
                self._v2o.pop(vid, None)
            self._o2v.pop(txn.oid, None)
            self._unregister_orbit(txn.oid)
        else:  # remove
            for vid in txn.vids:
                kern.restore_vertex(vid)
            x, y = self._ox[txn.oid], self._oy[txn.oid]
            self._alive.add(txn.oid)
            self._oindex[(x, y)] = txn.oid
            self._omark[txn.oid] = txn.old_mark

    # public single-step insertion used by insert_cavity()
    def _insert_orbit(self, p: Point2) -> CavityDelta:
        txn = self.insert_txn(p)
        return txn.delta


def delaunay_torus(points: Iterable[Point2], period: float,
                   origin: tuple[float, float] = (0.0, 0.0)) -> TorusTriangulation:
    """Periodic Delaunay triangulation of points in ``[ox, ox+L)^2``.

    Raises :class:`DegeneratePeriodicInputError` for fewer than 3 points or
    lattice-degenerate geometry.  In general position the triangulation has
    exactly ``2 n`` representative tiles.
    """
    return TorusTriangulation(points, period, origin)
