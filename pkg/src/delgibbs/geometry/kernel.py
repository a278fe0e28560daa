"""Incremental planar Delaunay engine.

Index-based triangulation of a growing/shrinking point set with:

* exact conflict predicates (see :mod:`.predicates`), so tile sets never
  depend on floating-point drift;
* ghost tiles attached to every hull edge, which lets point insertion treat
  hull and interior uniformly;
* deterministic resolution of co-circular ties: every maximal co-circular
  polygon is re-triangulated as the lexicographically smallest of its
  triangulations (coordinates compared x-then-y), which makes the tile set a
  pure function of the point set;
* an operation log per mutation, so callers can roll a mutation back.

Tiles are stored as rotation-normalised oriented triples of vertex ids, with
``GHOST`` (= -1) as the placeholder vertex of hull ghosts.  The directed-edge
map sends each directed edge to the unique tile containing it.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import CollinearError, DuplicatePointError
from .predicates import (
    circumcircle,
    in_circle,
    orientation,
    strictly_between,
)

GHOST = -1

# Ops are ("a", key) for tile additions and ("r", key, value) for removals.
Op = tuple


class HullVertexError(Exception):
    """Deletion touched a hull vertex; caller should rebuild instead."""


class RetriangulationError(Exception):
    """Hole filling failed (degenerate link); caller should rebuild."""


def _tkey(a: int, b: int, c: int) -> tuple[int, int, int]:
    # Rotate the oriented cycle so the smallest id comes first.
    if a < b:
        return (a, b, c) if a < c else (c, a, b)
    return (b, c, a) if b < c else (c, a, b)


def net_delta(ops: list[Op]) -> tuple[set, set]:
    """Collapse an op log into (net removed keys, net added keys)."""
    removed: set = set()
    added: set = set()
    for op in ops:
        k = op[1]
        if op[0] == "a":
            if k in removed:
                removed.discard(k)
            else:
                added.add(k)
        else:
            if k in added:
                added.discard(k)
            else:
                removed.add(k)
    return removed, added


class Kernel:
    """Mutable planar Delaunay triangulation over indexed points."""

    __slots__ = ("px", "py", "pindex", "alive", "tiles", "emap", "vstar",
                 "_last", "tie_events", "_nreal")

    def __init__(self) -> None:
        self.px: list[float] = []
        self.py: list[float] = []
        self.pindex: dict[tuple[float, float], int] = {}
        self.alive: set[int] = set()
        self.tiles: dict[tuple[int, int, int], tuple | None] = {}
        self.emap: dict[tuple[int, int], tuple[int, int, int]] = {}
        self.vstar: dict[int, tuple[int, int, int]] = {}
        self._last: tuple[int, int, int] | None = None
        self.tie_events = 0  # co-circular clusters canonicalised so far
        self._nreal = 0

    # ------------------------------------------------------------------
    # vertex registry

    def add_vertex(self, x: float, y: float) -> int:
        key = (x, y)
        if key in self.pindex:
            raise DuplicatePointError(f"point {key} already present")
        vid = len(self.px)
        self.px.append(x)
        self.py.append(y)
        self.pindex[key] = vid
        self.alive.add(vid)
        return vid

    def remove_vertex(self, vid: int) -> None:
        self.alive.discard(vid)
        self.pindex.pop((self.px[vid], self.py[vid]), None)

    def restore_vertex(self, vid: int) -> None:
        self.alive.add(vid)
        self.pindex[(self.px[vid], self.py[vid])] = vid

    # ------------------------------------------------------------------
    # low-level tile surgery

    def _add_tile(self, a: int, b: int, c: int, ops: list[Op]) -> tuple[int, int, int]:
        key = _tkey(a, b, c)
        if key[0] == GHOST:
            val = None
        else:
            val = circumcircle(self.px[a], self.py[a], self.px[b], self.py[b],
                               self.px[c], self.py[c])
            self._nreal += 1
        self.tiles[key] = val
        u, v, w = key
        emap = self.emap
        emap[(u, v)] = key
        emap[(v, w)] = key
        emap[(w, u)] = key
        vstar = self.vstar
        for t in key:
            if t != GHOST:
                vstar[t] = key
        ops.append(("a", key))
        return key

    def _rm_tile(self, key: tuple[int, int, int], ops: list[Op]) -> None:
        val = self.tiles.pop(key)
        if val is not None:
            self._nreal -= 1
        u, v, w = key
        del self.emap[(u, v)]
        del self.emap[(v, w)]
        del self.emap[(w, u)]
        ops.append(("r", key, val))

    def rollback(self, ops: list[Op]) -> None:
        """Undo a mutation given its op log."""
        emap = self.emap
        for op in reversed(ops):
            key = op[1]
            u, v, w = key
            if op[0] == "a":
                if self.tiles.pop(key) is not None:
                    self._nreal -= 1
                del emap[(u, v)]
                del emap[(v, w)]
                del emap[(w, u)]
            else:
                val = op[2]
                self.tiles[key] = val
                if val is not None:
                    self._nreal += 1
                emap[(u, v)] = key
                emap[(v, w)] = key
                emap[(w, u)] = key
                for t in key:
                    if t != GHOST:
                        self.vstar[t] = key
        self._last = None

    # ------------------------------------------------------------------
    # predicates on tiles

    def _conflict(self, key: tuple[int, int, int], x: float, y: float) -> bool:
        a, b, c = key
        px, py = self.px, self.py
        if a == GHOST:
            # key (GHOST, s, t) guards hull edge t -> s (interior on its left).
            o = orientation(px[c], py[c], px[b], py[b], x, y)
            if o < 0:
                return True
            if o == 0:
                return strictly_between(px[c], py[c], px[b], py[b], x, y)
            return False
        return in_circle(px[a], py[a], px[b], py[b], px[c], py[c], x, y) > 0

    def _locate(self, x: float, y: float) -> tuple[int, int, int]:
        """Find one tile in conflict with (x, y) by a visibility walk."""
        tiles = self.tiles
        px, py = self.px, self.py
        emap = self.emap
        key = self._last
        if key is None or key not in tiles:
            key = next(iter(tiles))
        entry: tuple[int, int] | None = None
        for _ in range(4 * len(tiles) + 64):
            a, b, c = key
            if a == GHOST:
                if self._conflict(key, x, y):
                    return key
                entry = (c, b)  # step back inside through the real edge
                key = emap[(c, b)]
                continue
            nxt = None
            for (u, v) in ((a, b), (b, c), (c, a)):
                if (u, v) == entry:
                    continue
                if orientation(px[u], py[u], px[v], py[v], x, y) < 0:
                    nxt = (v, u)
                    break
            if nxt is None:
                return key  # inside the closed triangle, hence in conflict
            entry = nxt
            key = emap[nxt]
        for key in tiles:  # cap hit: exhaustive fallback, still exact
            if self._conflict(key, x, y):
                return key
        raise RuntimeError("no conflicting tile found (duplicate point?)")

    # ------------------------------------------------------------------
    # insertion

    def insert(self, vid: int, ops: list[Op]) -> None:
        """Insert a registered vertex into a non-degenerate triangulation."""
        x, y = self.px[vid], self.py[vid]
        seed = self._locate(x, y)
        bad = {seed}
        stack = [seed]
        emap = self.emap
        while stack:
            a, b, c = stack.pop()
            for (u, v) in ((a, b), (b, c), (c, a)):
                n = emap[(v, u)]
                if n not in bad and self._conflict(n, x, y):
                    bad.add(n)
                    stack.append(n)
        boundary = []
        for t in bad:
            a, b, c = t
            for (u, v) in ((a, b), (b, c), (c, a)):
                if emap[(v, u)] not in bad:
                    boundary.append((u, v))
        for t in bad:
            self._rm_tile(t, ops)
        created = [self._add_tile(u, v, vid, ops) for (u, v) in boundary]
        self._last = created[-1]
        self._canonicalize(created, ops)

    # ------------------------------------------------------------------
    # deletion

    def _star(self, vid: int) -> list[tuple[int, int, int]]:
        t = self.vstar.get(vid)
        if t is None or t not in self.tiles or vid not in t:
            t = next((k for k in self.tiles if vid in k), None)
            if t is None:
                raise RetriangulationError(f"vertex {vid} has no tiles")
        star = [t]
        start = t
        while True:
            a, b, c = t
            pred = c if vid == a else (a if vid == b else b)
            t = self.emap[(vid, pred)]
            if t == start:
                return star
            star.append(t)

    def delete(self, vid: int, ops: list[Op]) -> None:
        """Remove a vertex and re-triangulate its star hole.

        Handles interior and hull vertices.  Raises
        :class:`RetriangulationError` when the removal would degenerate the
        triangulation (caller rebuilds from scratch).
        """
        star = self._star(vid)
        if any(t[0] == GHOST for t in star):
            self._delete_hull(vid, star, ops)
            return
        succ: dict[int, int] = {}
        for t in star:
            a, b, c = t
            if vid == a:
                succ[b] = c
            elif vid == b:
                succ[c] = a
            else:
                succ[a] = b
        if len(succ) != len(star):
            raise RetriangulationError("pinched vertex link")
        start = next(iter(succ))
        poly = [start]
        nxt = succ[start]
        while nxt != start:
            poly.append(nxt)
            nxt = succ[nxt]
        if len(poly) != len(star):
            raise RetriangulationError("disconnected vertex link")
        for t in star:
            self._rm_tile(t, ops)
        created: list[tuple[int, int, int]] = []
        self._fill(poly, ops, created)
        self._last = created[-1]
        self._canonicalize(created, ops)

    def _delete_hull(self, vid: int, star: list, ops: list[Op]) -> None:
        # Link path a -> ... -> b over the real star tiles, where a is the
        # hull vertex following vid counter-clockwise and b the one preceding.
        succ: dict[int, int] = {}
        nreals = 0
        for t in star:
            if t[0] == GHOST:
                continue
            nreals += 1
            a, b, c = t
            if vid == a:
                succ[b] = c
            elif vid == b:
                succ[c] = a
            else:
                succ[a] = b
        if nreals == 0:
            raise RetriangulationError("isolated hull vertex")
        heads = set(succ) - set(succ.values())
        if len(heads) != 1:
            raise RetriangulationError("broken hull link")
        path = [heads.pop()]
        while path[-1] in succ:
            path.append(succ[path[-1]])
        if len(path) != nreals + 1:
            raise RetriangulationError("disconnected hull link")
        # New hull chain: convex subsequence of the path (pop strict left
        # turns; collinear hull points stay as vertices).
        px, py = self.px, self.py
        chain = [path[0]]
        for p in path[1:]:
            while len(chain) >= 2 and orientation(
                    px[chain[-2]], py[chain[-2]],
                    px[chain[-1]], py[chain[-1]], px[p], py[p]) > 0:
                chain.pop()
            chain.append(p)
        pos = {v: i for i, v in enumerate(path)}
        pockets = []
        new_real = 0
        for ci in range(len(chain) - 1):
            i, j = pos[chain[ci]], pos[chain[ci + 1]]
            if j - i >= 2:
                pockets.append(path[i:j + 1])
                new_real += (j - i) - 1
        if self._nreal - nreals + new_real == 0:
            raise RetriangulationError("deletion would flatten the triangulation")
        for t in star:
            self._rm_tile(t, ops)
        for ci in range(len(chain) - 1):
            # Hull edge chain[ci+1] -> chain[ci] in CCW hull order.
            self._add_tile(chain[ci], chain[ci + 1], GHOST, ops)
        created: list[tuple[int, int, int]] = []
        for pocket in pockets:
            self._fill(pocket, ops, created)
        self._last = created[-1] if created else None
        self._canonicalize(created, ops)

    def _fill(self, poly: list[int], ops: list[Op],
              created: list[tuple[int, int, int]]) -> None:
        # Delaunay ear on the base edge (poly[0], poly[1]) of a CCW hole.
        px, py = self.px, self.py
        if len(poly) == 3:
            a, b, c = poly
            if orientation(px[a], py[a], px[b], py[b], px[c], py[c]) <= 0:
                raise RetriangulationError("degenerate hole triangle")
            created.append(self._add_tile(a, b, c, ops))
            return
        a, b = poly[0], poly[1]
        ax, ay, bx, by = px[a], py[a], px[b], py[b]
        besti = -1
        for i in range(2, len(poly)):
            v = poly[i]
            if orientation(ax, ay, bx, by, px[v], py[v]) <= 0:
                continue
            if besti < 0:
                besti = i
                continue
            w = poly[besti]
            if in_circle(ax, ay, bx, by, px[w], py[w], px[v], py[v]) > 0:
                besti = i
        if besti < 0:
            raise RetriangulationError("no visible apex for hole edge")
        v = poly[besti]
        created.append(self._add_tile(a, b, v, ops))
        left = poly[1:besti + 1]
        right = poly[besti:] + [a]
        if len(left) >= 3:
            self._fill(left, ops, created)
        if len(right) >= 3:
            self._fill(right, ops, created)

    # ------------------------------------------------------------------
    # co-circular tie canonicalisation

    def _cluster(self, seed: tuple[int, int, int]) -> set[tuple[int, int, int]]:
        px, py = self.px, self.py
        emap = self.emap
        cluster = {seed}
        stack = [seed]
        while stack:
            t = stack.pop()
            a, b, c = t
            ax, ay, bx, by, cx, cy = px[a], py[a], px[b], py[b], px[c], py[c]
            for (u, v) in ((a, b), (b, c), (c, a)):
                n = emap.get((v, u))
                if n is None or n in cluster or n[0] == GHOST:
                    continue
                w = next(q for q in n if q != u and q != v)
                if in_circle(ax, ay, bx, by, cx, cy, px[w], py[w]) == 0:
                    cluster.add(n)
                    stack.append(n)
        return cluster

    def _canonicalize(self, seeds: list[tuple[int, int, int]],
                      ops: list[Op]) -> None:
        done: set[tuple[int, int, int]] = set()
        for k0 in seeds:
            if k0[0] == GHOST or k0 in done or k0 not in self.tiles:
                continue
            cluster = self._cluster(k0)
            done |= cluster
            if len(cluster) < 2:
                continue
            self.tie_events += 1
            verts = {v for t in cluster for v in t}
            poly = self._sort_ccw(sorted(verts))
            best = self._lex_min_triangulation(poly)
            newkeys = {_tkey(*tri) for tri in best}
            if newkeys == cluster:
                continue
            for t in cluster:
                self._rm_tile(t, ops)
            for tri in best:
                self._add_tile(*tri, ops)
            done |= newkeys
            self._last = None

    def _sort_ccw(self, verts: list[int]) -> list[int]:
        # Exact angular order around the centroid (interior for concyclic points).
        import functools

        px, py = self.px, self.py
        n = len(verts)
        ox = Fraction(sum(Fraction(px[v]) for v in verts), n)
        oy = Fraction(sum(Fraction(py[v]) for v in verts), n)
        dx = {v: Fraction(px[v]) - ox for v in verts}
        dy = {v: Fraction(py[v]) - oy for v in verts}

        def half(v: int) -> int:
            return 0 if (dy[v] > 0 or (dy[v] == 0 and dx[v] > 0)) else 1

        def cmp(u: int, v: int) -> int:
            hu, hv = half(u), half(v)
            if hu != hv:
                return -1 if hu < hv else 1
            cross = dx[u] * dy[v] - dy[u] * dx[v]
            if cross > 0:
                return -1
            if cross < 0:
                return 1
            return 0

        return sorted(verts, key=functools.cmp_to_key(cmp))

    def _lex_min_triangulation(self, poly: list[int]) -> list[tuple[int, int, int]]:
        """Smallest triangulation of a convex polygon given in CCW order.

        Triangulations are compared lexicographically on their sorted lists
        of coordinate-sorted triangles.
        """
        m = len(poly)
        if m > 12:
            raise RetriangulationError(
                f"co-circular cluster of size {m} exceeds enumeration cap")
        import functools

        @functools.cache
        def enum(i: int, j: int) -> tuple[tuple[tuple[int, int, int], ...], ...]:
            if j - i == 1:
                return ((),)
            out = []
            for k in range(i + 1, j):
                for left in enum(i, k):
                    for right in enum(k, j):
                        out.append(left + right + ((i, k, j),))
            return tuple(out)

        px, py = self.px, self.py
        coords = [(px[v], py[v]) for v in poly]

        def canon(tri_list):
            return sorted(
                tuple(sorted((coords[i], coords[j], coords[k])))
                for (i, j, k) in tri_list)

        best = min(enum(0, m - 1), key=canon)
        # Increasing polygon indices run CCW, so (i, k, j) with i < k < j is CCW.
        return [(poly[i], poly[k], poly[j]) for (i, k, j) in best]

    # ------------------------------------------------------------------
    # bulk construction

    def build(self, ids: list[int]) -> None:
        """Triangulate the given vertices from scratch (tiles must be empty)."""
        if self.tiles:
            raise RuntimeError("build() requires an empty kernel")
        px, py = self.px, self.py
        order = sorted(ids, key=lambda i: (px[i], py[i]))
        if len(order) < 3:
            return
        i0, i1 = order[0], order[1]
        pivot = -1
        for pos in range(2, len(order)):
            j = order[pos]
            if orientation(px[i0], py[i0], px[i1], py[i1], px[j], py[j]) != 0:
                pivot = pos
                break
        if pivot < 0:
            return  # fully collinear input: empty tile set
        i2 = order[pivot]
        if orientation(px[i0], py[i0], px[i1], py[i1], px[i2], py[i2]) > 0:
            a, b, c = i0, i1, i2
        else:
            a, b, c = i0, i2, i1
        ops: list[Op] = []
        self._add_tile(a, b, c, ops)
        self._add_tile(b, a, GHOST, ops)
        self._add_tile(c, b, GHOST, ops)
        self._add_tile(a, c, GHOST, ops)
        for pos in range(2, len(order)):
            if pos == pivot:
                continue
            self.insert(order[pos], [])

    # ------------------------------------------------------------------
    # views

    def real_items(self):
        """Iterate (key, (cx, cy, r2)) over real tiles."""
        for key, val in self.tiles.items():
            if val is not None:
                yield key, val

    def real_tile_count(self) -> int:
        return self._nreal

    def hull_edge_count(self) -> int:
        return len(self.tiles) - self._nreal

    def edge_count(self) -> int:
        # Each real tile carries 3 directed real edges, each ghost exactly 1.
        return (3 * self.real_tile_count() + self.hull_edge_count()) // 2
