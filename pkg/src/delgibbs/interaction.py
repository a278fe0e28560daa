"""Bounded triangle potentials and the hard-core pair constraint.

A triangle potential assigns a bounded, shift-invariant energy to each tile
of a triangulation.  Every potential carries its declared bound ``c_phi``
(consumed by the boundary and vacuum estimates) and, optionally, an
"eventually increasing" declaration: beyond radius ``r_phi`` the energy is a
nondecreasing function ``psi`` of the circumradius alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .errors import ConfigError, MissingMarkError
from .geometry import Point2, Tile

__all__ = [
    "TrianglePotential",
    "HardCoreConstraint",
    "phi1",
    "phi2",
    "truncate",
    "potts",
    "edge_fold",
    "constant_potential",
    "zero_potential",
    "violates_hard_core",
    "potential_from_spec",
]


@dataclass(frozen=True)
class TrianglePotential:
    """Bounded tile-energy function with declared metadata.

    ``func(tile)`` is the energy; ``abs(func) <= c_phi`` must hold for all
    tiles.  When ``r_phi`` is set, ``func(tile) == psi(tile.radius)`` for all
    tiles with ``tile.radius >= r_phi``, with ``psi`` nondecreasing.
    """

    func: Callable[[Tile], float]
    c_phi: float
    name: str = "custom"
    r_phi: Optional[float] = None
    psi: Optional[Callable[[float], float]] = None
    marked: bool = False

    def __call__(self, tile: Tile) -> float:
        return self.func(tile)

    @property
    def eventually_increasing(self) -> bool:
        return self.r_phi is not None

    def total(self, tiles: Iterable[Tile]) -> float:
        return sum(self.func(t) for t in tiles)


@dataclass(frozen=True)
class HardCoreConstraint:
    """Forbids point pairs at distance <= r0."""

    r0: float

    def __post_init__(self):
        if not (self.r0 > 0):
            raise ValueError(f"hard-core radius must be positive: {self.r0}")


_SQRT3 = math.sqrt(3.0)


def phi1(beta: float) -> TrianglePotential:
    """Energy ``beta * |center - barycenter| / radius``; favours equilateral
    tiles, scale invariant, bounded by ``beta``."""
    if not beta > 0:
        raise ValueError("beta must be positive")

    def f(tile: Tile) -> float:
        dx = tile.center.x - tile.barycenter.x
        dy = tile.center.y - tile.barycenter.y
        return beta * math.hypot(dx, dy) / tile.radius

    return TrianglePotential(func=f, c_phi=beta, name=f"phi1({beta})")


def phi2(beta: float) -> TrianglePotential:
    """Energy ``-beta * area / radius**2``; minimal (most negative) on
    equilateral tiles, scale invariant, bounded by ``(3*sqrt(3)/4) * beta``."""
    if not beta > 0:
        raise ValueError("beta must be positive")

    def f(tile: Tile) -> float:
        return -beta * tile.area / (tile.radius * tile.radius)

    return TrianglePotential(func=f, c_phi=0.75 * _SQRT3 * beta,
                             name=f"phi2({beta})")


def truncate(inner: TrianglePotential, r: float, K: float) -> TrianglePotential:
    """Replace the energy by the constant ``K`` on tiles of radius >= ``r``.

    The result is eventually increasing with ``psi == K`` beyond ``r``.
    """
    if not r > 0:
        raise ValueError("truncation radius must be positive")
    g = inner.func

    def f(tile: Tile) -> float:
        return g(tile) if tile.radius < r else K

    return TrianglePotential(
        func=f,
        c_phi=max(inner.c_phi, abs(K)),
        name=f"truncate({inner.name},{r},{K})",
        r_phi=r,
        psi=lambda rho: K,
        marked=inner.marked,
    )


def potts(beta: float, r1: float, q: int) -> TrianglePotential:
    """Colour interaction: ``beta`` on small tiles (radius <= r1) whose three
    vertex marks are not all equal, 0 otherwise."""
    if not beta > 0:
        raise ValueError("beta must be positive")
    if not r1 > 0:
        raise ValueError("interaction radius must be positive")
    if not (isinstance(q, int) and q >= 2):
        raise ValueError("q must be an integer >= 2")

    def f(tile: Tile) -> float:
        m0, m1, m2 = tile.marks
        if m0 is None or m1 is None or m2 is None:
            raise MissingMarkError(f"unmarked vertex in tile {tile.vertices}")
        if tile.radius <= r1 and not (m0 == m1 == m2):
            return beta
        return 0.0

    return TrianglePotential(
        func=f,
        c_phi=beta,
        name=f"potts({beta},{r1},{q})",
        r_phi=math.nextafter(r1, math.inf),
        psi=lambda rho: 0.0,
        marked=True,
    )


def edge_fold(phi_edge: Callable[[Point2, Point2], float],
              edge_bound: float,
              name: str = "edge_fold") -> TrianglePotential:
    """Half the sum of a bounded edge potential over the tile's three edges.

    On a full-plane triangulation each interior edge is shared by two tiles,
    so summing the folded potential over tiles counts each edge once.
    """
    if not edge_bound >= 0:
        raise ValueError("edge_bound must be nonnegative")

    def f(tile: Tile) -> float:
        a, b, c = tile.vertices
        return 0.5 * (phi_edge(a, b) + phi_edge(b, c) + phi_edge(c, a))

    return TrianglePotential(func=f, c_phi=1.5 * edge_bound, name=name)


def constant_potential(c: float) -> TrianglePotential:
    """Constant tile energy; trivially eventually increasing."""

    return TrianglePotential(func=lambda tile: c, c_phi=abs(c),
                             name=f"constant({c})", r_phi=0.0,
                             psi=lambda rho: c)


def zero_potential() -> TrianglePotential:
    return constant_potential(0.0)


def violates_hard_core(points: Iterable[Point2],
                       hc: HardCoreConstraint) -> bool:
    """True iff some pair of points is at distance <= r0 (boundary included)."""
    pts = [(p.x, p.y) if isinstance(p, Point2) else (p[0], p[1])
           for p in points]
    r2 = hc.r0 * hc.r0
    for i in range(len(pts)):
        xi, yi = pts[i]
        for j in range(i + 1, len(pts)):
            dx = xi - pts[j][0]
            dy = yi - pts[j][1]
            if dx * dx + dy * dy <= r2:
                return True
    return False


def potential_from_spec(spec: dict) -> TrianglePotential:
    """Build a potential from a config block.

    ``kind`` is one of phi1 | phi2 | truncated | potts | edge_fold | constant.
    ``truncated`` wraps an ``inner`` block and takes ``r`` and ``K``;
    ``edge_fold`` folds a constant edge potential ``value``.
    """
    if not isinstance(spec, dict):
        raise ConfigError("potential spec must be an object")
    kind = spec.get("kind")
    known = {
        "phi1": {"kind", "beta"},
        "phi2": {"kind", "beta"},
        "truncated": {"kind", "inner", "r", "K"},
        "potts": {"kind", "beta", "r1", "q"},
        "edge_fold": {"kind", "value"},
        "constant": {"kind", "value"},
    }
    if kind not in known:
        raise ConfigError(f"unknown potential kind: {kind!r}")
    extra = set(spec) - known[kind]
    if extra:
        raise ConfigError(f"unknown keys in potential spec: {sorted(extra)}")
    try:
        if kind == "phi1":
            return phi1(float(spec["beta"]))
        if kind == "phi2":
            return phi2(float(spec["beta"]))
        if kind == "truncated":
            return truncate(potential_from_spec(spec["inner"]),
                            float(spec["r"]), float(spec["K"]))
        if kind == "potts":
            return potts(float(spec["beta"]), float(spec["r1"]), int(spec["q"]))
        if kind == "edge_fold":
            value = float(spec["value"])
            return edge_fold(lambda a, b: value, abs(value),
                             name=f"edge_fold({value})")
        return constant_potential(float(spec["value"]))
    except KeyError as exc:
        raise ConfigError(f"potential spec missing key: {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad potential parameter: {exc}") from exc
