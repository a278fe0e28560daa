"""Plain-text point-set snapshots.

Format: a header line ``torus L`` or ``window x0 y0 x1 y1``, then one point
per line as ``x y`` or ``x y mark`` in decimal notation.  ``#`` starts a
comment; blank lines are ignored.
"""

from __future__ import annotations

import io
from pathlib import Path
from typing import Iterable, TextIO, Union

from ..errors import ConfigError
from .planar import Point2, Rect

__all__ = ["Snapshot", "read_snapshot", "write_snapshot"]


class Snapshot:
    """Parsed point-set snapshot: points plus their domain."""

    def __init__(self, points: tuple[Point2, ...],
                 torus_period: float | None = None,
                 window: Rect | None = None):
        if (torus_period is None) == (window is None):
            raise ConfigError("snapshot needs exactly one of torus/window")
        self.points = points
        self.torus_period = torus_period
        self.window = window

    @property
    def is_torus(self) -> bool:
        return self.torus_period is not None


def _parse_float(tok: str, where: str) -> float:
    try:
        return float(tok)
    except ValueError as exc:
        raise ConfigError(f"bad number {tok!r} in {where}") from exc


def read_snapshot(source: Union[str, Path, TextIO]) -> Snapshot:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return read_snapshot(fh)
    header = None
    points: list[Point2] = []
    for lineno, raw in enumerate(source, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if header is None:
            if toks[0] == "torus" and len(toks) == 2:
                header = ("torus", _parse_float(toks[1], f"line {lineno}"))
            elif toks[0] == "window" and len(toks) == 5:
                header = ("window", Rect(*(_parse_float(t, f"line {lineno}")
                                           for t in toks[1:])))
            else:
                raise ConfigError(f"line {lineno}: expected 'torus L' or "
                                  f"'window x0 y0 x1 y1', got {line!r}")
            continue
        if len(toks) == 2:
            points.append(Point2(_parse_float(toks[0], f"line {lineno}"),
                                 _parse_float(toks[1], f"line {lineno}")))
        elif len(toks) == 3:
            try:
                mark = int(toks[2])
            except ValueError as exc:
                raise ConfigError(f"line {lineno}: bad mark {toks[2]!r}") from exc
            points.append(Point2(_parse_float(toks[0], f"line {lineno}"),
                                 _parse_float(toks[1], f"line {lineno}"), mark))
        else:
            raise ConfigError(f"line {lineno}: expected 'x y' or 'x y mark'")
    if header is None:
        raise ConfigError("snapshot missing header line")
    kind, value = header
    if kind == "torus":
        return Snapshot(tuple(points), torus_period=value)
    return Snapshot(tuple(points), window=value)


def write_snapshot(dest: Union[str, Path, TextIO], points: Iterable[Point2],
                   torus_period: float | None = None,
                   window: Rect | None = None,
                   comment: str | None = None) -> None:
    if isinstance(dest, (str, Path)):
        buf = io.StringIO()
        write_snapshot(buf, points, torus_period, window, comment)
        Path(dest).write_text(buf.getvalue(), encoding="utf-8")
        return
    if (torus_period is None) == (window is None):
        raise ConfigError("snapshot needs exactly one of torus/window")
    if comment:
        dest.write(f"# {comment}\n")
    if torus_period is not None:
        dest.write(f"torus {torus_period!r}\n")
    else:
        w = window
        dest.write(f"window {w.x0!r} {w.y0!r} {w.x1!r} {w.y1!r}\n")
    for p in points:
        if p.mark is None:
            dest.write(f"{p.x!r} {p.y!r}\n")
        else:
            dest.write(f"{p.x!r} {p.y!r} {p.mark}\n")
