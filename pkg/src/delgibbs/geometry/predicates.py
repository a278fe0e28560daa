"""Exactly-decided planar predicates with a floating-point fast path.

Each predicate first evaluates the determinant in double precision together
with a forward error bound; when the bound cannot certify the sign, the
computation is repeated in arbitrary-precision integer arithmetic.  Floats
are dyadic rationals, so rescaling all inputs by one common power of two
turns them into exact integers and the fallback sign is rigorous.  Ties
(collinear / co-circular inputs) are therefore detected exactly.
"""

from __future__ import annotations

import math
from fractions import Fraction

from ..errors import CollinearError

__all__ = [
    "orientation",
    "in_circle",
    "circumcircle",
    "circumcircle_exact",
    "strictly_between",
]

_EPS = math.ulp(1.0) / 2.0  # 2**-53
_ORIENT_BOUND = (3.0 + 16.0 * _EPS) * _EPS
_INCIRCLE_BOUND = (10.0 + 96.0 * _EPS) * _EPS


def _scaled_ints(*vals: float) -> list[int]:
    # float.as_integer_ratio gives n / 2**k exactly; rescale to the largest k.
    rats = [v.as_integer_ratio() for v in vals]
    top = max(d.bit_length() for _, d in rats)
    return [n << (top - d.bit_length()) for n, d in rats]


def orientation(ax: float, ay: float, bx: float, by: float,
                cx: float, cy: float) -> int:
    """Sign of twice the signed area of (a, b, c): +1 counter-clockwise,
    -1 clockwise, 0 exactly collinear."""
    detleft = (bx - ax) * (cy - ay)
    detright = (by - ay) * (cx - ax)
    det = detleft - detright
    detsum = abs(detleft) + abs(detright)
    if det > _ORIENT_BOUND * detsum:
        return 1
    if -det > _ORIENT_BOUND * detsum:
        return -1
    iax, iay, ibx, iby, icx, icy = _scaled_ints(ax, ay, bx, by, cx, cy)
    idet = (ibx - iax) * (icy - iay) - (iby - iay) * (icx - iax)
    return (idet > 0) - (idet < 0)


def in_circle(ax: float, ay: float, bx: float, by: float, cx: float, cy: float,
              dx: float, dy: float) -> int:
    """Position of d relative to the circle through (a, b, c) taken
    counter-clockwise: +1 strictly inside, -1 strictly outside, 0 on the
    circle.  For a clockwise triple the sign flips."""
    adx = ax - dx
    ady = ay - dy
    bdx = bx - dx
    bdy = by - dy
    cdx = cx - dx
    cdy = cy - dy

    bdxcdy = bdx * cdy
    cdxbdy = cdx * bdy
    alift = adx * adx + ady * ady

    cdxady = cdx * ady
    adxcdy = adx * cdy
    blift = bdx * bdx + bdy * bdy

    adxbdy = adx * bdy
    bdxady = bdx * ady
    clift = cdx * cdx + cdy * cdy

    det = (alift * (bdxcdy - cdxbdy)
           + blift * (cdxady - adxcdy)
           + clift * (adxbdy - bdxady))
    permanent = ((abs(bdxcdy) + abs(cdxbdy)) * alift
                 + (abs(cdxady) + abs(adxcdy)) * blift
                 + (abs(adxbdy) + abs(bdxady)) * clift)
    bound = _INCIRCLE_BOUND * permanent
    if det > bound:
        return 1
    if -det > bound:
        return -1
    return _in_circle_exact(ax, ay, bx, by, cx, cy, dx, dy)


def _in_circle_exact(ax, ay, bx, by, cx, cy, dx, dy) -> int:
    iax, iay, ibx, iby, icx, icy, idx, idy = _scaled_ints(
        ax, ay, bx, by, cx, cy, dx, dy)
    adx = iax - idx
    ady = iay - idy
    bdx = ibx - idx
    bdy = iby - idy
    cdx = icx - idx
    cdy = icy - idy
    det = ((adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
           + (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy)
           + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady))
    return (det > 0) - (det < 0)


def circumcircle(ax: float, ay: float, bx: float, by: float,
                 cx: float, cy: float) -> tuple[float, float, float]:
    """Circumscribed circle of a non-degenerate triangle.

    Returns ``(center_x, center_y, radius_squared)``.  Raises
    :class:`CollinearError` when the points are exactly collinear.
    """
    if orientation(ax, ay, bx, by, cx, cy) == 0:
        raise CollinearError(f"collinear points: ({ax},{ay}) ({bx},{by}) ({cx},{cy})")
    bxd = bx - ax
    byd = by - ay
    cxd = cx - ax
    cyd = cy - ay
    d = 2.0 * (bxd * cyd - byd * cxd)
    b2 = bxd * bxd + byd * byd
    c2 = cxd * cxd + cyd * cyd
    ux = (cyd * b2 - byd * c2) / d
    uy = (bxd * c2 - cxd * b2) / d
    return ax + ux, ay + uy, ux * ux + uy * uy


def circumcircle_exact(ax: float, ay: float, bx: float, by: float,
                       cx: float, cy: float) -> tuple[Fraction, Fraction, Fraction]:
    """Exact rational circumcircle ``(center_x, center_y, radius_squared)``."""
    fax, fay = Fraction(ax), Fraction(ay)
    bxd = Fraction(bx) - fax
    byd = Fraction(by) - fay
    cxd = Fraction(cx) - fax
    cyd = Fraction(cy) - fay
    d = 2 * (bxd * cyd - byd * cxd)
    if d == 0:
        raise CollinearError("collinear points")
    b2 = bxd * bxd + byd * byd
    c2 = cxd * cxd + cyd * cyd
    ux = (cyd * b2 - byd * c2) / d
    uy = (bxd * c2 - cxd * b2) / d
    return fax + ux, fay + uy, ux * ux + uy * uy


def strictly_between(ax: float, ay: float, bx: float, by: float,
                     px: float, py: float) -> bool:
    """For p exactly on line (a, b): is p strictly inside the segment?

    Comparison is lexicographic, which orders points along any common line.
    """
    lo, hi = ((ax, ay), (bx, by)) if (ax, ay) < (bx, by) else ((bx, by), (ax, ay))
    return lo < (px, py) < hi
