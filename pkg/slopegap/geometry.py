"""
geometry.py — Exact convex-polygon helpers over Fractions.

Polygons are counterclockwise vertex lists in the (a, b) plane. A half-plane
is stored as (ca, cb, k) meaning ca·a + cb·b <= k.
"""

from fractions import Fraction
from typing import Iterator, List, Sequence, Tuple

Point = Tuple[Fraction, Fraction]
Polygon = List[Point]
HalfPlane = Tuple[Fraction, Fraction, Fraction]


def segments(poly: Sequence[Point]) -> Iterator[Tuple[Point, Point]]:
    return zip(poly, list(poly[1:]) + list(poly[:1]))


def signed_area(poly: Sequence[Point]) -> Fraction:
    """Shoelace area; positive for counterclockwise polygons."""
    return sum((a0 * b1 - a1 * b0 for (a0, b0), (a1, b1) in segments(poly)), Fraction(0)) / 2


def area(poly: Sequence[Point]) -> Fraction:
    return abs(signed_area(poly))


def _cross(o: Point, p: Point, q: Point) -> Fraction:
    return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])


def simplify(poly: Sequence[Point]) -> Polygon:
    """Drop repeated and collinear vertices."""
    pts: Polygon = []
    for p in poly:
        if not pts or pts[-1] != p:
            pts.append(p)
    if len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        for i in range(len(pts)):
            if _cross(pts[i - 1], pts[i], pts[(i + 1) % len(pts)]) == 0:
                del pts[i]
                changed = True
                break
    return pts if len(pts) >= 3 else []


def clip_halfplane(subject: Sequence[Point], plane: HalfPlane) -> Polygon:
    """Sutherland–Hodgman pass keeping ca·a + cb·b <= k."""
    if not subject:
        return []
    ca, cb, k = plane

    def value(p: Point) -> Fraction:
        return ca * p[0] + cb * p[1] - k

    out: Polygon = []
    prev = subject[-1]
    prev_val = value(prev)
    for cur in subject:
        cur_val = value(cur)
        if cur_val <= 0:
            if prev_val > 0:
                out.append(_intersect(prev, cur, prev_val, cur_val))
            out.append(cur)
        elif prev_val <= 0:
            out.append(_intersect(prev, cur, prev_val, cur_val))
        prev, prev_val = cur, cur_val
    return simplify(out)


def _intersect(p: Point, q: Point, vp: Fraction, vq: Fraction) -> Point:
    s = vp / (vp - vq)
    return (p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1]))


def clip(subject: Sequence[Point], planes: Sequence[HalfPlane]) -> Polygon:
    """Clip against every half-plane in turn."""
    poly = simplify(subject)
    for plane in planes:
        poly = clip_halfplane(poly, plane)
        if not poly:
            return []
    return poly


def contains(poly: Sequence[Point], p: Point, strict: bool = False) -> bool:
    """Point-in-convex-polygon test for a counterclockwise polygon."""
    for u, v in segments(poly):
        c = _cross(u, v, p)
        if c < 0 or (strict and c == 0):
            return False
    return True
