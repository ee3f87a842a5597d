"""Exact integer predicates over planar point sets.

Every geometric decision in this package routes through the functions here.
All predicates are computed in integer arithmetic, so there is no epsilon
tuning and no inconsistent answer anywhere downstream.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, NamedTuple

#: Coordinate budget. With |x|, |y| <= 2**20 every 3x3 orientation
#: determinant is bounded by 8 * 2**40 < 2**63, so the predicates stay exact
#: even in fixed-width 64-bit arithmetic.
COORD_LIMIT = 2**20


class CoordinateOverflowError(ValueError):
    """A coordinate left the |x|, |y| <= COORD_LIMIT budget."""


class Point(NamedTuple):
    x: int
    y: int


#: A segment is an ordered pair of point indices with the smaller index first.
Segment = tuple[int, int]


def seg(a: int, b: int) -> Segment:
    """Normalized segment between point indices a and b."""
    if a == b:
        raise ValueError(f"degenerate segment ({a}, {b})")
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class PointSet:
    """An ordered tuple of 2n integer points; position in the tuple is identity.

    Construction enforces only the size and coordinate budget. General
    position is a separate check (``validate_general_position``) so that
    degenerate inputs can be diagnosed rather than rejected blindly.
    """

    points: tuple[Point, ...]

    def __post_init__(self) -> None:
        if len(self.points) < 2 or len(self.points) % 2 != 0:
            raise ValueError("a point set holds 2n points with n >= 1")
        for i, p in enumerate(self.points):
            if abs(p.x) > COORD_LIMIT or abs(p.y) > COORD_LIMIT:
                raise CoordinateOverflowError(
                    f"point {i} = ({p.x}, {p.y}) exceeds |coord| <= {COORD_LIMIT}"
                )

    @classmethod
    def from_coords(cls, coords: Iterable[tuple[int, int]]) -> "PointSet":
        return cls(tuple(Point(int(x), int(y)) for x, y in coords))

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i: int) -> Point:
        return self.points[i]

    def __iter__(self):
        return iter(self.points)

    @property
    def n(self) -> int:
        """Number of segments a perfect matching on this set has."""
        return len(self.points) // 2

    def has_distinct_x(self) -> bool:
        return len({p.x for p in self.points}) == len(self.points)


def orient(p: Point, q: Point, r: Point) -> int:
    """Sign of the signed area of triangle (p, q, r).

    +1 for a counterclockwise turn, -1 for clockwise, 0 for collinear.
    """
    d = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    return (d > 0) - (d < 0)


def segments_properly_cross(ps: PointSet, s: Segment, t: Segment) -> bool:
    """True iff segments s and t meet in exactly one point interior to both.

    The segments must not share an endpoint index; that case is a caller bug,
    not a geometric question. Under general position, endpoint touching and
    overlap cannot occur, so a strict two-way straddle test is exact.
    """
    a, b = s
    c, d = t
    if a == c or a == d or b == c or b == d:
        raise ValueError(f"segments {s} and {t} share an endpoint")
    pa, pb, pc, pd = ps[a], ps[b], ps[c], ps[d]
    return (
        orient(pa, pb, pc) * orient(pa, pb, pd) < 0
        and orient(pc, pd, pa) * orient(pc, pd, pb) < 0
    )


def validate_general_position(ps: PointSet) -> tuple[int, ...] | None:
    """None when all points are distinct and no three are collinear.

    Otherwise the first offending index pair (duplicate points) or triple
    (collinear points), scanning index combinations in lexicographic order.
    Duplicates are reported before collinearities.
    """
    pts = ps.points
    m = len(pts)
    for i in range(m):
        for j in range(i + 1, m):
            if pts[i] == pts[j]:
                return (i, j)
    for i in range(m):
        for j in range(i + 1, m):
            for k in range(j + 1, m):
                if orient(pts[i], pts[j], pts[k]) == 0:
                    return (i, j, k)
    return None


def shear_to_distinct_x(ps: PointSet) -> PointSet:
    """Shear the set so all x-coordinates become pairwise distinct.

    Returns ``ps`` unchanged when its x-coordinates are already distinct.
    Otherwise applies (x, y) -> (x*c + y, y) with c = 1 + 2*max|y|. The map
    has positive determinant, so every orientation sign, every crossing and
    every flip is preserved; distinctness follows because |c*(x1-x2)| > |y2-y1|
    whenever x1 != x2, while x1 == x2 forces y1 != y2.

    Raises CoordinateOverflowError when the image leaves the coordinate budget.
    """
    if ps.has_distinct_x():
        return ps
    c = 1 + 2 * max(abs(p.y) for p in ps)
    return PointSet(tuple(Point(p.x * c + p.y, p.y) for p in ps))


def ccw_quad_order(ps: PointSet, indices: Iterable[int]) -> tuple[int, int, int, int]:
    """Four point indices in counterclockwise convex order, starting at the
    lowest index.

    Valid for quads in convex position (the endpoints of any proper crossing
    are). The three non-base vertices of a convex quad lie in an open
    half-plane wedge at the base vertex, so sorting them by orientation
    around the base is a strict total order.
    """
    quad = list(indices)
    if len(quad) != 4 or len(set(quad)) != 4:
        raise ValueError(f"need 4 distinct point indices, got {quad}")
    base = min(quad)
    bp = ps[base]
    rest = [i for i in quad if i != base]
    rest.sort(
        key=functools.cmp_to_key(lambda a, b: -orient(bp, ps[a], ps[b]))
    )
    return (base, rest[0], rest[1], rest[2])


def convex_position_ccw(ps: PointSet, ordered: tuple[int, int, int, int]) -> bool:
    """True iff the four points, taken in the given cyclic order, form a
    strictly convex counterclockwise quadrilateral."""
    q1, q2, q3, q4 = ordered
    return (
        orient(ps[q1], ps[q2], ps[q3]) > 0
        and orient(ps[q2], ps[q3], ps[q4]) > 0
        and orient(ps[q3], ps[q4], ps[q1]) > 0
        and orient(ps[q4], ps[q1], ps[q2]) > 0
    )
