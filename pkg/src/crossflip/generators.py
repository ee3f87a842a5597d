"""Instance builders: the two worst-case families and seeded random instances.

Every generator certifies its output. General position is validated after
construction, the two-line family additionally re-verifies that segment
crossings coincide with permutation inversions, and the convex family
re-verifies strict convexity. A generator that cannot certify raises
GenerationError instead of returning a doubtful instance.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import combinations

from .geometry import (
    Point,
    PointSet,
    orient,
    seg,
    segments_properly_cross,
    validate_general_position,
)
from .matching import Matching


class GenerationError(RuntimeError):
    """A generator could not produce a certified instance."""


@dataclass(frozen=True)
class Instance:
    """A point set with a starting matching and provenance metadata."""

    points: PointSet
    matching: Matching
    provenance: str
    notes: str = ""

    def __post_init__(self):
        if self.matching.size * 2 != len(self.points):
            raise ValueError(
                f"matching of size {self.matching.size} does not cover "
                f"{len(self.points)} points"
            )
        violation = validate_general_position(self.points)
        if violation is not None:
            kind = "duplicate points" if len(violation) == 2 else "collinear points"
            raise ValueError(f"{kind} at indices {violation}")

    @property
    def n(self) -> int:
        return self.points.n


def identity_perm(n: int) -> tuple[int, ...]:
    return tuple(range(n))


def reverse_perm(n: int) -> tuple[int, ...]:
    return tuple(range(n - 1, -1, -1))


def inversion_count(perm) -> int:
    """Number of pairs i < j with perm[i] > perm[j]."""
    inv = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                inv += 1
    return inv


def _check_permutation(perm) -> tuple[int, ...]:
    pi = tuple(int(v) for v in perm)
    if sorted(pi) != list(range(len(pi))):
        raise ValueError(f"{perm} is not a permutation of 0..{len(pi) - 1}")
    return pi


#: Index convention for two-line instances: points 0..n-1 are the bottom row
#: in increasing x, points n..2n-1 the top row in increasing x. Segment
#: (i, n+j) encodes the permutation entry i -> j.
def two_line_permutation(m: Matching, n: int) -> list[int] | None:
    """The permutation a bottom-to-top matching encodes, or None if some
    pair stays within one row."""
    pi = [-1] * n
    for a, b in m.pairs:
        if a < n <= b:
            pi[a] = b - n
        else:
            return None
    return pi


def _verify_two_line_crossings(ps: PointSet, n: int) -> None:
    # Every bottom-to-top segment pair must cross exactly when the bottom
    # order and top order disagree; bubble-style strategies rely on this for
    # every matching reachable on these points, not just the initial one.
    # The quadruple scan is O(n^4); past n = 24 fall back to spot checks on
    # all pairs through consecutive bottom points.
    bottoms = range(n) if n <= 24 else []
    for i, j in combinations(bottoms, 2):
        for k in range(n):
            for l in range(n):
                if k == l:
                    continue
                got = segments_properly_cross(ps, seg(i, n + k), seg(j, n + l))
                if got != (k > l):
                    raise GenerationError(
                        f"two-line geometry broke the inversion law for "
                        f"bottoms ({i}, {j}) tops ({k}, {l})"
                    )
    if n > 24:
        for i in range(n - 1):
            for k in range(n):
                for l in range(n):
                    if k == l:
                        continue
                    got = segments_properly_cross(
                        ps, seg(i, n + k), seg(i + 1, n + l)
                    )
                    if got != (k > l):
                        raise GenerationError(
                            f"two-line geometry broke the inversion law for "
                            f"bottoms ({i}, {i + 1}) tops ({k}, {l})"
                        )


def gen_two_line(perm) -> Instance:
    """Two near-horizontal rows of n points, matched by a permutation.

    Bottom point i sits at (4n*i, i^2), top point j at (4n*j + 1, D - j^2)
    with D = 32n^2: the rows are opposite shallow parabolic arcs, so no three
    points within a row are ever collinear, and the row separation dwarfs the
    arc heights so cross-row collinearity cannot occur either. The +1 stagger
    on the top row keeps all 2n x-coordinates pairwise distinct. The matching
    crosses exactly at the permutation's inversions, which is re-verified
    here rather than assumed.
    """
    pi = _check_permutation(perm)
    n = len(pi)
    if n < 1:
        raise ValueError("need n >= 1")
    s = 4 * n
    d = 8 * n * s
    coords = [(s * i, i * i) for i in range(n)]
    coords += [(s * j + 1, d - j * j) for j in range(n)]
    try:
        ps = PointSet.from_coords(coords)
    except ValueError as exc:
        raise GenerationError(f"two-line n={n}: {exc}") from exc
    violation = validate_general_position(ps)
    if violation is not None:
        raise GenerationError(f"two-line n={n} degenerate at {violation}")
    _verify_two_line_crossings(ps, n)
    matching = Matching.from_pairs([(i, n + pi[i]) for i in range(n)])
    return Instance(ps, matching, f"two-line(perm={list(pi)})")


def gen_convex(n: int) -> Instance:
    """2n points in strictly convex position with the nested worst-case
    matching for the shortest-run lower bound.

    Points sit counterclockwise on a radius-2^16 circle, snapped to the
    integer grid, with a fixed rotation so that x-coordinates come out
    pairwise distinct (mirror-symmetric angles would collide). Snapping can
    in principle create degeneracies, so the construction validates and
    retries with deterministic angle nudges.

    The matching pairs point 0 with point n, and point i with point 2n - i
    for 0 < i < n: one long chord crossed by n - 1 mutually nested chords.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    m = 2 * n
    radius = 2**16
    last_violation = None
    for attempt in range(64):
        coords = []
        for k in range(m):
            theta = 2 * math.pi * k / m + 1 / 7 + attempt * 0.0137
            coords.append(
                (round(radius * math.cos(theta)), round(radius * math.sin(theta)))
            )
        ps = PointSet.from_coords(coords)
        last_violation = validate_general_position(ps)
        if last_violation is not None:
            continue
        if not ps.has_distinct_x():
            last_violation = "duplicate x-coordinates"
            continue
        if m > 2 and not all(
            orient(ps[k], ps[(k + 1) % m], ps[(k + 2) % m]) > 0 for k in range(m)
        ):
            last_violation = "not strictly convex"
            continue
        pairs = [(0, n)] + [(i, 2 * n - i) for i in range(1, n)]
        return Instance(ps, Matching.from_pairs(pairs), f"convex(n={n})")
    raise GenerationError(
        f"convex n={n}: no valid snap after 64 nudges (last: {last_violation})"
    )


def gen_random(n: int, seed: int, bbox: tuple[int, int] = (0, 512)) -> Instance:
    """2n integer points sampled uniformly in bbox^2, in general position,
    with a uniformly random perfect matching. Deterministic given the seed.

    Each candidate point is rejected if it duplicates an existing point or
    is collinear with an existing pair; a bounded rejection budget turns a
    hopeless bbox into an error instead of a hang.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    lo, hi = int(bbox[0]), int(bbox[1])
    if lo >= hi:
        raise ValueError(f"bbox {bbox} is empty")
    rng = random.Random(seed)
    pts: list[Point] = []
    budget = 4000 * n
    draws = 0
    while len(pts) < 2 * n:
        if draws >= budget:
            raise GenerationError(
                f"rejection budget exhausted after {draws} draws; bbox {bbox} "
                f"too small for {2 * n} points in general position"
            )
        draws += 1
        cand = Point(rng.randint(lo, hi), rng.randint(lo, hi))
        if cand in pts:
            continue
        if any(
            orient(pts[i], pts[j], cand) == 0
            for i, j in combinations(range(len(pts)), 2)
        ):
            continue
        pts.append(cand)
    order = list(range(2 * n))
    rng.shuffle(order)
    matching = Matching.from_pairs(
        [(order[2 * i], order[2 * i + 1]) for i in range(n)]
    )
    return Instance(
        PointSet(tuple(pts)),
        matching,
        f"random(n={n}, seed={seed}, bbox=[{lo}, {hi}])",
    )
