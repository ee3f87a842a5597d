"""Two integer potential functions that certify flip-process termination.

``phi_lines`` counts crossings between matching segments and a family of
perturbed supporting lines: for every pair of points, the two lines
infinitesimally to either side of the line through them. It drops by at
least 4 under every flip, giving the cubic cap on the longest run.

``phi_vertical`` counts crossings between matching segments and the vertical
lines separating consecutive points in x-order. It never increases under any
flip and drops by at least 2 when the reconnection pairs the two x-leftmost
endpoints together (the x-greedy choice), giving the quadratic cap on the
shortest run.

Perturbed lines are represented symbolically by (anchor pair, side); the
infinitesimal offset is simulated exactly by an adjusted-sign rule, so no
epsilon ever appears.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import NamedTuple

from .geometry import (
    PointSet,
    Segment,
    ccw_quad_order,
    convex_position_ccw,
    orient,
)
from .matching import (
    CrossingPair,
    FlipChoice,
    Matching,
    reconnection_pairs,
)


class PotentialInvariantError(RuntimeError):
    """A per-line intersection count increased across a flip.

    This cannot happen for a genuine crossing; seeing it means corrupt input
    or an internal bug, so it is fatal rather than a reported result.
    """


class Side(IntEnum):
    """Which of the two infinitesimal offsets of a supporting line."""

    PLUS = 1
    MINUS = -1


class PerturbedLine(NamedTuple):
    """The line through points a < b, offset infinitesimally to ``side``.

    A point strictly on the positive orientation side of (a, b) keeps sign
    +1; the anchor points themselves, which sit on the unperturbed line, fall
    to the side opposite the offset and are assigned -side.
    """

    a: int
    b: int
    side: Side


class LineType(Enum):
    """How a line splits the four endpoints of a crossing.

    L1 separates the choice-A reconnection pairs from each other, L2 the
    choice-B pairs, L3 one point from the other three. Lines missing the
    quad entirely are NO_INTERSECT. A 2+2 split along the diagonals is
    impossible: the diagonals cross, so no line separates them.
    """

    L1 = "L1"
    L2 = "L2"
    L3 = "L3"
    NO_INTERSECT = "none"


@functools.lru_cache(maxsize=32)
def _sign_table(ps: PointSet) -> dict[tuple[int, int], tuple[int, ...]]:
    """orient(a, b, r) for every anchor pair a < b and every point r."""
    pts = ps.points
    m = len(pts)
    table = {}
    for a in range(m):
        for b in range(a + 1, m):
            pa, pb = pts[a], pts[b]
            table[(a, b)] = tuple(orient(pa, pb, r) for r in pts)
    return table


@functools.lru_cache(maxsize=32)
def x_ranks(ps: PointSet) -> tuple[int, ...]:
    """Rank of each point in x-sorted order; requires pairwise distinct x."""
    xs = [p.x for p in ps]
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate x-coordinates; shear_to_distinct_x first")
    ranks = [0] * len(xs)
    for r, i in enumerate(sorted(range(len(xs)), key=xs.__getitem__)):
        ranks[i] = r
    return tuple(ranks)


def perturbed_lines(ps: PointSet):
    """All 2 * C(2n, 2) perturbed supporting lines of the point set."""
    m = len(ps)
    for a in range(m):
        for b in range(a + 1, m):
            yield PerturbedLine(a, b, Side.PLUS)
            yield PerturbedLine(a, b, Side.MINUS)


def crosses_perturbed_line(ps: PointSet, line: PerturbedLine, s: Segment) -> bool:
    """True iff segment s crosses the perturbed line.

    The segment's endpoints get their orientation signs relative to the
    anchor pair, with on-line points (the anchors themselves) adjusted to
    -side; the segment crosses exactly when the adjusted signs differ.
    """
    signs = _sign_table(ps)[(line.a, line.b)]
    u, v = s
    return (signs[u] or -line.side) != (signs[v] or -line.side)


def phi_lines(ps: PointSet, m: Matching) -> int:
    """Crossing count between all perturbed lines and all matching segments.

    Bounded by 4n^3 (2 * C(2n,2) lines times at most one crossing per
    segment, counted against the 2n points); the sharper form is
    2 * C(2n,2) * n.
    """
    table = _sign_table(ps)
    total = 0
    for signs in table.values():
        for side in (1, -1):
            for u, v in m.pairs:
                if (signs[u] or -side) != (signs[v] or -side):
                    total += 1
    return total


def phi_lines_bound(n: int) -> int:
    """The stated cubic cap on phi_lines."""
    return 4 * n**3


def phi_lines_bound_sharp(n: int) -> int:
    """|lines| * n: each of the 2*C(2n,2) lines crosses each segment at most once."""
    return 2 * (2 * n) * (2 * n - 1) // 2 * n


def phi_vertical(ps: PointSet, m: Matching) -> int:
    """Crossing count between the 2n-1 vertical gap lines and the matching.

    Gap g sits strictly between the g-th and (g+1)-th points in x-order; a
    segment crosses it iff its endpoints' x-ranks straddle the gap.
    Equivalently this is the sum over segments of |xrank(a) - xrank(b)|.
    Requires pairwise distinct x-coordinates.
    """
    ranks = x_ranks(ps)
    total = 0
    for g in range(len(ps) - 1):
        for u, v in m.pairs:
            ru, rv = ranks[u], ranks[v]
            if ru > rv:
                ru, rv = rv, ru
            if ru <= g < rv:
                total += 1
    return total


def phi_vertical_bound(n: int) -> int:
    """n^2: the maximum of phi_vertical over all pairings of 2n x-ranks."""
    return n * n


def phi_vertical_bound_gaps(n: int) -> int:
    """(2n-1) * n: one crossing per gap line per segment, the trivial cap."""
    return (2 * n - 1) * n


def classify_line_vs_quad(
    ps: PointSet, line: PerturbedLine, quad
) -> LineType:
    """Combinatorial type of a perturbed line against a crossing's four
    endpoints.

    ``quad`` is any ordering of the four endpoint indices; they must be in
    convex position (always true for a genuine crossing).
    """
    order = ccw_quad_order(ps, quad)
    if not convex_position_ccw(ps, order):
        raise ValueError(f"quad {tuple(quad)} is not in convex position")
    signs = _sign_table(ps)[(line.a, line.b)]
    adj = [(signs[q] or -line.side) for q in order]
    total = sum(adj)
    if total in (4, -4):
        return LineType.NO_INTERSECT
    if total in (2, -2):
        return LineType.L3
    if adj[0] == adj[1]:
        return LineType.L1
    if adj[1] == adj[2]:
        return LineType.L2
    raise PotentialInvariantError(
        f"line {line} splits quad {order} along its diagonals"
    )


@dataclass(frozen=True)
class LineAudit:
    """Per-line detail of a hypothetical flip's effect."""

    line: PerturbedLine
    line_type: LineType
    delta: int


@dataclass(frozen=True)
class DecrementAudit:
    """Dry-run accounting of one flip's effect on both potentials.

    ``delta_phi_l`` is exact and always <= -4. ``delta_phi_k`` is None when
    the point set has duplicate x-coordinates. ``lines`` holds per-line
    detail only when requested.
    """

    crossing: CrossingPair
    choice: FlipChoice
    added: tuple[Segment, Segment]
    line_type_counts: dict[LineType, int]
    delta_phi_l: int
    phi_l_before: int
    phi_l_after: int
    delta_phi_k: int | None
    phi_k_before: int | None
    phi_k_after: int | None
    lines: tuple[LineAudit, ...] | None = None

    def to_json_dict(self) -> dict:
        doc = {
            "crossing": [f"{a}-{b}" for a, b in self.crossing],
            "choice": self.choice.value,
            "added": [f"{a}-{b}" for a, b in self.added],
            "line_type_counts": {
                t.value: self.line_type_counts.get(t, 0) for t in LineType
            },
            "delta_phi_l": self.delta_phi_l,
            "phi_l_before": self.phi_l_before,
            "phi_l_after": self.phi_l_after,
            "delta_phi_k": self.delta_phi_k,
            "phi_k_before": self.phi_k_before,
            "phi_k_after": self.phi_k_after,
        }
        if self.lines is not None:
            doc["lines"] = [
                {
                    "anchor": f"{la.line.a}-{la.line.b}",
                    "side": "plus" if la.line.side is Side.PLUS else "minus",
                    "type": la.line_type.value,
                    "delta": la.delta,
                }
                for la in self.lines
            ]
        return doc


def decrement_audit(
    ps: PointSet,
    m: Matching,
    crossing: CrossingPair,
    choice: FlipChoice,
    detail: bool = False,
    phi_l_before: int | None = None,
) -> DecrementAudit:
    """Account for a hypothetical flip without mutating anything.

    For every perturbed line, the crossing count restricted to the two
    segments the flip changes is compared before/after; any increase raises
    PotentialInvariantError. ``phi_l_before`` may be passed by callers that
    track the potential incrementally, saving the full recount.
    """
    e1, e2 = crossing
    added = reconnection_pairs(ps, crossing, choice)
    n1, n2 = added
    quad_order = ccw_quad_order(ps, (*e1, *e2))
    if not convex_position_ccw(ps, quad_order):
        raise ValueError(f"crossing {crossing} endpoints not in convex position")

    table = _sign_table(ps)
    counts = {t: 0 for t in LineType}
    delta_l = 0
    entries = [] if detail else None
    for anchor, signs in table.items():
        for side in (1, -1):
            adj = [(signs[q] or -side) for q in quad_order]
            total = adj[0] + adj[1] + adj[2] + adj[3]
            if total in (4, -4):
                line_type = LineType.NO_INTERSECT
            elif total in (2, -2):
                line_type = LineType.L3
            elif adj[0] == adj[1]:
                line_type = LineType.L1
            elif adj[1] == adj[2]:
                line_type = LineType.L2
            else:
                raise PotentialInvariantError(
                    f"line {anchor}/{side} splits quad {quad_order} along "
                    "its diagonals"
                )
            counts[line_type] += 1

            before = (
                ((signs[e1[0]] or -side) != (signs[e1[1]] or -side))
                + ((signs[e2[0]] or -side) != (signs[e2[1]] or -side))
            )
            after = (
                ((signs[n1[0]] or -side) != (signs[n1[1]] or -side))
                + ((signs[n2[0]] or -side) != (signs[n2[1]] or -side))
            )
            d = after - before
            if d > 0:
                raise PotentialInvariantError(
                    f"line {anchor}/{side} gained intersections across flip "
                    f"of {crossing}"
                )
            delta_l += d
            if entries is not None:
                entries.append(
                    LineAudit(
                        PerturbedLine(anchor[0], anchor[1], Side(side)),
                        line_type,
                        d,
                    )
                )

    if phi_l_before is None:
        phi_l_before = phi_lines(ps, m)

    if ps.has_distinct_x():
        ranks = x_ranks(ps)

        def span(s):
            return abs(ranks[s[0]] - ranks[s[1]])

        delta_k = span(n1) + span(n2) - span(e1) - span(e2)
        phi_k_before = phi_vertical(ps, m)
        phi_k_after = phi_k_before + delta_k
    else:
        delta_k = phi_k_before = phi_k_after = None

    return DecrementAudit(
        crossing=crossing,
        choice=choice,
        added=added,
        line_type_counts=counts,
        delta_phi_l=delta_l,
        phi_l_before=phi_l_before,
        phi_l_after=phi_l_before + delta_l,
        delta_phi_k=delta_k,
        phi_k_before=phi_k_before,
        phi_k_after=phi_k_after,
        lines=tuple(entries) if entries is not None else None,
    )
