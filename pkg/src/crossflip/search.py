"""Exact flip-graph search and strategy runners.

The flip graph on a point set has one node per perfect matching and one edge
per (crossing, reconnection choice); it is acyclic because total segment
length strictly decreases along every edge. Longest runs are computed by
memoized depth-first search over that DAG (with on-stack revisits treated as
fatal corruption, not as a result), shortest runs by breadth-first search
with canonical tie-breaking so witnesses are reproducible.
"""

from __future__ import annotations

import dataclasses
import random
import time
from collections import deque
from dataclasses import dataclass

from .generators import Instance, two_line_permutation
from .geometry import PointSet, seg
from .matching import (
    CrossingPair,
    FlipChoice,
    FlipTrace,
    Matching,
    apply_flip,
    choice_yielding,
    crossing_pair,
    crossings_after_flip,
    find_crossings,
    flip,
    is_noncrossing,
    trace_from_moves,
)
from .potentials import phi_lines, phi_vertical, x_ranks


class FlipGraphCycleError(RuntimeError):
    """A depth-first traversal revisited an on-stack matching.

    The flip graph is acyclic (length strictly decreases per flip), so this
    indicates corrupted state, never a legitimate search outcome.
    """


class SearchLimitsExceeded(RuntimeError):
    def __init__(self, message: str, states_expanded: int = 0,
                 best_bound: int | None = None):
        super().__init__(message)
        self.states_expanded = states_expanded
        #: For longest-run searches: a certified lower bound on the true
        #: value, never the value itself.
        self.best_bound = best_bound


class EnumerationCapExceeded(RuntimeError):
    pass


class StrategyNotApplicableError(RuntimeError):
    pass


@dataclass(frozen=True)
class SearchLimits:
    max_states: int = 10_000_000
    max_depth: int = 100_000
    time_budget: float = 60.0

    def __post_init__(self):
        if self.max_states <= 0 or self.max_depth <= 0 or self.time_budget <= 0:
            raise ValueError("all search limits must be positive")


def successors(
    ps: PointSet, m: Matching
) -> list[tuple[CrossingPair, FlipChoice, Matching]]:
    """All flip successors of m in canonical order: crossings sorted, choice
    A before choice B. Exactly 2 * (number of crossings) entries."""
    out = []
    for crossing in find_crossings(ps, m):
        for choice in (FlipChoice.RECONNECT_A, FlipChoice.RECONNECT_B):
            out.append((crossing, choice, apply_flip(ps, m, crossing, choice)))
    return out


def _longest_value(ps: PointSet, start: Matching, limits: SearchLimits,
                   memo: dict, stats: dict) -> int:
    """Longest-run value of ``start`` via iterative post-order DFS.

    ``memo`` maps a canonical matching to (value, best move); sharing it
    across start matchings makes whole-enumeration sweeps near-linear in the
    number of distinct matchings.
    """
    start_key = start.pairs
    if start_key in memo:
        return memo[start_key][0]
    deadline = time.monotonic() + limits.time_budget
    on_stack = {start_key}
    # frame: [matching, successors, next index, best value, best move]
    stack = [[start, successors(ps, start), 0, 0, None]]
    stats["expanded"] += 1
    while stack:
        frame = stack[-1]
        succ = frame[1]
        idx = frame[2]
        if idx < len(succ):
            crossing, choice, child = succ[idx]
            child_key = child.pairs
            hit = memo.get(child_key)
            if hit is not None:
                v = hit[0] + 1
                if v > frame[3]:
                    frame[3] = v
                    frame[4] = (crossing, choice)
                frame[2] += 1
            elif child_key in on_stack:
                raise FlipGraphCycleError(
                    f"matching revisited on the DFS stack: {child_key}"
                )
            else:
                if stats["expanded"] >= limits.max_states:
                    raise SearchLimitsExceeded(
                        f"state cap {limits.max_states} hit",
                        states_expanded=stats["expanded"],
                        best_bound=stats["best_lower"],
                    )
                if len(stack) >= limits.max_depth:
                    raise SearchLimitsExceeded(
                        f"depth cap {limits.max_depth} hit",
                        states_expanded=stats["expanded"],
                        best_bound=stats["best_lower"],
                    )
                if time.monotonic() > deadline:
                    raise SearchLimitsExceeded(
                        f"time budget {limits.time_budget}s exhausted",
                        states_expanded=stats["expanded"],
                        best_bound=stats["best_lower"],
                    )
                on_stack.add(child_key)
                stack.append([child, successors(ps, child), 0, 0, None])
                stats["expanded"] += 1
                # index not advanced: the child resolves via memo on resume
        else:
            stack.pop()
            m = frame[0]
            on_stack.discard(m.pairs)
            memo[m.pairs] = (frame[3], frame[4])
            # len(stack) is now the edge distance from start to m
            bound = len(stack) + frame[3]
            if bound > stats["best_lower"]:
                stats["best_lower"] = bound
    return memo[start_key][0]


def _moves_of_longest(ps: PointSet, start: Matching, memo: dict):
    moves = []
    m = start
    while True:
        _value, move = memo[m.pairs]
        if move is None:
            return moves
        moves.append(move)
        m = apply_flip(ps, m, *move)


def longest_flip_sequence(
    inst: Instance,
    limits: SearchLimits | None = None,
    stats_out: dict | None = None,
) -> tuple[int, FlipTrace]:
    """Exact length of the longest flip run from the instance's matching,
    with one witness trace attaining it.

    ``stats_out``, when given, receives the number of states expanded."""
    limits = limits or SearchLimits()
    memo: dict = {}
    stats = {"expanded": 0, "best_lower": 0}
    try:
        value = _longest_value(inst.points, inst.matching, limits, memo, stats)
    finally:
        if stats_out is not None:
            stats_out["states_expanded"] = stats["expanded"]
    moves = _moves_of_longest(inst.points, inst.matching, memo)
    trace = trace_from_moves(inst.provenance, inst.points, inst.matching, moves)
    return value, trace


def _reconstruct(parents: dict, final_key) -> list:
    moves = []
    key = final_key
    while parents[key] is not None:
        parent_key, crossing, choice = parents[key]
        moves.append((crossing, choice))
        key = parent_key
    moves.reverse()
    return moves


def _shortest_moves(
    ps: PointSet, start: Matching, limits: SearchLimits,
    stats_out: dict | None = None,
) -> list[tuple[CrossingPair, FlipChoice]]:
    if is_noncrossing(ps, start):
        return []
    deadline = time.monotonic() + limits.time_budget
    parents: dict = {start.pairs: None}
    if stats_out is not None:
        stats_out["states_expanded"] = 0
    queue = deque([start])
    while queue:
        m = queue.popleft()
        if time.monotonic() > deadline:
            raise SearchLimitsExceeded(
                f"time budget {limits.time_budget}s exhausted",
                states_expanded=len(parents),
            )
        for crossing, choice, child in successors(ps, m):
            child_key = child.pairs
            if child_key in parents:
                continue
            parents[child_key] = (m.pairs, crossing, choice)
            if stats_out is not None:
                stats_out["states_expanded"] = len(parents)
            if is_noncrossing(ps, child):
                return _reconstruct(parents, child_key)
            if len(parents) >= limits.max_states:
                raise SearchLimitsExceeded(
                    f"state cap {limits.max_states} hit",
                    states_expanded=len(parents),
                )
            queue.append(child)
    raise FlipGraphCycleError(
        "flip graph exhausted without reaching a non-crossing matching"
    )


def shortest_flip_sequence(
    inst: Instance,
    limits: SearchLimits | None = None,
    stats_out: dict | None = None,
) -> tuple[int, FlipTrace]:
    """Exact length of the shortest flip run from the instance's matching,
    with a shortest witness (deterministic tie-breaking by canonical
    successor order)."""
    limits = limits or SearchLimits()
    moves = _shortest_moves(inst.points, inst.matching, limits, stats_out)
    trace = trace_from_moves(inst.provenance, inst.points, inst.matching, moves)
    return len(moves), trace


def enumerate_all_matchings(ps: PointSet, cap: int = 5):
    """All (2n-1)!! perfect matchings of the point set, streamed in
    canonical order. Refuses point sets beyond the enumeration cap."""
    n = ps.n
    if n > cap:
        raise EnumerationCapExceeded(
            f"n={n} exceeds enumeration cap {cap}; (2n-1)!! growth"
        )

    def rec(avail: tuple[int, ...]):
        if not avail:
            yield ()
            return
        first = avail[0]
        for i in range(1, len(avail)):
            rest = avail[1:i] + avail[i + 1:]
            for tail in rec(rest):
                yield ((first, avail[i]),) + tail

    for pairs in rec(tuple(range(2 * n))):
        yield Matching(pairs)


@dataclass
class ExtremalEstimates:
    """Maxima of the longest- and shortest-run lengths over all matchings of
    one point set, with witnesses."""

    g_hat: int
    g_argmax: Matching
    g_witness: FlipTrace
    k_hat: int
    k_argmax: Matching
    k_witness: FlipTrace
    matchings_enumerated: int
    states_expanded: int
    per_matching: dict | None = None


def extremal_estimates(
    ps: PointSet,
    limits: SearchLimits | None = None,
    cap: int = 5,
    collect_per_matching: bool = False,
    instance_id: str = "enumeration",
) -> ExtremalEstimates:
    """Exact max longest-run and max shortest-run over every matching of ps.

    The longest-run memo is shared across the whole enumeration; reachable
    states overlap almost entirely between start matchings."""
    limits = limits or SearchLimits()
    memo: dict = {}
    stats = {"expanded": 0, "best_lower": 0}
    g_hat = -1
    k_hat = -1
    g_argmax = k_argmax = None
    per = {} if collect_per_matching else None
    count = 0
    for m in enumerate_all_matchings(ps, cap):
        count += 1
        f_val = _longest_value(ps, m, limits, memo, stats)
        h_val = len(_shortest_moves(ps, m, limits))
        if f_val > g_hat:
            g_hat, g_argmax = f_val, m
        if h_val > k_hat:
            k_hat, k_argmax = h_val, m
        if per is not None:
            per[m.pairs] = (f_val, h_val)
    g_moves = _moves_of_longest(ps, g_argmax, memo)
    k_moves = _shortest_moves(ps, k_argmax, limits)
    return ExtremalEstimates(
        g_hat=g_hat,
        g_argmax=g_argmax,
        g_witness=trace_from_moves(instance_id, ps, g_argmax, g_moves),
        k_hat=k_hat,
        k_argmax=k_argmax,
        k_witness=trace_from_moves(instance_id, ps, k_argmax, k_moves),
        matchings_enumerated=count,
        states_expanded=stats["expanded"],
        per_matching=per,
    )


# --- strategies -----------------------------------------------------------

STRATEGY_KINDS = ("greedy-x", "bubble", "random", "first", "adversary")
ADVERSARY_KINDS = ("random", "first", "max-damage")


@dataclass(frozen=True)
class Strategy:
    """A crossing/choice selection policy for strategy runs.

    kinds: ``greedy-x`` takes the canonically first crossing and reconnects
    its endpoints as (two x-leftmost)(two x-rightmost); ``bubble`` flips an
    adjacent inversion of the permutation encoded by a two-line matching;
    ``random`` picks uniformly; ``first`` takes the first crossing with
    choice A; ``adversary`` lets a sub-policy impose the crossing while the
    response is always the x-greedy choice.
    """

    kind: str
    seed: int = 0
    adversary: str | None = None

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if self.kind == "adversary":
            if self.adversary not in ADVERSARY_KINDS:
                raise ValueError(f"unknown adversary kind {self.adversary!r}")
        elif self.adversary is not None:
            raise ValueError("only adversary strategies take an adversary kind")


def parse_strategy(text: str) -> Strategy:
    """Parse CLI-style strategy text such as ``greedy-x``, ``random:7`` or
    ``adversary:max-damage``."""
    parts = text.split(":")
    kind = parts[0]
    if kind == "adversary":
        if len(parts) < 2:
            raise ValueError("adversary strategy needs a kind, e.g. adversary:random")
        seed = int(parts[2]) if len(parts) > 2 else 0
        return Strategy("adversary", seed=seed, adversary=parts[1])
    seed = int(parts[1]) if len(parts) > 1 else 0
    return Strategy(kind, seed=seed)


def greedy_choice(ps: PointSet, crossing: CrossingPair) -> FlipChoice:
    """The choice pairing the two x-leftmost endpoints together and the two
    x-rightmost together.

    The crossing segments interleave in x, so this pairing is never the pair
    being removed; it is always one of the two reconnections.
    """
    (a, b), (c, d) = crossing
    quad = sorted((a, b, c, d), key=lambda i: ps[i].x)
    if len({ps[i].x for i in quad}) != 4:
        raise StrategyNotApplicableError(
            "x-greedy reconnection needs distinct x among the four endpoints"
        )
    target = (seg(quad[0], quad[1]), seg(quad[2], quad[3]))
    return choice_yielding(ps, crossing, target)


def _middle_gap(ps: PointSet, crossing: CrossingPair) -> int:
    """Number of x-gaps strictly between the 2nd and 3rd endpoint in x-order;
    the greedy flip lowers the vertical potential by exactly twice this."""
    ranks = x_ranks(ps)
    (a, b), (c, d) = crossing
    r = sorted(ranks[i] for i in (a, b, c, d))
    return r[2] - r[1]


def _bubble_move(ps, inst, m):
    n = inst.n
    pi = two_line_permutation(m, n)
    if pi is None:
        raise StrategyNotApplicableError(
            "matching pairs points within one row; the bubble strategy only "
            "handles bottom-to-top matchings"
        )
    for i in range(n - 1):
        if pi[i] > pi[i + 1]:
            crossing = crossing_pair(seg(i, n + pi[i]), seg(i + 1, n + pi[i + 1]))
            target = (seg(i, n + pi[i + 1]), seg(i + 1, n + pi[i]))
            return crossing, choice_yielding(ps, crossing, target)
    raise StrategyNotApplicableError("no adjacent inversion left, yet crossings remain")


def _pick(strategy, ps, inst, m, crossings, rng, restrict_choice):
    if strategy.kind == "greedy-x":
        crossing = crossings[0]
        return crossing, greedy_choice(ps, crossing)
    if strategy.kind == "first":
        return crossings[0], restrict_choice or FlipChoice.RECONNECT_A
    if strategy.kind == "random":
        crossing = rng.choice(crossings)
        choice = restrict_choice or rng.choice(
            (FlipChoice.RECONNECT_A, FlipChoice.RECONNECT_B)
        )
        return crossing, choice
    if strategy.kind == "bubble":
        return _bubble_move(ps, inst, m)
    # adversary imposes the crossing, the response is always x-greedy
    if strategy.adversary == "random":
        crossing = rng.choice(crossings)
    elif strategy.adversary == "first":
        crossing = crossings[0]
    else:
        # max-damage: leave the smallest guaranteed potential drop; min takes
        # the canonically first crossing on ties
        crossing = min(crossings, key=lambda c: _middle_gap(ps, c))
    return crossing, greedy_choice(ps, crossing)


def run_strategy(
    inst: Instance,
    strategy: Strategy,
    max_steps: int | None = None,
    with_phi_lines: bool = False,
    restrict_choice: FlipChoice | None = None,
) -> FlipTrace:
    """Flip per the strategy until non-crossing or the step cap.

    Every record carries the vertical potential before/after whenever the
    point set has distinct x-coordinates; the line potential is attached
    only on request (it costs O(n^3) per step). A run stopped by the step
    cap is returned with ``complete=False``, not raised.
    """
    ps = inst.points
    n = inst.n
    if max_steps is None:
        max_steps = 4 * n**3  # comfortably above any possible run length
    if strategy.kind in ("greedy-x", "adversary") and not ps.has_distinct_x():
        raise StrategyNotApplicableError(
            "x-greedy reconnection needs pairwise distinct x; apply "
            "shear_to_distinct_x first"
        )
    if strategy.kind == "bubble" and not inst.provenance.startswith("two-line"):
        raise StrategyNotApplicableError(
            "the bubble strategy only applies to two-line instances"
        )
    if restrict_choice is not None and strategy.kind not in ("random", "first"):
        raise StrategyNotApplicableError(
            "a fixed-choice regime only combines with 'random' or 'first'; "
            "other strategies own their reconnection choice"
        )
    rng = random.Random(strategy.seed)
    track_k = ps.has_distinct_x()

    m = inst.matching
    crossings = find_crossings(ps, m)
    records = []
    phi_k_now = phi_vertical(ps, m) if track_k else None
    phi_l_now = phi_lines(ps, m) if with_phi_lines else None
    while crossings and len(records) < max_steps:
        crossing, choice = _pick(
            strategy, ps, inst, m, crossings, rng, restrict_choice
        )
        m2, rec = flip(ps, m, crossing, choice)
        crossings = crossings_after_flip(ps, m2, crossings, crossing, rec.added)
        phi_k_after = phi_vertical(ps, m2) if track_k else None
        phi_l_after = phi_lines(ps, m2) if with_phi_lines else None
        rec = dataclasses.replace(
            rec,
            crossings_after=len(crossings),
            phi_k_before=phi_k_now,
            phi_k_after=phi_k_after,
            phi_l_before=phi_l_now,
            phi_l_after=phi_l_after,
        )
        records.append(rec)
        m = m2
        phi_k_now = phi_k_after
        phi_l_now = phi_l_after
    return FlipTrace(
        inst.provenance, inst.matching, tuple(records), m,
        complete=not crossings,
    )
