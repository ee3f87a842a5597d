import math
import random
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crossflip import (
    FlipChoice,
    FlipError,
    Matching,
    PointSet,
    ReplayError,
    apply_flip,
    choice_yielding,
    crossings_after_flip,
    find_crossings,
    flip,
    gen_random,
    gen_two_line,
    is_noncrossing,
    reconnection_pairs,
    replay,
    seg,
    total_length,
    trace_from_moves,
)
from crossflip.scenarios import (
    REAPPEARING_SEGMENT,
    reappearing_segment_instance,
    reappearing_segment_moves,
    reappearing_segment_trace,
)

SQUARE = PointSet.from_coords([(0, 0), (2, 0), (2, 2), (0, 2)])
DIAGONALS = Matching.from_pairs([(0, 2), (1, 3)])


def test_canonical_form():
    m = Matching.from_pairs([(3, 1), (2, 0)])
    assert m.pairs == ((0, 2), (1, 3))


def test_imperfect_matchings_rejected():
    with pytest.raises(ValueError):
        Matching.from_pairs([(0, 1), (1, 2)])
    with pytest.raises(ValueError):
        Matching.from_pairs([(0, 1), (3, 4)])


def test_canonicalization_injective_up_to_n4():
    # every distinct pairing of 8 points keeps a distinct canonical form
    seen = set()
    count = 0

    def pairings(avail):
        if not avail:
            yield []
            return
        first = avail[0]
        for i in range(1, len(avail)):
            for rest in pairings(avail[1:i] + avail[i + 1:]):
                yield [(avail[i], first)] + rest

    for raw in pairings(list(range(8))):
        seen.add(Matching.from_pairs(raw).pairs)
        count += 1
    assert count == 105 and len(seen) == 105


def test_find_crossings_fig_six():
    inst = reappearing_segment_instance()
    crossings = find_crossings(inst.points, inst.matching)
    assert len(crossings) == 3  # all three pairs cross
    assert crossings == sorted(crossings)


def test_find_crossings_empty_and_two_line():
    inst = reappearing_segment_instance()
    final = Matching.from_pairs([(0, 1), (2, 3), (4, 5)])
    assert find_crossings(inst.points, final) == []
    rev2 = gen_two_line((1, 0))
    assert len(find_crossings(rev2.points, rev2.matching)) == 1


def test_square_flip_choice_a_gives_sides():
    crossing = find_crossings(SQUARE, DIAGONALS)[0]
    m2, rec = flip(SQUARE, DIAGONALS, crossing, FlipChoice.RECONNECT_A)
    assert m2.pairs == ((0, 1), (2, 3))
    assert rec.length_before == pytest.approx(4 * math.sqrt(2))
    assert rec.length_after == pytest.approx(4.0)


def test_fig_six_flip_choices():
    inst = reappearing_segment_instance()
    crossing = (seg(1, 4), seg(2, 3))
    b = choice_yielding(inst.points, crossing, (seg(1, 2), seg(3, 4)))
    m2 = apply_flip(inst.points, inst.matching, crossing, b)
    assert m2.pairs == ((0, 5), (1, 2), (3, 4))
    other = (
        FlipChoice.RECONNECT_A if b is FlipChoice.RECONNECT_B
        else FlipChoice.RECONNECT_B
    )
    added = reconnection_pairs(inst.points, crossing, other)
    assert added == (seg(1, 3), seg(2, 4))
    assert not inst.points[added[0][0]] == inst.points[added[1][0]]
    from crossflip import segments_properly_cross
    assert not segments_properly_cross(inst.points, *added)


def test_flip_rejects_stale_and_noncrossing_pairs():
    with pytest.raises(FlipError, match="not part"):
        flip(SQUARE, DIAGONALS, (seg(0, 1), seg(2, 3)), FlipChoice.RECONNECT_A)
    sides = Matching.from_pairs([(0, 1), (2, 3)])
    with pytest.raises(FlipError, match="do not cross"):
        flip(SQUARE, sides, (seg(0, 1), seg(2, 3)), FlipChoice.RECONNECT_A)


def test_total_length():
    ps = PointSet.from_coords([(0, 0), (3, 4)])
    assert total_length(ps, Matching.from_pairs([(0, 1)])) == 5.0
    assert total_length(SQUARE, DIAGONALS) == pytest.approx(4 * math.sqrt(2))


def test_is_noncrossing():
    inst = reappearing_segment_instance()
    assert not is_noncrossing(inst.points, inst.matching)
    assert is_noncrossing(inst.points, Matching.from_pairs([(0, 1), (2, 3), (4, 5)]))
    single = PointSet.from_coords([(0, 0), (1, 1)])
    assert is_noncrossing(single, Matching.from_pairs([(0, 1)]))


def test_replay_empty_is_identity():
    assert replay(SQUARE, DIAGONALS, []) == DIAGONALS


def test_replay_scripted_run_tracks_reappearing_segment():
    inst = reappearing_segment_instance()
    trace = reappearing_segment_trace()
    assert replay(inst.points, inst.matching, trace.records) == trace.final
    m = inst.matching
    presence = [REAPPEARING_SEGMENT in m.pairs]
    for rec in trace.records:
        m = apply_flip(inst.points, m, rec.crossing, rec.choice)
        presence.append(REAPPEARING_SEGMENT in m.pairs)
    assert presence == [True, False, False, True]
    assert is_noncrossing(inst.points, m)


def test_replay_reports_failing_step():
    inst = reappearing_segment_instance()
    moves = reappearing_segment_moves()
    trace = trace_from_moves(
        inst.provenance, inst.points, inst.matching, moves
    )
    # drop the first record: the second one is now stale
    with pytest.raises(ReplayError, match="step 0"):
        replay(inst.points, inst.matching, trace.records[1:])


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.integers(2, 7))
def test_random_flips_stay_sound(seed, n):
    """Any flip of any live crossing keeps a perfect matching, adds a
    non-crossing pair, and strictly shortens the matching."""
    inst = gen_random(n, seed=seed, bbox=(0, 256))
    ps, m = inst.points, inst.matching
    rng = random.Random(seed)
    crossings = find_crossings(ps, m)
    while crossings:
        crossing = rng.choice(crossings)
        choice = rng.choice(list(FlipChoice))
        m2, rec = flip(ps, m, crossing, choice)
        from crossflip import segments_properly_cross
        assert not segments_properly_cross(ps, *rec.added)
        assert rec.length_after < rec.length_before * (1 + 1e-9)
        patched = crossings_after_flip(ps, m2, crossings, crossing, rec.added)
        assert patched == find_crossings(ps, m2)
        m, crossings = m2, patched


def test_trace_round_trip_through_random_strategy():
    from crossflip import Strategy, run_strategy

    inst = gen_random(5, seed=11, bbox=(0, 300))
    trace = run_strategy(inst, Strategy("random", seed=3))
    assert trace.complete
    assert replay(inst.points, trace.initial, trace.records) == trace.final
    assert is_noncrossing(inst.points, trace.final)


def test_two_line_crossings_match_inversions_small():
    # points are shared across all permutation matchings of the same n
    for n in range(2, 6):
        ps = gen_two_line(tuple(range(n))).points
        for pi in permutations(range(n)):
            m = Matching.from_pairs([(i, n + pi[i]) for i in range(n)])
            inv = sum(
                1
                for i in range(n)
                for j in range(i + 1, n)
                if pi[i] > pi[j]
            )
            assert len(find_crossings(ps, m)) == inv
