from itertools import permutations

import pytest

from crossflip import (
    GenerationError,
    Instance,
    Matching,
    PointSet,
    find_crossings,
    gen_convex,
    gen_random,
    gen_two_line,
    identity_perm,
    inversion_count,
    is_noncrossing,
    orient,
    reverse_perm,
    two_line_permutation,
    validate_general_position,
)


def test_identity_is_noncrossing():
    inst = gen_two_line(identity_perm(3))
    assert is_noncrossing(inst.points, inst.matching)


def test_reverse_crosses_every_pair():
    inst = gen_two_line(reverse_perm(3))
    assert len(find_crossings(inst.points, inst.matching)) == 3


def test_three_cycle_has_two_crossings():
    # the cycle sending 0->1->2->0 has exactly two inversions
    inst = gen_two_line((1, 2, 0))
    assert len(find_crossings(inst.points, inst.matching)) == 2
    assert inversion_count((1, 2, 0)) == 2


def test_two_line_crossings_equal_inversions_exhaustive():
    for n in range(1, 7):
        ps = gen_two_line(identity_perm(n)).points
        for pi in permutations(range(n)):
            m = Matching.from_pairs([(i, n + pi[i]) for i in range(n)])
            assert len(find_crossings(ps, m)) == inversion_count(pi)


def test_two_line_shape():
    inst = gen_two_line(reverse_perm(4))
    ps = inst.points
    assert validate_general_position(ps) is None
    assert ps.has_distinct_x()
    n = 4
    # bottom row first in increasing x, then top row in increasing x
    assert all(ps[i].x < ps[i + 1].x for i in range(n - 1))
    assert all(ps[n + i].x < ps[n + i + 1].x for i in range(n - 1))
    assert all(ps[i].y < ps[n + j].y for i in range(n) for j in range(n))
    assert two_line_permutation(inst.matching, n) == [3, 2, 1, 0]


def test_two_line_rejects_non_permutations():
    with pytest.raises(ValueError):
        gen_two_line((0, 0, 1))


def test_two_line_deterministic():
    assert gen_two_line((2, 0, 1)) == gen_two_line((2, 0, 1))


def test_convex_single_segment():
    inst = gen_convex(1)
    assert inst.matching.size == 1
    assert is_noncrossing(inst.points, inst.matching)


@pytest.mark.parametrize("n", range(2, 9))
def test_convex_initial_crossing_count(n):
    # the long chord is crossed by each of the n-1 nested chords and the
    # nested chords avoid each other
    inst = gen_convex(n)
    crossings = find_crossings(inst.points, inst.matching)
    assert len(crossings) == n - 1
    spine = (0, n)
    assert all(spine in c for c in crossings)


@pytest.mark.parametrize("n", [2, 3, 4, 6, 12])
def test_convex_points_strictly_convex_ccw(n):
    ps = gen_convex(n).points
    m = len(ps)
    assert validate_general_position(ps) is None
    assert ps.has_distinct_x()
    if m > 2:
        for k in range(m):
            assert orient(ps[k], ps[(k + 1) % m], ps[(k + 2) % m]) > 0


def test_convex_deterministic():
    assert gen_convex(5) == gen_convex(5)


def test_random_single_pair_always_works():
    inst = gen_random(1, seed=0, bbox=(0, 3))
    assert inst.matching.size == 1


def test_random_matches_pinned_golden_file():
    from crossflip.io import load_instance

    golden = load_instance("tests/data/random_n3_seed7.json")
    assert gen_random(3, seed=7, bbox=(0, 100)) == golden


def test_random_general_position_many_seeds():
    for seed in range(40):
        inst = gen_random(4, seed=seed, bbox=(0, 100))
        assert validate_general_position(inst.points) is None


def test_random_tiny_bbox_exhausts_budget():
    with pytest.raises(GenerationError, match="budget"):
        gen_random(3, seed=1, bbox=(0, 1))


def test_instance_rejects_degenerate_points():
    ps = PointSet.from_coords([(0, 0), (1, 1), (2, 2), (5, 0)])
    with pytest.raises(ValueError, match="collinear"):
        Instance(ps, Matching.from_pairs([(0, 1), (2, 3)]), "test")
