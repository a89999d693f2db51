import random
from fractions import Fraction as F

import pytest

from vantage.geometry import (
    CandidateSet,
    DimensionError,
    Point,
    TieError,
    VantageMultiset,
    collapse_median,
    distance,
    distance_sum,
    distinguishes,
    multiset_from_json,
    multiset_to_json,
    pointset_from_json,
    pointset_to_json,
    rank,
)
from vantage.scalar import RadicalSum


def test_distance_pythagorean():
    assert distance(Point((0, 0)), Point((3, 4))) == RadicalSum.from_rational(5)
    assert distance(Point((0,)), Point((3,))) == RadicalSum.from_rational(3)
    assert distance(Point((0, 0)), Point((1, 1))) == RadicalSum.sqrt_of(2)


def test_distance_dim_mismatch():
    with pytest.raises(DimensionError):
        distance(Point((0,)), Point((0, 0)))


def test_distance_sum_examples():
    assert distance_sum(VantageMultiset([(0,)]), Point((3,))) == RadicalSum.from_rational(3)
    V = VantageMultiset([((0, 0), 2)])
    assert distance_sum(V, Point((3, 4))) == RadicalSum.from_rational(10)
    V2 = VantageMultiset([(0, 0), (4, 0)])
    assert distance_sum(V2, Point((2, 0))) == RadicalSum.from_rational(4)


def test_rank_examples():
    C = CandidateSet([(0,), (1,), (3,)])
    assert rank(C, VantageMultiset([(0,)])) == (0, 1, 2)
    C2 = CandidateSet([(0,), (2,)])
    with pytest.raises(TieError) as e:
        rank(C2, VantageMultiset([(1,)]))
    assert e.value.pair == (0, 1)
    C3 = CandidateSet([(0, 0), (1, 0), (0, 2)])
    assert rank(C3, VantageMultiset([(0, 0)])) == (0, 1, 2)


def test_distinguishes():
    assert not distinguishes(CandidateSet([(0,), (2,)]), VantageMultiset([(1,)]))
    assert distinguishes(CandidateSet([(0,), (2,)]), VantageMultiset([(0,)]))
    # equal sums by symmetry along the diagonal
    assert not distinguishes(CandidateSet([(0, 0), (1, 1)]),
                             VantageMultiset([(0, 0), (2, 2)]))


def test_collapse_median_examples():
    assert collapse_median(VantageMultiset([(0,), (2,)])).entries == \
        ((Point((1,)), 2),)
    assert collapse_median(VantageMultiset([((0,), 2)])).entries == \
        ((Point((0,)), 2),)
    V = collapse_median(VantageMultiset([(-3,), (0,), (2,), (7,)]))
    assert V.entries == ((Point((-3,)), 1), (Point((1,)), 2), (Point((7,)), 1))


def test_collapse_median_guards():
    with pytest.raises(ValueError):
        collapse_median(VantageMultiset([(0,), (1,), (2,)]))
    with pytest.raises(DimensionError):
        collapse_median(VantageMultiset([(0, 0), (1, 1)]))


def _random_instance(rng, d, n, k):
    while True:
        pts = {tuple(F(rng.randrange(0, 30)) for _ in range(d)) for _ in range(n)}
        if len(pts) == n:
            break
    C = CandidateSet(sorted(pts))
    V = VantageMultiset([tuple(F(rng.randrange(-40, 70), rng.randrange(1, 7))
                               for _ in range(d)) for _ in range(k)])
    return C, V


def test_isometry_invariance():
    rng = random.Random(42)
    hits = 0
    for _ in range(25):
        d = rng.choice((1, 2))
        C, V = _random_instance(rng, d, rng.randrange(2, 5), rng.randrange(1, 3))
        try:
            base = rank(C, V)
        except TieError:
            continue
        hits += 1
        shift = tuple(F(rng.randrange(-5, 6)) for _ in range(d))
        flips = tuple(rng.choice((-1, 1)) for _ in range(d))
        perm = list(range(d))
        rng.shuffle(perm)

        def mv(p):
            moved = [flips[t] * p[perm[t]] + shift[t] for t in range(d)]
            return tuple(moved)

        C2 = CandidateSet([mv(p) for p in C.points])
        V2 = VantageMultiset([(Point(mv(p)), m) for p, m in V.entries])
        assert rank(C2, V2) == base
    assert hits >= 15


def test_scaling_invariance():
    rng = random.Random(43)
    for _ in range(20):
        d = rng.choice((1, 2))
        C, V = _random_instance(rng, d, 3, 2)
        lam = F(rng.randrange(1, 9), rng.randrange(1, 9))
        try:
            base = rank(C, V)
        except TieError:
            continue
        C2 = CandidateSet([p.scale(lam) for p in C.points])
        V2 = VantageMultiset([(p.scale(lam), m) for p, m in V.entries])
        assert rank(C2, V2) == base


def test_median_collapse_invariance():
    rng = random.Random(44)
    checked = 0
    while checked < 20:
        C, V = _random_instance(rng, 1, rng.randrange(2, 6), 2 * rng.randrange(1, 3))
        try:
            base = rank(C, V)
        except TieError:
            continue
        Vbar = collapse_median(V)
        try:
            assert rank(C, Vbar) == base
        except TieError:
            pytest.fail("collapsed multiset must still distinguish")
        checked += 1


def test_multiplicity_coherence():
    rng = random.Random(45)
    for _ in range(15):
        d = rng.choice((1, 2))
        C, _ = _random_instance(rng, d, 3, 1)
        p = Point(tuple(F(rng.randrange(-9, 9)) for _ in range(d)))
        q = Point(tuple(F(rng.randrange(-9, 9)) for _ in range(d)))
        V_merged = VantageMultiset([(p, 2), (q, 1)])
        V_split = VantageMultiset([(p, 1), (p, 1), (q, 1)])
        assert V_merged.entries == V_split.entries
        try:
            assert rank(C, V_merged) == rank(C, V_split)
        except TieError:
            pass


def test_json_roundtrip_and_exact_decimal():
    C = pointset_from_json({"dim": 1, "points": [["3.25"], ["1/3"], [2]]})
    assert C.points[0][0] == F(13, 4)
    assert C.points[1][0] == F(1, 3)
    assert pointset_from_json(pointset_to_json(C)).points == C.points
    V = multiset_from_json({"dim": 2, "points": [["0", "0"]], "mult": [3]})
    assert V.entries[0][1] == 3
    assert multiset_from_json(multiset_to_json(V)).entries == V.entries


def test_json_rejects_floats():
    with pytest.raises(ValueError):
        pointset_from_json({"dim": 1, "points": [[0.1]]})


def test_candidate_set_validation():
    with pytest.raises(ValueError):
        CandidateSet([(0,), (0,)])
    with pytest.raises(ValueError):
        CandidateSet([])
    with pytest.raises(DimensionError):
        CandidateSet([(0,), (0, 1)])
    with pytest.raises(ValueError):
        VantageMultiset([((0,), 0)])
