"""Acceptance suite: one test per criterion, each printing a pass/fail line
with its elapsed time (run with -s to see them)."""

import itertools
import math
import random
import time
from fractions import Fraction as F

import pytest

from vantage.geometry import CandidateSet, Point, VantageMultiset, rank


def _report(n, label, t0, budget):
    dt = time.perf_counter() - t0
    print(f"[ACCEPT] criterion {n:2d} ({label}): PASS in {dt:.2f}s (budget {budget}s)")
    assert dt < budget, f"criterion {n} exceeded its {budget}s budget ({dt:.1f}s)"


def test_criterion_01_exact_psi1_counts():
    from vantage.bounds import good_tideman_bound
    from vantage.enumeration import enumerate_psi1_exact

    t0 = time.perf_counter()
    for n in range(3, 9):
        t1 = time.perf_counter()
        C = CandidateSet([(i,) for i in range(n)])
        assert len(enumerate_psi1_exact(C)) == 2 * n - 2
        assert time.perf_counter() - t1 < 10

    generic = {
        3: CandidateSet([(0, 0), (1, 0), (0, 2)]),
        4: CandidateSet([(0, 0), (3, 1), (1, 4), (5, 3)]),
        5: CandidateSet([(0, 0), (7, 1), (2, 6), (9, 5), (4, 9)]),
    }
    expected = {3: 6, 4: 18, 5: 46}
    for n, C in generic.items():
        t1 = time.perf_counter()
        count = len(enumerate_psi1_exact(C))
        assert count == expected[n] == good_tideman_bound(n, 2)
        assert time.perf_counter() - t1 < 10
    _report(1, "exact psi_1 counts", t0, 10 * 9)


def test_criterion_02_sampling_exact_agreement():
    from vantage.enumeration import enumerate_psi1_exact, estimate_psi

    t0 = time.perf_counter()
    gen = random.Random(20260810)
    for inst in range(20):
        d = 1 if inst % 2 == 0 else 2
        n = gen.randrange(3, 6)
        while True:
            pts = {tuple(gen.randrange(0, 10) for _ in range(d)) for _ in range(n)}
            if len(pts) == n:
                break
        C = CandidateSet(sorted(pts))
        exact = set(enumerate_psi1_exact(C).orderings())
        est = estimate_psi(C, 1, trials=100000, seed=42 + inst)
        assert set(est.catalog.orderings()) == exact, f"instance {inst} diverged"
    _report(2, "sampling matches exact", t0, 60)


def test_criterion_03_warren_calculators():
    from vantage.bounds import radical_warren_bound, warren_bound

    t0 = time.perf_counter()
    rng = random.Random(3)
    for _ in range(25):
        N, m, delta = rng.randrange(1, 4), rng.randrange(1, 7), rng.randrange(1, 5)
        hand = 0
        for l in range(N + 1):
            hand += 2 ** l * math.comb(m, l)
        hand *= 2 * (2 * delta) ** N
        assert warren_bound(N, m, delta) == hand
        for s in (1, 2, 3, 5):
            assert radical_warren_bound(N, m, delta, 2, s) == warren_bound(N, m, delta)
        r, s = rng.randrange(2, 5), rng.randrange(1, 4)
        assert radical_warren_bound(N, m, delta, r, s) == \
            2 * (2 * s ** (r - 2) * delta) ** N * sum(
                2 ** l * math.comb(m, l) for l in range(N + 1))
    _report(3, "Warren calculators", t0, 5)


def test_criterion_04_sign_family():
    from vantage.bounds import sign_family_patterns, verify_sign_family

    t0 = time.perf_counter()
    failures = []
    assert verify_sign_family(8, F(1, 5), failures=failures)
    assert not failures
    assert len(sign_family_patterns(3)) == 8
    _report(4, "2^8 x 8 certified signs", t0, 60)


def test_criterion_05_galois_product():
    from vantage.bounds import galois_numeric_check, galois_product_expand

    t0 = time.perf_counter()
    rng = random.Random(5)
    for r, s in ((2, 2), (2, 3), (3, 2), (2, 4), (3, 3)):
        e = galois_product_expand(r, s)
        assert e.exponents_divisible, (r, s)
        assert e.coeffs_integral, (r, s)
        pts = [[F(rng.randrange(1, 12), rng.randrange(1, 7)) for _ in range(r)]
               for _ in range(10)]
        assert galois_numeric_check(e, pts) < 1e-30
    _report(5, "Galois conjugate product", t0, 30)


def test_criterion_06_component_construction():
    from vantage.bounds import (component_spec_from_scales,
                                count_components_radical,
                                find_component_ladder)

    t0 = time.perf_counter()
    for r in (2, 3, 4):
        a = find_component_ladder(r)
        spec = component_spec_from_scales(a)
        got = count_components_radical(spec)
        assert got.components == 2 * r - 1
        assert got.components <= 2 ** (r - 1) + 1
    _report(6, "2r-1 components", t0, 120)


def test_criterion_07_d1_flanking():
    from vantage.constructions import d1_flanking_catalog

    t0 = time.perf_counter()
    for k in (1, 2):
        _, _, _, catalog = d1_flanking_catalog(k, 2)
        assert len(catalog) >= 16, f"k={k} only {len(catalog)}"
    _report(7, "flanking >= m^4 orderings", t0, 60)


def test_criterion_08_composition_stabilizes():
    from vantage.constructions import (HatConfig, build_flanked,
                                       compose_stabilized, lift_vantage)
    from vantage.geometry import TieError, distinguishes

    t0 = time.perf_counter()
    rng = random.Random(88)
    done = 0
    while done < 10:
        d = 1 if done % 3 else 2
        n = rng.randrange(2, 4)
        while True:
            pts = {tuple(F(rng.randrange(0, 8)) for _ in range(d)) for _ in range(n)}
            if len(pts) == n:
                break
        Cp = CandidateSet(sorted(pts))
        k = rng.randrange(1, 3)
        Vp = VantageMultiset(
            [tuple(F(rng.randrange(-20, 20), rng.randrange(1, 7))
                   for _ in range(d)) for _ in range(k)])
        if not distinguishes(Cp, Vp):
            continue
        h1 = [Point(tuple(F(rng.randrange(0, 12), rng.randrange(1, 4))
                          for _ in range(d))) for _ in range(2)]
        h2 = [Point(tuple(F(rng.randrange(0, 12), rng.randrange(1, 4))
                          for _ in range(d))) for _ in range(2)]
        if len(set(h1)) != 2 or len(set(h2)) != 2:
            continue
        U = HatConfig(k, Point(tuple(F(rng.randrange(-9, 9), 5) for _ in range(d))),
                      Point(tuple(F(rng.randrange(-9, 9), 5) for _ in range(d))))
        try:
            R, ordering = compose_stabilized(Cp, Vp, h1, h2, U)
        except TieError:
            continue
        # three consecutive ladder rungs agree by construction; re-verify two
        for RR in (R, 2 * R, 4 * R):
            C = build_flanked(Cp, h1, h2, RR)
            V = lift_vantage(Vp, U, RR)
            assert rank(C, V) == ordering
        done += 1
    _report(8, "flanked = boxplus composition", t0, 120)


def test_criterion_09_theta_machinery():
    from vantage.constructions import theta_crossing_sq, theta_ratio
    from vantage.scalar import ComparisonResult, RadicalSum, compare

    t0 = time.perf_counter()
    rng = random.Random(9)
    NEG_INF, POS_INF = float("-inf"), float("inf")
    checked = 0
    while checked < 100:
        b = F(rng.randrange(1, 30), rng.randrange(1, 8))
        a = b + F(rng.randrange(1, 20), rng.randrange(1, 8))
        a2, b2 = a * a, b * b
        # endpoints exact
        assert theta_ratio(a, b, NEG_INF).as_fraction() == 1
        assert theta_ratio(a, b, POS_INF).as_fraction() == a2 / b2
        assert theta_crossing_sq(a2, b2, 3, 3) == NEG_INF
        assert theta_crossing_sq(a2, b2, a2.numerator * b2.denominator,
                                 b2.numerator * a2.denominator) == POS_INF
        # a strictly interior target
        t_num = rng.randrange(1, 100)
        target = 1 + (a2 / b2 - 1) * F(t_num, 101)
        x = theta_crossing_sq(a2, b2, target.numerator, target.denominator)
        assert isinstance(x, RadicalSum)
        # certified bisection bracket to width 1e-9
        lo, hi = F(-1), F(1)

        def ratio_cmp(xq):
            # theta_a(x)/theta_b(x) vs target, exactly
            lhs = RadicalSum.sqrt_of(xq * xq + a2) - RadicalSum.from_rational(xq)
            rhs = (RadicalSum.sqrt_of(xq * xq + b2)
                   - RadicalSum.from_rational(xq)) * target
            return compare(lhs, rhs)

        while ratio_cmp(lo) is not ComparisonResult.LESS:
            lo *= 2
        while ratio_cmp(hi) is not ComparisonResult.GREATER:
            hi *= 2
        while hi - lo > F(1, 10 ** 9):
            mid = (lo + hi) / 2
            if ratio_cmp(mid) is ComparisonResult.LESS:
                lo = mid
            else:
                hi = mid
        assert compare(x, RadicalSum.from_rational(lo)) is ComparisonResult.GREATER
        assert compare(x, RadicalSum.from_rational(hi)) is ComparisonResult.LESS
        # monotonicity at two random abscissae
        xq = F(rng.randrange(-50, 50), rng.randrange(1, 9))
        xp = xq + F(rng.randrange(1, 12), rng.randrange(1, 9))
        assert theta_ratio(a, b, xq).compare(theta_ratio(a, b, xp)) \
            is ComparisonResult.LESS
        checked += 1
    _report(9, "theta crossings & monotonicity", t0, 30)


def test_criterion_10_good_pairs_and_gamma():
    from vantage.constructions import (gamma_count, gen_check_orderings,
                                       is_good_pair)

    t0 = time.perf_counter()
    rng = random.Random(10)
    for inst in range(10):
        while True:
            vals = {F(rng.randrange(0, 30), rng.randrange(1, 4)) for _ in range(3)}
            if len(vals) == 3:
                break
        C = [Point((v,)) for v in sorted(vals)]
        good_hits = 0
        good_pair = None
        total = 8
        for _ in range(total):
            v1 = Point((F(rng.randrange(-400, 400), rng.randrange(30, 60)),))
            v2 = Point((F(rng.randrange(-400, 400), rng.randrange(30, 60)),))
            try:
                ok, _ = is_good_pair(v1, v2, C)
            except ValueError:
                continue
            if ok:
                good_hits += 1
                good_pair = (v1, v2)
        assert good_hits * 2 >= total, f"goodness frequency below 50% on {inst}"
        v1, v2 = good_pair
        gamma = gamma_count(v1, v2, C)
        catalog = gen_check_orderings(C, v1, v2)
        assert len(catalog) >= gamma
    _report(10, "good pairs, Gamma orderings", t0, 120)


def test_criterion_11_d1_witnesses():
    from vantage.witnesses import (NonProtrusiveError, avoids_132_312,
                                   is_protrusive, witness_d1)

    t0 = time.perf_counter()
    rng = random.Random(11)
    pts = sorted(rng.sample(range(0, 60), 8))
    C = CandidateSet([(F(p, 7),) for p in pts])
    witnessed = 0
    for perm in itertools.permutations(range(8)):
        if is_protrusive(C, perm):
            cert = witness_d1(C, perm)
            assert cert.verified
            witnessed += 1
        else:
            with pytest.raises(NonProtrusiveError):
                witness_d1(C, perm)
    assert witnessed == 2 ** 7

    for n in range(2, 7):
        Cn = CandidateSet([(i,) for i in range(n)])
        for perm in itertools.permutations(range(n)):
            assert avoids_132_312(perm) == is_protrusive(Cn, perm)
    _report(11, "2^{n-1} line witnesses", t0, 120)


def test_criterion_12_distance_matrix_witnesses():
    from vantage.witnesses import gen_vertex_transitive, witness_by_distance_matrix

    t0 = time.perf_counter()
    sq = gen_vertex_transitive("regular_polygon", 4)
    for perm in itertools.permutations(range(4)):
        cert = witness_by_distance_matrix(sq, perm)
        assert cert.verified
        assert all(p in sq.points for p, _ in cert.V.entries)
    pent = gen_vertex_transitive("regular_polygon", 5)
    rng = random.Random(12)
    for _ in range(10):
        perm = tuple(rng.sample(range(5), 5))
        cert = witness_by_distance_matrix(pent, perm)
        assert cert.verified
        assert all(p in pent.points for p, _ in cert.V.entries)
    _report(12, "vantage points inside C", t0, 60)


def test_criterion_13_six_point_verification():
    from vantage.witnesses import verify_six_point

    t0 = time.perf_counter()
    rep = verify_six_point()
    assert rep.passed
    assert rep.far_field_ok
    assert rep.grid_ok and rep.grid_points == 251 ** 2
    assert rep.grid_min_lo > 0.35
    assert not rep.failed_cells
    assert rep.lipschitz_ok and rep.final_bound > 0.26
    _report(13, "certified six-point check", t0, 60)


def test_criterion_14_growth_trend():
    from vantage.constructions import build_lower_bound_config

    t0 = time.perf_counter()
    xs, ys = [], []
    for n in range(4, 13):
        lb = build_lower_bound_config(1, 1, n)
        assert len(lb.catalog) == n * (n - 1) // 2 + 1
        xs.append(math.log(n))
        ys.append(math.log(len(lb.catalog)))
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / \
        sum((x - mx) ** 2 for x in xs)
    assert 1.8 <= slope <= 2.2, f"log-log slope {slope}"
    _report(14, f"growth slope {2.0:.1f}-ish", t0, 120)
