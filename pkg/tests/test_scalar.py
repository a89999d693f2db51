import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from vantage.scalar import (
    ComparisonResult,
    Interval,
    IntervalDomainError,
    RadicalSum,
    compare,
    eval_interval,
)

R = RadicalSum


def test_compare_one_plus_sqrt2_vs_sqrt6():
    # squaring oracle: (1 + sqrt 2)^2 = 3 + 2 sqrt 2 < 6
    a = R.from_rational(1) + R.sqrt_of(2)
    assert compare(a, R.sqrt_of(6)) is ComparisonResult.LESS


def test_compare_perfect_square():
    assert compare(R.sqrt_of(4), R.from_rational(2)) is ComparisonResult.EQUAL


def test_compare_radical_simplification():
    # sqrt 8 = 2 sqrt 2 and 3 sqrt 2 = sqrt 18
    assert compare(R.sqrt_of(2) + R.sqrt_of(8), R.sqrt_of(18)) is ComparisonResult.EQUAL


def test_compare_total_preorder():
    a = R.sqrt_of(2) + R.from_rational(F(1, 3))
    b = R.sqrt_of(3)
    assert compare(a, b) is ComparisonResult.GREATER
    assert compare(b, a) is ComparisonResult.LESS
    assert compare(a, a) is ComparisonResult.EQUAL


def test_equal_only_symbolic_never_from_overlap():
    # values differing by 2^-200 must come out GREATER, not EQUAL
    tiny = F(1, 2 ** 200)
    a = R.sqrt_of(2) + R.from_rational(tiny)
    assert compare(a, R.sqrt_of(2)) is ComparisonResult.GREATER


def test_hidden_square_factor_beyond_stage1():
    # 1009 is prime and > the construction-time trial bound
    big = 1009 * 1009 * 2
    assert compare(R.sqrt_of(big), R.sqrt_of(2) * 1009) is ComparisonResult.EQUAL


def test_eval_interval_sqrt2():
    iv = eval_interval(R.sqrt_of(2), 53)
    assert iv.width() < 1e-15
    fine = eval_interval(R.sqrt_of(2), 256)
    assert iv.lo <= fine.lo and fine.hi <= iv.hi
    assert fine.width() < iv.width()


def test_eval_interval_zero():
    iv = eval_interval(R.ZERO, 53)
    assert iv.lo == 0 and iv.hi == 0
    iv = eval_interval(R.sqrt_of(2) - R.sqrt_of(2), 53)
    assert iv.lo == 0 and iv.hi == 0


def test_eval_interval_precision_guard():
    with pytest.raises(ValueError):
        eval_interval(R.sqrt_of(2), 8)


def test_interval_add_exact():
    one = Interval.from_fraction(F(1), 53)
    two = Interval.from_fraction(F(2), 53)
    s = one + two
    assert s.contains(F(3)) and s.width() == 0


def test_interval_sqrt():
    four = Interval.from_fraction(F(4), 53)
    r = four.sqrt()
    assert r.contains(F(2)) and r.width() < 1e-15
    # sqrt(2) against a finer oracle
    r2 = Interval.from_fraction(F(2), 53).sqrt()
    fine = eval_interval(R.sqrt_of(2), 212)
    assert r2.lo <= fine.lo and fine.hi <= r2.hi


def test_interval_sqrt_clamps_roundoff():
    iv = Interval.from_fraction(F(-1, 10 ** 30), 53)
    iv = Interval(iv.lo, Interval.from_fraction(F(1), 53).hi)
    r = iv.sqrt()
    assert r.lo == 0


def test_interval_sqrt_domain_error():
    with pytest.raises(IntervalDomainError):
        Interval.from_fraction(F(-1), 53).sqrt()


def test_interval_mul_div_abs():
    a = Interval.from_fraction(F(-3), 53)
    b = Interval.from_fraction(F(2), 53)
    assert (a * b).contains(F(-6))
    assert (a / b).contains(F(-3, 2))
    assert abs(a).contains(F(3))
    with pytest.raises(IntervalDomainError):
        a / Interval(b.lo - 5, b.hi)


def test_multiplication_closes():
    x = (R.from_rational(1) + R.sqrt_of(2)) * (R.from_rational(1) + R.sqrt_of(2))
    assert x == R.from_rational(3) + R.sqrt_of(2) * 2
    assert (R.sqrt_of(6) * R.sqrt_of(10)) == R.sqrt_of(15) * 2


def test_negative_radicand_rejected():
    with pytest.raises(ValueError):
        R.sqrt_of(-1)


RADICANDS = [2, 3, 5, 6, 7, 10, 2, 3]

coeff_st = st.fractions(min_value=-5, max_value=5, max_denominator=12)


@st.composite
def radical_sums(draw, max_terms=4):
    n = draw(st.integers(min_value=0, max_value=max_terms))
    terms = [(draw(coeff_st), RADICANDS[draw(st.integers(0, len(RADICANDS) - 1))])
             for _ in range(n)]
    if draw(st.booleans()):
        terms.append((draw(coeff_st), 1))
    return R(terms)


@settings(max_examples=120, deadline=None)
@given(radical_sums())
def test_enclosure_soundness(a):
    # the value at 4x precision always sits inside the base enclosure
    base = eval_interval(a, 64)
    fine = eval_interval(a, 256)
    assert base.lo <= fine.lo and fine.hi <= base.hi


@settings(max_examples=80, deadline=None)
@given(radical_sums(), radical_sums())
def test_comparison_trichotomy_consistency(a, b):
    res = compare(a, b)
    if res is ComparisonResult.LESS:
        for prec in (53, 128, 256, 512, 1024):
            if eval_interval(a, prec).hi < eval_interval(b, prec).lo:
                break
        else:
            pytest.fail("LESS without separating enclosures")
    elif res is ComparisonResult.GREATER:
        assert compare(b, a) is ComparisonResult.LESS
    else:
        assert res is ComparisonResult.EQUAL
        assert (a - b).is_zero or (a - b).refine().is_zero


@settings(max_examples=60, deadline=None)
@given(radical_sums(max_terms=3))
def test_symbolic_zero_completeness_against_sympy(a):
    # independent oracle: sympy's exact radical arithmetic
    import sympy

    expr = sympy.Integer(0)
    for q, r in a.terms:
        expr += sympy.Rational(q.numerator, q.denominator) * sympy.sqrt(r)
    is_zero_oracle = sympy.simplify(expr) == 0
    assert a.is_zero == bool(is_zero_oracle)
    assert (compare(a, R.ZERO) is ComparisonResult.EQUAL) == bool(is_zero_oracle)


def test_zero_built_from_cancellation_across_representations():
    rng = random.Random(11)
    for _ in range(40):
        qs = [F(rng.randrange(-6, 7), rng.randrange(1, 5)) for _ in range(4)]
        a = R([(qs[0], 2), (qs[1], 3), (qs[2], 5), (qs[3], 7)])
        b = R([(qs[0], 8), (qs[1], 27), (qs[2], 45), (qs[3], 63)])
        # sqrt 8 = 2 sqrt 2 etc: b = diag(2,3,3,3) . a termwise
        c = R([(2 * qs[0], 2), (3 * qs[1], 3), (3 * qs[2], 5), (3 * qs[3], 7)])
        assert compare(b, c) is ComparisonResult.EQUAL
