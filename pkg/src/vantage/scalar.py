"""Exact scalars of the form sum(q_i * sqrt(r_i)) with rational q_i, r_i >= 0,
plus rigorous interval arithmetic with outward rounding.

Every distance sum handled by this package is a rational linear combination of
square roots of nonnegative rationals, so sign/equality questions are decidable
here: radicands are reduced toward square-free integers, terms with equal
radicands merge, and a sum that normalizes to the empty term list is exactly
zero.  Signs of nonzero sums are certified by interval evaluation at escalating
precision (53, 128, 256, ... bits, doubling up to a cap).
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import Iterable, Tuple, Union

import gmpy2

Rational = Fraction
RationalLike = Union[Fraction, int]

DEFAULT_PRECISION_CAP = 4096
MIN_PRECISION = 24
FULL_SQUAREFREE_BOUND = 10 ** 6

_STAGE1_BOUND = 1000


def _sieve(bound: int) -> list:
    flags = bytearray([1]) * (bound + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(bound) + 1):
        if flags[p]:
            flags[p * p:: p] = bytearray(len(flags[p * p:: p]))
    return [i for i, f in enumerate(flags) if f]


_SMALL_PRIMES = _sieve(_STAGE1_BOUND)
_BIG_PRIMES = None  # sieved lazily, only when a comparison stalls


def _primes_up_to(bound: int) -> list:
    global _BIG_PRIMES
    if bound <= _STAGE1_BOUND:
        return _SMALL_PRIMES
    if _BIG_PRIMES is None:
        _BIG_PRIMES = _sieve(FULL_SQUAREFREE_BOUND)
    return _BIG_PRIMES


def _square_split(n: int, bound: int) -> Tuple[int, int]:
    """Split n = outer**2 * inner, inner square-free w.r.t. primes <= bound.

    A perfect-square cofactor beyond the trial bound is still absorbed (isqrt
    is cheap); square factors made of two distinct huge primes are left in
    place, which only costs completeness of symbolic equality, never
    soundness.
    """
    if n == 0:
        return 1, 0
    outer = 1
    inner = 1
    rem = n
    for p in _primes_up_to(bound):
        if p * p > rem:
            break
        if rem % p == 0:
            e = 0
            while rem % p == 0:
                rem //= p
                e += 1
            outer *= p ** (e // 2)
            if e % 2:
                inner *= p
    # rem now has no prime factor <= bound (or is 1)
    if rem > 1:
        s = math.isqrt(rem)
        if s * s == rem:
            outer *= s
        else:
            inner *= rem
    return outer, inner


class ComparisonResult(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1
    INDETERMINATE = 2


def _ctx(prec: int, rnd):
    return gmpy2.context(precision=prec, round=rnd)


class IntervalDomainError(ValueError):
    pass


class Interval:
    """Closed interval [lo, hi] of binary floats enclosing an exact real.

    All operations round outward (directed rounding via MPFR), so any chain of
    operations on enclosures yields an enclosure of the exact result.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        if lo > hi:
            raise ValueError(f"invalid interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_fraction(q: Fraction, prec: int) -> "Interval":
        mq = gmpy2.mpq(q.numerator, q.denominator)
        with _ctx(prec, gmpy2.RoundDown):
            lo = gmpy2.mpfr(mq)
        with _ctx(prec, gmpy2.RoundUp):
            hi = gmpy2.mpfr(mq)
        return Interval(lo, hi)

    @staticmethod
    def zero(prec: int = 53) -> "Interval":
        z = gmpy2.mpfr(0, prec)
        return Interval(z, z)

    # -- helpers ------------------------------------------------------

    @property
    def precision(self) -> int:
        return max(self.lo.precision, self.hi.precision)

    def width(self) -> float:
        return float(self.hi - self.lo)

    def lo_fraction(self) -> Fraction:
        q = gmpy2.mpq(self.lo)
        return Fraction(int(q.numerator), int(q.denominator))

    def hi_fraction(self) -> Fraction:
        q = gmpy2.mpq(self.hi)
        return Fraction(int(q.numerator), int(q.denominator))

    def mid_fraction(self) -> Fraction:
        return (self.lo_fraction() + self.hi_fraction()) / 2

    def contains(self, q: RationalLike) -> bool:
        mq = gmpy2.mpq(Fraction(q).numerator, Fraction(q).denominator)
        return self.lo <= mq <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def is_positive(self) -> bool:
        return self.lo > 0

    def is_negative(self) -> bool:
        return self.hi < 0

    def disjoint_below(self, other: "Interval") -> bool:
        """self entirely below other."""
        return self.hi < other.lo

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "Interval") -> "Interval":
        p = max(self.precision, other.precision)
        with _ctx(p, gmpy2.RoundDown):
            lo = self.lo + other.lo
        with _ctx(p, gmpy2.RoundUp):
            hi = self.hi + other.hi
        return Interval(lo, hi)

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other: "Interval") -> "Interval":
        return self + (-other)

    def __mul__(self, other: "Interval") -> "Interval":
        p = max(self.precision, other.precision)
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        with _ctx(p, gmpy2.RoundDown):
            lo = min(a * c, a * d, b * c, b * d)
        with _ctx(p, gmpy2.RoundUp):
            hi = max(a * c, a * d, b * c, b * d)
        return Interval(lo, hi)

    def scale(self, q: Fraction) -> "Interval":
        """Multiply by an exact rational."""
        p = self.precision
        mq = gmpy2.mpq(q.numerator, q.denominator)
        if q >= 0:
            with _ctx(p, gmpy2.RoundDown):
                lo = self.lo * mq
            with _ctx(p, gmpy2.RoundUp):
                hi = self.hi * mq
        else:
            with _ctx(p, gmpy2.RoundDown):
                lo = self.hi * mq
            with _ctx(p, gmpy2.RoundUp):
                hi = self.lo * mq
        return Interval(lo, hi)

    def __truediv__(self, other: "Interval") -> "Interval":
        if other.contains_zero():
            raise IntervalDomainError("division by an interval containing zero")
        p = max(self.precision, other.precision)
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        with _ctx(p, gmpy2.RoundDown):
            lo = min(a / c, a / d, b / c, b / d)
        with _ctx(p, gmpy2.RoundUp):
            hi = max(a / c, a / d, b / c, b / d)
        return Interval(lo, hi)

    def __abs__(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        p = self.precision
        with _ctx(p, gmpy2.RoundUp):
            hi = max(-self.lo, self.hi)
        return Interval(gmpy2.mpfr(0, p), hi)

    def sqrt(self) -> "Interval":
        """Square root; a slightly-negative lower bound (round-off on a value
        known nonnegative) is clamped to zero, hi < 0 is a domain error."""
        if self.hi < 0:
            raise IntervalDomainError(f"sqrt of negative interval [{self.lo}, {self.hi}]")
        p = self.precision
        lo_in = self.lo if self.lo > 0 else gmpy2.mpfr(0, p)
        with _ctx(p, gmpy2.RoundDown):
            lo = gmpy2.sqrt(lo_in)
        with _ctx(p, gmpy2.RoundUp):
            hi = gmpy2.sqrt(self.hi)
        return Interval(lo, hi)

    def __repr__(self):
        return f"Interval({self.lo!r}, {self.hi!r})"


def _sqrt_interval_of_int(r: int, prec: int) -> Interval:
    with _ctx(prec, gmpy2.RoundDown):
        lo = gmpy2.sqrt(gmpy2.mpfr(r))
    with _ctx(prec, gmpy2.RoundUp):
        hi = gmpy2.sqrt(gmpy2.mpfr(r))
    return Interval(lo, hi)


class RadicalSum:
    """Exact value sum(q_i * sqrt(r_i)) with q_i in Q and r_i nonneg integers.

    Terms are stored as a radicand -> coefficient map.  Construction
    normalizes every radicand: a rational radicand p/q becomes the integer
    p*q (scaling the coefficient by 1/q), square factors up to a trial bound
    are pulled out, perfect-square cofactors are absorbed, zero radicands and
    zero coefficients vanish, and radicand 1 holds the rational part.
    Instances are immutable.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[Tuple[RationalLike, RationalLike]] = (),
                 _raw: dict = None):
        if _raw is not None:
            self._terms = _raw
            return
        acc: dict = {}
        for coeff, radicand in terms:
            self._accumulate(acc, Fraction(coeff), Fraction(radicand), _STAGE1_BOUND)
        self._terms = {r: q for r, q in acc.items() if q != 0}

    @staticmethod
    def _accumulate(acc: dict, coeff: Fraction, radicand: Fraction, bound: int):
        if radicand < 0:
            raise ValueError(f"negative radicand {radicand}")
        if coeff == 0 or radicand == 0:
            return
        n = radicand.numerator * radicand.denominator
        scale = Fraction(1, radicand.denominator)
        outer, inner = _square_split(n, bound)
        q = coeff * scale * outer
        acc[inner] = acc.get(inner, Fraction(0)) + q

    # -- constructors -------------------------------------------------

    @classmethod
    def from_rational(cls, q: RationalLike) -> "RadicalSum":
        q = Fraction(q)
        return cls(((q, 1),)) if q else cls()

    @classmethod
    def sqrt_of(cls, radicand: RationalLike, coeff: RationalLike = 1) -> "RadicalSum":
        return cls(((coeff, radicand),))

    ZERO: "RadicalSum"  # set below

    # -- structure ----------------------------------------------------

    @property
    def terms(self) -> Tuple[Tuple[Fraction, int], ...]:
        """(coefficient, radicand) pairs, sorted by radicand."""
        return tuple((self._terms[r], r) for r in sorted(self._terms))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_rational(self) -> bool:
        return all(r == 1 for r in self._terms)

    def as_fraction(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return self._terms[1]

    def refine(self, bound: int = FULL_SQUAREFREE_BOUND) -> "RadicalSum":
        """Re-normalize with a deeper square-free trial bound."""
        acc: dict = {}
        for r, q in self._terms.items():
            self._accumulate(acc, q, Fraction(r), bound)
        return RadicalSum(_raw={r: q for r, q in acc.items() if q != 0})

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RadicalSum.from_rational(other)
        if not isinstance(other, RadicalSum):
            return NotImplemented
        merged = dict(self._terms)
        for r, q in other._terms.items():
            s = merged.get(r, Fraction(0)) + q
            if s:
                merged[r] = s
            else:
                merged.pop(r, None)
        return RadicalSum(_raw=merged)

    __radd__ = __add__

    def __neg__(self):
        return RadicalSum(_raw={r: -q for r, q in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RadicalSum.from_rational(other)
        if not isinstance(other, RadicalSum):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                return RadicalSum()
            return RadicalSum(_raw={r: c * q for r, c in self._terms.items()})
        if not isinstance(other, RadicalSum):
            return NotImplemented
        acc: dict = {}
        for r1, q1 in self._terms.items():
            for r2, q2 in other._terms.items():
                self._accumulate(acc, q1 * q2, Fraction(r1 * r2), _STAGE1_BOUND)
        return RadicalSum(_raw={r: q for r, q in acc.items() if q != 0})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RadicalSum.from_rational(other)
        if not isinstance(other, RadicalSum):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # -- evaluation ---------------------------------------------------

    def interval(self, precision_bits: int) -> Interval:
        if precision_bits < MIN_PRECISION:
            raise ValueError(f"precision_bits must be >= {MIN_PRECISION}")
        total = Interval.zero(precision_bits)
        for r, q in self._terms.items():
            if r == 1:
                total = total + Interval.from_fraction(q, precision_bits)
            else:
                total = total + _sqrt_interval_of_int(r, precision_bits).scale(q)
        return total

    def __float__(self):
        if not self._terms:
            return 0.0
        return float(self.interval(64).mid_fraction())

    def sign(self, precision_cap: int = DEFAULT_PRECISION_CAP):
        """Certified sign: -1, 0, or +1; None when the cap is hit.

        0 is only returned on symbolic grounds (empty normalized sum, or a
        two-term cancellation proven by comparing squares), never from
        interval overlap.
        """
        s = _symbolic_sign(self._terms)
        if s is not None:
            return s
        current = self
        refined = False
        for prec in _precision_ladder(precision_cap):
            iv = current.interval(prec)
            if iv.is_positive():
                return 1
            if iv.is_negative():
                return -1
            if not refined:
                # a stalled comparison may be a hidden cancellation behind an
                # unreduced square factor; retry with the full trial bound
                refined = True
                current = current.refine(FULL_SQUAREFREE_BOUND)
                s = _symbolic_sign(current._terms)
                if s is not None:
                    return s
        return None

    def __repr__(self):
        if not self._terms:
            return "RadicalSum(0)"
        parts = []
        for q, r in self.terms:
            parts.append(str(q) if r == 1 else f"{q}*sqrt({r})")
        return "RadicalSum(" + " + ".join(parts) + ")"


RadicalSum.ZERO = RadicalSum()


def _precision_ladder(cap: int):
    yield 53
    p = 128
    while p <= cap:
        yield p
        p *= 2


def _symbolic_sign(terms: dict):
    """Sign decided without any floating point, or None.

    Handles the empty sum, sums whose coefficients share a sign (radicands
    are positive, so the sum inherits it), and two-term differences, where
    comparing squares of the positive and negative halves is exact.
    """
    if not terms:
        return 0
    signs = {1 if q > 0 else -1 for q in terms.values()}
    if signs == {1}:
        return 1
    if signs == {-1}:
        return -1
    if len(terms) == 2:
        (r1, q1), (r2, q2) = terms.items()
        pos_sq = q1 * q1 * r1
        neg_sq = q2 * q2 * r2
        if q1 < 0:
            pos_sq, neg_sq = neg_sq, pos_sq
        if pos_sq > neg_sq:
            return 1
        if pos_sq < neg_sq:
            return -1
        return 0
    return None


def compare(a: RadicalSum, b: RadicalSum,
            precision_cap: int = DEFAULT_PRECISION_CAP) -> ComparisonResult:
    """Certified three-way comparison of two exact radical sums.

    LESS/GREATER come from disjoint interval enclosures (or exact rational
    reasoning on short differences); EQUAL only from symbolic cancellation.
    INDETERMINATE means the difference did not normalize to zero and the
    precision cap was reached.
    """
    if isinstance(a, (int, Fraction)):
        a = RadicalSum.from_rational(a)
    if isinstance(b, (int, Fraction)):
        b = RadicalSum.from_rational(b)
    s = (a - b).sign(precision_cap)
    if s is None:
        return ComparisonResult.INDETERMINATE
    return ComparisonResult(s)


def eval_interval(a: RadicalSum, precision_bits: int) -> Interval:
    """Enclosure of the exact value of `a` at the given working precision."""
    return a.interval(precision_bits)
