"""Closed-form bound calculators, the sign-pattern family with certified
signs, the Galois conjugate-product expansion, and the connected-component
counter for one-variable radical combinations.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import gmpy2

from vantage.scalar import RadicalSum


# -- combinatorial calculators ------------------------------------------

@lru_cache(maxsize=None)
def stirling_first_unsigned(n: int, r: int) -> int:
    """Unsigned Stirling numbers of the first kind, s(n, r)."""
    if not (0 <= r <= n):
        raise ValueError(f"need 0 <= r <= n, got ({n}, {r})")
    if n == 0:
        return 1 if r == 0 else 0
    if r == 0:
        return 0
    if r == n:
        return 1
    return stirling_first_unsigned(n - 1, r - 1) + (n - 1) * stirling_first_unsigned(n - 1, r)


def good_tideman_bound(n: int, d: int) -> int:
    """s(n,n) + s(n,n-1) + ... + s(n,n-d), terms with n-i < 0 absent."""
    if n < 1 or d < 1:
        raise ValueError("n, d must be >= 1")
    return sum(stirling_first_unsigned(n, n - i) for i in range(d + 1) if n - i >= 0)


def warren_bound(N: int, m: int, delta: int) -> int:
    """2 (2 delta)^N sum_{l=0}^{N} 2^l C(m, l)."""
    if N < 1 or m < 1 or delta < 1:
        raise ValueError("N, m, delta must be positive")
    return 2 * (2 * delta) ** N * sum(2 ** l * math.comb(m, l) for l in range(N + 1))


def radical_warren_bound(N: int, m: int, delta: int, r: int, s: int) -> int:
    """2 (2 s^(r-2) delta)^N sum_{l=0}^{N} 2^l C(m, l)."""
    if N < 1 or m < 1 or delta < 1:
        raise ValueError("N, m, delta must be positive")
    if r < 2 or s < 1:
        raise ValueError("need r >= 2, s >= 1")
    return (2 * (2 * s ** (r - 2) * delta) ** N
            * sum(2 ** l * math.comb(m, l) for l in range(N + 1)))


def main_theorem_exponent(d: int, k: int) -> int:
    """Growth exponent of the maximum ordering count: 2dk for d >= 2,
    4 ceil(k/2) - 2 on the line."""
    if d < 1 or k < 1:
        raise ValueError("d, k must be >= 1")
    if d == 1:
        return 4 * ((k + 1) // 2) - 2
    return 2 * d * k


# -- the sign-pattern family f_a ----------------------------------------

def sign_family_eval(a_vec: Sequence[int], delta: Fraction, x: Fraction) -> RadicalSum:
    """sum_i a_i (sqrt((x-i)^2 + delta^2) - sqrt((x-i)^2)) with a_i = ±1,
    0 < delta < 2/len(a_vec); exact."""
    l = len(a_vec)
    delta = Fraction(delta)
    if not (0 < delta < Fraction(2, l)):
        raise ValueError(f"need 0 < delta < 2/{l}")
    if any(a not in (-1, 1) for a in a_vec):
        raise ValueError("entries of a_vec must be ±1")
    x = Fraction(x)
    d2 = delta * delta
    total = RadicalSum.ZERO
    for i, ai in enumerate(a_vec, start=1):
        sq = (x - i) * (x - i)
        total = total + RadicalSum.sqrt_of(sq + d2, ai)
        total = total - RadicalSum.sqrt_of(sq, ai)
    return total


def verify_sign_family(l: int, delta: Fraction, precision_cap: int = 4096,
                       failures: Optional[list] = None) -> bool:
    """Check sgn(f_a(j)) = a_j for every a in {±1}^l and j in [l], each sign
    certified.  An indeterminate sign counts as failure and is recorded."""
    delta = Fraction(delta)
    if not (0 < delta < Fraction(2, l)):
        raise ValueError(f"need 0 < delta < 2/{l}")
    d2 = delta * delta
    # at x = j the i-th term is sqrt((j-i)^2 + delta^2) - |j-i|
    base = {}
    for j in range(1, l + 1):
        base[j] = [((j - i) * (j - i) + d2, Fraction(abs(j - i)))
                   for i in range(1, l + 1)]
    ok = True
    for a_vec in itertools.product((1, -1), repeat=l):
        for j in range(1, l + 1):
            f = RadicalSum(
                [(ai, rad) for ai, (rad, _) in zip(a_vec, base[j])]
                + [(-ai * flat, 1) for ai, (_, flat) in zip(a_vec, base[j]) if flat])
            s = f.sign(precision_cap)
            if s != a_vec[j - 1]:
                ok = False
                if failures is not None:
                    failures.append((a_vec, j, s))
    return ok


def sign_family_patterns(m: int, delta: Optional[Fraction] = None,
                       precision_cap: int = 4096) -> set:
    """Proper sign patterns realized by m binary-code choices of a-vectors of
    length 2^m, evaluated at the integer points; all 2^m patterns appear."""
    l = 2 ** m
    delta = Fraction(delta) if delta is not None else Fraction(1, l)
    vecs = []
    for t in range(m):
        vecs.append(tuple(1 if ((j >> t) & 1) == 0 else -1 for j in range(l)))
    patterns = set()
    for j in range(1, l + 1):
        pat = []
        for v in vecs:
            s = sign_family_eval(v, delta, j).sign(precision_cap)
            if s is None or s == 0:
                raise ValueError(f"sign not certified at j={j}")
            pat.append(s)
        patterns.add(tuple(pat))
    return patterns


# -- exact cyclotomic arithmetic ----------------------------------------

def _poly_divmod_int(num: List[int], den: List[int]) -> Tuple[List[int], List[int]]:
    """Division of integer polynomials (ascending coeffs), den monic."""
    num = list(num)
    dn = len(den) - 1
    q = [0] * max(1, len(num) - dn)
    for i in range(len(num) - 1 - dn, -1, -1):
        c = num[i + dn]
        if c:
            q[i] = c
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return q, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(s: int) -> Tuple[int, ...]:
    """Coefficients (ascending) of the s-th cyclotomic polynomial."""
    if s < 1:
        raise ValueError("s must be >= 1")
    if s == 1:
        return (-1, 1)
    num = [0] * (s + 1)
    num[0], num[s] = -1, 1
    for d in range(1, s):
        if s % d == 0:
            q, rem = _poly_divmod_int(num, list(cyclotomic_polynomial(d)))
            assert all(c == 0 for c in rem)
            num = q
    return tuple(num)


@dataclass(frozen=True)
class CyclotomicInt:
    """Element of Z[omega], omega = e^(2 pi i / s), stored as an integer
    coefficient vector reduced only modulo x^s - 1; true cyclotomic reduction
    happens once at the final integrality check."""

    order: int
    coeffs: Tuple[int, ...]

    @classmethod
    def zero(cls, s: int) -> "CyclotomicInt":
        return cls(s, (0,) * s)

    @classmethod
    def one(cls, s: int) -> "CyclotomicInt":
        return cls(s, (1,) + (0,) * (s - 1))

    @classmethod
    def omega_power(cls, s: int, t: int) -> "CyclotomicInt":
        v = [0] * s
        v[t % s] = 1
        return cls(s, tuple(v))

    def __add__(self, other: "CyclotomicInt") -> "CyclotomicInt":
        return CyclotomicInt(self.order,
                             tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "CyclotomicInt":
        return CyclotomicInt(self.order, tuple(-a for a in self.coeffs))

    def __mul__(self, other: "CyclotomicInt") -> "CyclotomicInt":
        s = self.order
        out = [0] * s
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[(i + j) % s] += a * b
        return CyclotomicInt(s, tuple(out))

    def as_rational_integer(self) -> Optional[int]:
        """The exact integer this element equals, or None if it is not a
        rational integer (decided by reduction modulo the s-th cyclotomic
        polynomial)."""
        phi = list(cyclotomic_polynomial(self.order))
        _, rem = _poly_divmod_int(list(self.coeffs), phi)
        if len(rem) == 1:
            return rem[0]
        if all(c == 0 for c in rem[1:]):
            return rem[0]
        return None


@dataclass
class GaloisExpansion:
    r: int
    s: int
    poly: Dict[Tuple[int, ...], int]            # integer-certified expansion
    exponents_divisible: bool
    coeffs_integral: bool
    raw: Dict[Tuple[int, ...], CyclotomicInt] = field(repr=False, default_factory=dict)


def galois_product_expand(r: int, s: int, guard: int = 10 ** 4) -> GaloisExpansion:
    """Exact expansion of prod over 0 <= t_2,...,t_r <= s-1 of
    (xi_1 + omega^{t_2} xi_2 + ... + omega^{t_r} xi_r), with verification
    that every surviving exponent vector is entrywise divisible by s and all
    coefficients are rational integers."""
    if r < 2 or s < 2:
        raise ValueError("need r >= 2 and s >= 2")
    if s ** (r - 1) > guard:
        raise ValueError(f"guard exceeded: s^(r-1) = {s ** (r - 1)} > {guard}")

    one = CyclotomicInt.one(s)
    poly: Dict[Tuple[int, ...], CyclotomicInt] = {(0,) * r: one}
    for ts in itertools.product(range(s), repeat=r - 1):
        factor = [(tuple(1 if i == 0 else 0 for i in range(r)), one)]
        for j, t in enumerate(ts, start=1):
            exp = tuple(1 if i == j else 0 for i in range(r))
            factor.append((exp, CyclotomicInt.omega_power(s, t)))
        new: Dict[Tuple[int, ...], CyclotomicInt] = {}
        for exp1, c1 in poly.items():
            for exp2, c2 in factor:
                exp = tuple(a + b for a, b in zip(exp1, exp2))
                prod = c1 * c2
                if exp in new:
                    new[exp] = new[exp] + prod
                else:
                    new[exp] = prod
        poly = new

    int_poly: Dict[Tuple[int, ...], int] = {}
    divisible = True
    integral = True
    for exp, c in poly.items():
        v = c.as_rational_integer()
        if v is None:
            integral = False
            continue
        if v == 0:
            continue
        int_poly[exp] = v
        if any(e % s for e in exp):
            divisible = False
    return GaloisExpansion(r, s, int_poly, divisible, integral, poly)


def galois_numeric_check(exp: GaloisExpansion, points: Sequence[Sequence[Fraction]],
                         precision: int = 300) -> float:
    """Max |product - expansion| over rational sample points, evaluated at
    high precision; should be ~2^-precision when the expansion is correct."""
    worst = 0.0
    with gmpy2.context(precision=precision, allow_complex=True):
        omega = gmpy2.exp(gmpy2.mpc(0, 2) * gmpy2.const_pi() / exp.s)
        for xi in points:
            vals = [gmpy2.mpfr(gmpy2.mpq(q.numerator, q.denominator)) for q in xi]
            prod = gmpy2.mpc(1)
            for ts in itertools.product(range(exp.s), repeat=exp.r - 1):
                term = gmpy2.mpc(vals[0])
                for j, t in enumerate(ts, start=1):
                    term += omega ** t * vals[j]
                prod *= term
            ev = gmpy2.mpfr(0)
            for e, c in exp.poly.items():
                mono = gmpy2.mpfr(c)
                for v, p in zip(vals, e):
                    mono *= v ** p
                ev += mono
            err = abs(prod - ev)
            worst = max(worst, float(err))
    return worst


# -- connected components of one-variable radical combinations ----------

@dataclass(frozen=True)
class RadicalComboSpec:
    """f(x) = c0 + sum_i c_i (sqrt(x^2 + a_i^2) - d_i), a_i > 0."""

    c0: Fraction
    terms: Tuple[Tuple[Fraction, Fraction, Fraction], ...]  # (c, a, d)

    def __post_init__(self):
        for _, a, _ in self.terms:
            if a <= 0:
                raise ValueError("every a_i must be positive")

    def evaluate(self, x: Fraction) -> RadicalSum:
        x = Fraction(x)
        out = RadicalSum.from_rational(
            self.c0 - sum(c * d for c, _, d in self.terms))
        for c, a, _ in self.terms:
            out = out + RadicalSum.sqrt_of(x * x + a * a, c)
        return out


@dataclass
class ComponentCount:
    components: int           # certified lower bound on components of R \ V(f)
    sign_changes: int
    samples: int
    saturated: bool           # True when the last refinement round still grew


def count_components_radical(spec: RadicalComboSpec,
                             x_max: Optional[Fraction] = None,
                             refine_rounds: int = 4,
                             precision_cap: int = 4096) -> ComponentCount:
    """Certified lower bound on the number of connected components of
    R minus the zero set, by adaptive sign scanning with exact signs at
    rational sample points (f is even in x, but the full line is scanned)."""
    if x_max is None:
        a_max = max((a for _, a, _ in spec.terms), default=Fraction(1))
        x_max = 64 * (a_max + 1)
    # dyadic ladder out to x_max, mirrored through 0
    pos = [Fraction(0)]
    t = Fraction(1, 4)
    while t <= x_max:
        pos.append(t)
        t *= 2
    pos.append(x_max * 2)
    xs = sorted(set([-x for x in pos] + pos))

    def sign_at(x: Fraction) -> int:
        for attempt in range(20):
            s = spec.evaluate(x).sign(precision_cap)
            if s is not None and s != 0:
                return s
            x = x + Fraction(1, 2 ** (20 + attempt))
        raise ValueError("could not certify a nonzero sign near a sample")

    signs = [sign_at(x) for x in xs]

    def changes(sgns):
        return sum(1 for a, b in zip(sgns, sgns[1:]) if a != b)

    prev = changes(signs)
    saturated = False
    for rnd in range(refine_rounds):
        new_xs, new_signs = [xs[0]], [signs[0]]
        for (x0, s0), (x1, s1) in zip(zip(xs, signs), zip(xs[1:], signs[1:])):
            mid = (x0 + x1) / 2
            new_xs.append(mid)
            new_signs.append(sign_at(mid))
            new_xs.append(x1)
            new_signs.append(s1)
        xs, signs = new_xs, new_signs
        cur = changes(signs)
        saturated = cur > prev
        if cur == prev and rnd > 0:
            break
        prev = cur

    return ComponentCount(prev + 1, prev, len(xs), saturated)


def _tenth_root_rational(a: Fraction, rel_err: Fraction = Fraction(1, 100)) -> Fraction:
    """Rational approximation of a^(1/10) within the given relative error."""
    with gmpy2.context(precision=80):
        v = gmpy2.root(gmpy2.mpfr(gmpy2.mpq(a.numerator, a.denominator)), 10)
        q = Fraction(int(gmpy2.mpq(v).numerator), int(gmpy2.mpq(v).denominator))
    q = q.limit_denominator(10 ** 6)
    # certify |q - a^(1/10)| <= rel_err * a^(1/10)  <=>  (1-e)^10 a <= q^10 <= (1+e)^10 a
    lo = (1 - rel_err) ** 10 * a
    hi = (1 + rel_err) ** 10 * a
    q10 = q ** 10
    if not (lo <= q10 <= hi):
        raise ValueError(f"tenth-root approximation of {a} out of tolerance")
    return q


def component_spec_from_scales(a_list: Sequence[Fraction]) -> RadicalComboSpec:
    """1 + sum_i (-1)^i q_i (sqrt(x^2 + a_i^2) - a_i) with q_i a certified
    1%-accurate rational stand-in for a_i^(1/10)."""
    terms = []
    for i, a in enumerate(a_list, start=1):
        a = Fraction(a)
        q = _tenth_root_rational(a)
        terms.append((q if i % 2 == 0 else -q, a, a))
    return RadicalComboSpec(Fraction(1), tuple(terms))


def find_component_ladder(r: int, max_doublings: int = 40) -> List[Fraction]:
    """Scales a_1 < ... < a_{r-1} whose alternating combination certifies
    2r - 1 components, found by a doubling ladder a_{i+1} = a_i^2 * 2^j."""
    if r < 1:
        raise ValueError("r must be >= 1")
    if r == 1:
        return []
    a: List[Fraction] = [Fraction(1)]
    while len(a) < r - 1:
        target = 2 * (len(a) + 2) - 1
        base = a[-1] ** 2
        for j in range(1, max_doublings + 1):
            cand = base * 2 ** j
            trial = a + [cand]
            spec = component_spec_from_scales(trial)
            got = count_components_radical(spec)
            if got.components == target:
                a.append(cand)
                break
        else:
            raise ValueError(f"ladder failed to reach {target} components")
    return a
