"""Lower-bound constructions: flanking limits and their composition, the
one-dimensional flanking generator, theta ratio machinery with closed-form
crossings, delta sets, good pairs, check-ordering generation, and the
recursive lower-bound configuration builder.

"Sufficiently large" scale parameters are made operational by doubling
ladders with consecutive-agreement stopping rules; nothing is accepted
without an exact a-posteriori verification.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from vantage.enumeration import (
    OrderingCatalog,
    TaggedOrdering,
    _rank_tagged,
    enumerate_hat_psi,
    enumerate_psi1_exact,
    estimate_psi,
    trial_rng,
)
from vantage.geometry import (
    CandidateSet,
    Ordering,
    Point,
    TieError,
    VantageMultiset,
    rank,
)
from vantage.scalar import ComparisonResult, RadicalSum, compare

NEG_INF = float("-inf")
POS_INF = float("inf")

LADDER_CAP = 2 ** 60


class OverlapError(ValueError):
    """Flanked parts overlap; the separation scale R is too small."""


class StabilizationError(RuntimeError):
    """A doubling ladder hit its cap without the required agreements."""


class GoodnessError(ValueError):
    """Operation requires a certified good pair."""


# -- hat (flanking-limit) machinery ------------------------------------

@dataclass(frozen=True)
class HatConfig:
    """Limit parameters (u1, u2) for a pair of far-away flanking vantage
    points, with k additional central vantage points."""

    k: int
    u1: Point
    u2: Point

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be >= 0")
        if self.u1.dim != self.u2.dim:
            raise ValueError("u1, u2 dimension mismatch")


def hat_D(k: int, U: HatConfig, c: Point, side: int) -> RadicalSum:
    """Effective distance of a side-1 or side-2 point in the infinite
    separation limit: |c - u_s| + ((k+1) c + u_other) . e1."""
    if side not in (1, 2):
        raise ValueError("side must be 1 or 2")
    u_near, u_far = (U.u1, U.u2) if side == 1 else (U.u2, U.u1)
    if c.dim != u_near.dim:
        raise ValueError("dimension mismatch")
    linear = (k + 1) * c[0] + u_far[0]
    return RadicalSum.sqrt_of(c.sq_dist(u_near)) + RadicalSum.from_rational(linear)


def hat_tagged_values(k: int, U: HatConfig, C1: Sequence[Point],
                      C2: Sequence[Point]):
    values = []
    for i, c in enumerate(C1):
        values.append(((1, i), hat_D(k, U, c, 1)))
    for i, c in enumerate(C2):
        values.append(((2, i), hat_D(k, U, c, 2)))
    return values


def hat_ordering(k: int, U: HatConfig, C1: Sequence[Point],
                 C2: Sequence[Point]) -> TaggedOrdering:
    ordering = _rank_tagged(hat_tagged_values(k, U, C1, C2))
    if ordering is None:
        raise TieError(-1, -1)
    return ordering


def boxplus(sigma_prime: Ordering, sigma_hat: TaggedOrdering,
            n_prime: int, n1: int) -> Ordering:
    """Concatenate an ordering of C' with a tagged ordering of C1 ⊔ C2 under
    the natural embedding into the composite index space (C' first, then C1,
    then C2)."""
    tail = tuple(n_prime + (idx if side == 1 else n1 + idx)
                 for side, idx in sigma_hat)
    return tuple(sigma_prime) + tail


def _e1_shift(dim: int, scale: Fraction) -> Point:
    return Point((scale,) + (Fraction(0),) * (dim - 1))


def build_flanked(C_prime: Optional[CandidateSet], C1: Sequence[Point],
                  C2: Sequence[Point], R: Fraction) -> CandidateSet:
    """Composite candidate set C' ∪ (R^3 e1 + R C1) ∪ (-R^3 e1 - R C2)."""
    R = Fraction(R)
    if R <= 0:
        raise ValueError("R must be positive")
    pts = list(C_prime.points) if C_prime is not None else []
    dim = pts[0].dim if pts else (C1[0].dim if C1 else C2[0].dim)
    shift = _e1_shift(dim, R ** 3)
    for c in C1:
        pts.append(shift + c.scale(R))
    for c in C2:
        pts.append((shift + c.scale(R)).scale(-1))
    if len(set(pts)) != len(pts):
        raise OverlapError(f"flanked parts overlap at R={R}")
    return CandidateSet(pts)


def lift_vantage(V_prime: Optional[VantageMultiset], U: HatConfig,
                 R: Fraction) -> VantageMultiset:
    """V' together with the two actual flanking vantage points
    u1 = R^3 e1 + R u1_hat and u2 = -(R^3 e1 + R u2_hat)."""
    R = Fraction(R)
    dim = U.u1.dim
    shift = _e1_shift(dim, R ** 3)
    u1 = shift + U.u1.scale(R)
    u2 = (shift + U.u2.scale(R)).scale(-1)
    entries = list(V_prime.entries) if V_prime is not None else []
    entries += [(u1, 1), (u2, 1)]
    return VantageMultiset(entries)


def compose_stabilized(C_prime: Optional[CandidateSet],
                       V_prime: Optional[VantageMultiset],
                       C1: Sequence[Point], C2: Sequence[Point],
                       U: HatConfig, R0: Fraction = Fraction(16),
                       agreements: int = 3,
                       cap: int = LADDER_CAP) -> Tuple[Fraction, Ordering]:
    """Find R such that the flanked configuration ranks exactly as the
    boxplus composition, with `agreements` consecutive ladder successes.

    Returns (first agreeing R, composite ordering).
    """
    k = V_prime.size if V_prime is not None else 0
    if k == 0 and C_prime is not None and len(C_prime) > 0:
        raise ValueError("k = 0 requires an empty core set")
    sigma_prime = rank(C_prime, V_prime) if C_prime is not None else ()
    sigma_hat = hat_ordering(k, U, C1, C2)
    n_prime = len(C_prime) if C_prime is not None else 0
    expected = boxplus(sigma_prime, sigma_hat, n_prime, len(C1))

    R = Fraction(R0)
    streak = 0
    first_R = None
    while R <= cap:
        try:
            C = build_flanked(C_prime, C1, C2, R)
            V = lift_vantage(V_prime, U, R)
            got = rank(C, V)
        except (OverlapError, TieError):
            streak, first_R = 0, None
            R *= 2
            continue
        if got == expected:
            if streak == 0:
                first_R = R
            streak += 1
            if streak == agreements:
                return first_R, expected
        else:
            streak, first_R = 0, None
        R *= 2
    raise StabilizationError(f"no {agreements} consecutive agreements up to cap {cap}")


# -- the d=1 flanking generator (two families per side) -----------------

def gen_d1_flanking(k: int, m: int, R: Fraction,
                    a: Optional[Sequence[Fraction]] = None,
                    b: Optional[Sequence[Fraction]] = None
                    ) -> Tuple[Tuple[Point, ...], Tuple[Point, ...]]:
    """The two 2m-element flanking sets on the line whose limit orderings
    factor through two independent interleaving parameters."""
    if k < 1 or m < 1:
        raise ValueError("k, m must be >= 1")
    R = Fraction(R)
    a = [Fraction(x) for x in a] if a is not None else \
        [Fraction(i, m) for i in range(1, m + 1)]
    b = [Fraction(x) for x in b] if b is not None else \
        [Fraction(i) for i in range(1, m + 1)]
    if len(a) != m or len(b) != m:
        raise ValueError("a, b must have length m")
    diffs = [ai - bj for ai in a for bj in b]
    if len(set(diffs)) != m * m:
        raise ValueError("differences a_i - b_j must be pairwise distinct")
    C1 = [Point((k * (R + ai),)) for ai in a] + \
         [Point((k * (3 * R + ai),)) for ai in a]
    C2 = [Point(((k + 2) * (R + bi),)) for bi in b] + \
         [Point((2 * (k + 2) * R + k * (R + bi),)) for bi in b]
    if len(set(C1)) != 2 * m or len(set(C2)) != 2 * m:
        raise ValueError("flanking sets degenerate at this R")
    return tuple(C1), tuple(C2)


def hat_U_d1(k: int, R: Fraction, w1: Fraction, w2: Fraction) -> HatConfig:
    """The limit vantage parameters (k(k+2) w1, 2(k+2)R + k(k+2) w2)."""
    kk = Fraction(k * (k + 2))
    return HatConfig(k, Point((kk * w1,)),
                     Point((2 * (k + 2) * Fraction(R) + kk * w2,)))


def flanking_grid(m: int, a: Optional[Sequence[Fraction]] = None,
                  b: Optional[Sequence[Fraction]] = None
                  ) -> List[Tuple[Fraction, Fraction]]:
    """(w1, w2) grid hitting every ordering of both interleaving families.

    The first family's order depends only on w1 through the breakpoints
    (a_i - b_j)/2, the second only on w1 - w2 through the same breakpoints,
    so midpoints between consecutive breakpoints (plus outer points) scanned
    independently are exhaustive.
    """
    a = [Fraction(x) for x in a] if a is not None else \
        [Fraction(i, m) for i in range(1, m + 1)]
    b = [Fraction(x) for x in b] if b is not None else \
        [Fraction(i) for i in range(1, m + 1)]
    breaks = sorted({(ai - bj) / 2 for ai in a for bj in b})
    samples = [breaks[0] - 1]
    samples += [(x + y) / 2 for x, y in zip(breaks, breaks[1:])]
    samples += [breaks[-1] + 1]
    return [(w1, w1 - t) for w1 in samples for t in samples]


def d1_flanking_catalog(k: int, m: int, R0: Fraction = Fraction(64),
                        cap: int = LADDER_CAP
                        ) -> Tuple[Fraction, Tuple[Point, ...], Tuple[Point, ...], OrderingCatalog]:
    """Scan the (w1, w2) grid over a doubling ladder in R until at least m^4
    distinct limit orderings appear and the count stabilizes."""
    target = m ** 4
    R = Fraction(R0)
    prev_count = -1
    while R <= cap:
        C1, C2 = gen_d1_flanking(k, m, R)
        configs = [hat_U_d1(k, R, w1, w2) for w1, w2 in flanking_grid(m)]
        catalog = enumerate_hat_psi(C1, C2, k, configs=configs)
        if len(catalog) >= target and len(catalog) == prev_count:
            return R, C1, C2, catalog
        prev_count = len(catalog)
        R *= 2
    raise StabilizationError(f"flanking catalog did not stabilize below cap {cap}")


# -- theta machinery ----------------------------------------------------

def theta(a: Fraction, x: Fraction) -> RadicalSum:
    """sqrt(x^2 + a^2) - x, exactly."""
    a, x = Fraction(a), Fraction(x)
    if a <= 0:
        raise ValueError("a must be positive")
    return RadicalSum.sqrt_of(x * x + a * a) - RadicalSum.from_rational(x)


@dataclass(frozen=True)
class RadicalRatio:
    """Exact ratio num/den of radical sums with a positive denominator."""

    num: RadicalSum
    den: RadicalSum

    def compare_fraction(self, q: Fraction,
                         precision_cap: int = 4096) -> ComparisonResult:
        return compare(self.num, self.den * Fraction(q), precision_cap)

    def compare(self, other: "RadicalRatio",
                precision_cap: int = 4096) -> ComparisonResult:
        return compare(self.num * other.den, other.num * self.den, precision_cap)

    def as_fraction(self) -> Fraction:
        return self.num.as_fraction() / self.den.as_fraction()

    def __float__(self):
        return float(self.num) / float(self.den)


def theta_ratio(a: Fraction, b: Fraction, x) -> RadicalRatio:
    """theta_a(x) / theta_b(x) extended continuously: 1 at -inf, a^2/b^2 at
    +inf.  Strictly increasing in x."""
    a, b = Fraction(a), Fraction(b)
    if a <= 0 or b <= 0:
        raise ValueError("a, b must be positive")
    if isinstance(x, float) and x == NEG_INF:
        return RadicalRatio(RadicalSum.from_rational(1), RadicalSum.from_rational(1))
    if isinstance(x, float) and x == POS_INF:
        return RadicalRatio(RadicalSum.from_rational(a * a),
                            RadicalSum.from_rational(b * b))
    return RadicalRatio(theta(a, x), theta(b, x))


def theta_crossing_sq(a2: Fraction, b2: Fraction, p: Fraction, q: Fraction):
    """The unique x with theta_{a,b}(x) = p/q, given the squared parameters
    a^2 > b^2 > 0 and p >= q > 0 with p/q <= a^2/b^2.

    Returns -inf / +inf (floats) at the endpoints, otherwise the exact
    crossing as a RadicalSum (a signed square root of a rational).  The sign
    comes from one exact comparison of p/q against the ratio value a/b at 0.
    """
    a2, b2, p, q = Fraction(a2), Fraction(b2), Fraction(p), Fraction(q)
    if not (a2 > b2 > 0):
        raise ValueError("need a^2 > b^2 > 0")
    if not (p >= q > 0):
        raise ValueError("need p >= q > 0")
    if p * b2 > q * a2:
        raise ValueError("need p/q <= a^2/b^2")
    if p == q:
        return NEG_INF
    if p * b2 == q * a2:
        return POS_INF
    num = (a2 * q * q - b2 * p * p) ** 2
    den = 4 * p * q * (p - q) * (a2 * q - b2 * p)
    x2 = num / den
    # theta ratio at 0 is a/b; compare p/q with it via squares
    lhs = p * p * b2
    rhs = q * q * a2
    if lhs == rhs:
        return RadicalSum.ZERO
    sign = 1 if lhs > rhs else -1
    return RadicalSum.sqrt_of(x2, sign)


def theta_crossing(a: Fraction, b: Fraction, p: Fraction, q: Fraction):
    """Crossing for rational a > b > 0 (general callers use the squared
    form, since geometric side lengths are square roots of rationals)."""
    a, b = Fraction(a), Fraction(b)
    if not (a > b > 0):
        raise ValueError("need a > b > 0")
    return theta_crossing_sq(a * a, b * b, p, q)


# -- delta sets, good pairs, Gamma --------------------------------------

def delta_set(v: Point, C: Sequence[Point]) -> frozenset:
    """Squared-distance ratios > 1 from v to ordered candidate pairs."""
    pts = list(C)
    if any(v == c for c in pts):
        raise ValueError("v must not be a candidate point")
    r = [v.sq_dist(c) for c in pts]
    out = set()
    for i, j in itertools.combinations(range(len(pts)), 2):
        if r[i] > r[j]:
            out.add(r[i] / r[j])
        elif r[j] > r[i]:
            out.add(r[j] / r[i])
    return frozenset(out)


@dataclass
class GoodPairCertificate:
    delta1: frozenset
    delta2: frozenset
    not_candidates: bool
    sizes_full: bool
    disjoint: bool
    crossing_violations: List[tuple] = field(default_factory=list)
    good: bool = False


def _ordered_far_pairs(v: Point, C: Sequence[Point]) -> List[Tuple[int, int]]:
    r = [v.sq_dist(c) for c in C]
    return [(i, j) if r[i] > r[j] else (j, i)
            for i, j in itertools.combinations(range(len(C)), 2)
            if r[i] != r[j]]


def is_good_pair(v1: Point, v2: Point, C: Sequence[Point]
                 ) -> Tuple[bool, GoodPairCertificate]:
    """Decidable goodness test for a vantage parameter pair.

    All three conditions reduce to exact rational arithmetic: the Delta sets
    are rational, and two theta-ratio equations sharing a solution x is
    equivalent to equality of the closed-form signed squared crossings.
    """
    pts = list(C)
    m = len(pts)
    full = m * (m - 1) // 2
    not_cand = all(v1 != c for c in pts) and all(v2 != c for c in pts)
    if not not_cand:
        cert = GoodPairCertificate(frozenset(), frozenset(), False, False, False)
        return False, cert
    d1 = delta_set(v1, pts)
    d2 = delta_set(v2, pts)
    sizes_full = len(d1) == full and len(d2) == full
    disjoint = not (d1 & d2)
    cert = GoodPairCertificate(d1, d2, True, sizes_full, disjoint)
    if not (sizes_full and disjoint):
        return False, cert

    r1 = [v1.sq_dist(c) for c in pts]
    pairs = _ordered_far_pairs(v1, pts)

    def crossing_key(pair, target):
        a2, b2 = r1[pair[0]], r1[pair[1]]
        # target at or above a2/b2 has no finite crossing (equality is
        # already excluded by disjointness of the Delta sets)
        if target * b2 >= a2:
            return None
        return theta_crossing_sq(a2, b2, target.numerator, target.denominator)

    targets = sorted(d2)
    violations = []
    for P1, P2 in itertools.permutations(pairs, 2):
        for t1 in targets:
            k1 = crossing_key(P1, t1)
            if k1 is None:
                continue
            for t2 in targets:
                k2 = crossing_key(P2, t2)
                if k2 is not None and k1 == k2:
                    violations.append((P1, P2, t1, t2, k1))
    cert.crossing_violations = violations
    cert.good = not violations
    return cert.good, cert


def gamma_count(v1: Point, v2: Point, C: Sequence[Point]) -> int:
    """|{(a, b) in Delta(v1) x Delta(v2) : a > b}|."""
    d1 = delta_set(v1, C)
    d2 = delta_set(v2, C)
    return sum(1 for a in d1 for b in d2 if a > b)


# -- check (further-reduced) machinery ----------------------------------

@dataclass(frozen=True)
class CheckConfig:
    """Reduced vantage parameters (v1, v2, x, y) with y > 0."""

    v1: Point
    v2: Point
    x: Fraction
    y: Fraction

    def __post_init__(self):
        if self.y <= 0:
            raise ValueError("y must be positive")
        if self.v1.dim != self.v2.dim:
            raise ValueError("v1, v2 dimension mismatch")


def check_D1(cfg: CheckConfig, c: Point) -> RadicalSum:
    """sqrt(x^2 + |c - v1|^2) - x."""
    return (RadicalSum.sqrt_of(cfg.x * cfg.x + c.sq_dist(cfg.v1))
            - RadicalSum.from_rational(cfg.x))


def check_D2(cfg: CheckConfig, c: Point) -> Fraction:
    """y |c - v2|^2."""
    return cfg.y * c.sq_dist(cfg.v2)


def check_tagged_values(cfg: CheckConfig, C1: Sequence[Point],
                        C2: Sequence[Point]):
    values = []
    for i, c in enumerate(C1):
        values.append(((1, i), check_D1(cfg, c)))
    for i, c in enumerate(C2):
        values.append(((2, i), RadicalSum.from_rational(check_D2(cfg, c))))
    return values


def check_ordering(cfg: CheckConfig, C1: Sequence[Point],
                   C2: Sequence[Point]) -> TaggedOrdering:
    ordering = _rank_tagged(check_tagged_values(cfg, C1, C2))
    if ordering is None:
        raise TieError(-1, -1)
    return ordering


def _rational_strictly_between(lo: RadicalSum, hi: Optional[RadicalSum]
                               ) -> Fraction:
    """A rational strictly between two exact radical values (hi=None means
    anything above lo), certified by exact comparison."""
    prec = 64
    while prec <= 2 ** 16:
        lo_iv = lo.interval(prec)
        if hi is None:
            cand = lo_iv.hi_fraction() + 1
            if compare(RadicalSum.from_rational(cand), lo) is ComparisonResult.GREATER:
                return cand
        else:
            hi_iv = hi.interval(prec)
            if lo_iv.hi < hi_iv.lo:
                cand = (lo_iv.hi_fraction() + hi_iv.lo_fraction()) / 2
                if (compare(RadicalSum.from_rational(cand), lo) is ComparisonResult.GREATER
                        and compare(RadicalSum.from_rational(cand), hi) is ComparisonResult.LESS):
                    return cand
        prec *= 2
    raise StabilizationError("could not separate crossing values")


def gen_check_orderings(C: Sequence[Point], v1: Point, v2: Point
                        ) -> OrderingCatalog:
    """At least Gamma(v1, v2) distinct check orderings for a certified good
    pair, one per dominating quadruple, each carrying its CheckConfig witness
    and an exactly verified 4-term inequality chain."""
    good, cert = is_good_pair(v1, v2, C)
    if not good:
        raise GoodnessError(f"(v1, v2) is not a good pair: {cert}")
    pts = list(C)
    r1 = [v1.sq_dist(c) for c in pts]
    r2 = [v2.sq_dist(c) for c in pts]
    pairs1 = _ordered_far_pairs(v1, pts)
    pairs2 = _ordered_far_pairs(v2, pts)

    xis = []
    for (i1, i2) in pairs1:
        for (i3, i4) in pairs2:
            # 1 < |v2-c3|/|v2-c4| < |v1-c1|/|v1-c2|  (squared form)
            if r2[i3] * r1[i2] < r1[i1] * r2[i4]:
                x = theta_crossing_sq(r1[i1], r1[i2], r2[i3], r2[i4])
                xis.append((x, (i1, i2, i3, i4)))

    def cmp_x(u, w):
        res = compare(u[0], w[0])
        if res is ComparisonResult.EQUAL:
            raise GoodnessError("coincident crossings contradict goodness")
        return -1 if res is ComparisonResult.LESS else 1

    import functools
    xis.sort(key=functools.cmp_to_key(cmp_x))

    catalog = OrderingCatalog()
    for j, (xj, (i1, i2, i3, i4)) in enumerate(xis):
        hi = xis[j + 1][0] if j + 1 < len(xis) else None
        xp = _rational_strictly_between(xj, hi)
        th_hi = check_D1(CheckConfig(v1, v2, xp, Fraction(1)), pts[i1])
        th_lo = check_D1(CheckConfig(v1, v2, xp, Fraction(1)), pts[i2])
        # y interval: th_lo / r2[i4] < y < th_hi / r2[i3]
        y_lo = RadicalRatio(th_lo, RadicalSum.from_rational(r2[i4]))
        y_hi = RadicalRatio(th_hi, RadicalSum.from_rational(r2[i3]))

        def certify(y: Fraction) -> bool:
            if y <= 0:
                return False
            c1 = compare(th_lo, RadicalSum.from_rational(y * r2[i4]))
            c2 = compare(RadicalSum.from_rational(y * r2[i3]), th_hi)
            return (c1 is ComparisonResult.LESS and c2 is ComparisonResult.LESS)

        y = None
        prec = 64
        while prec <= 2 ** 16 and y is None:
            lo_f = (th_lo.interval(prec).hi_fraction() / r2[i4])
            hi_f = (th_hi.interval(prec).lo_fraction() / r2[i3])
            if lo_f < hi_f:
                for num, den in ((1, 2), (1, 3), (2, 3), (1, 4), (3, 4),
                                 (1, 8), (7, 8), (3, 8), (5, 8)):
                    cand = lo_f + (hi_f - lo_f) * Fraction(num, den)
                    if certify(cand):
                        try:
                            cfg = CheckConfig(v1, v2, xp, cand)
                            ordering = check_ordering(cfg, pts, pts)
                        except TieError:
                            continue
                        y = cand
                        entry_cfg = cfg
                        entry_ordering = ordering
                        break
            prec *= 2
        if y is None:
            raise StabilizationError("no admissible y found for a quadruple")
        if not catalog.add(entry_ordering, entry_cfg):
            raise GoodnessError("duplicate check ordering; goodness violated")
    assert len(catalog) >= gamma_count(v1, v2, pts)
    return catalog


def embed_check_to_hat(C1: Sequence[Point], C2: Sequence[Point], R: Fraction
                       ) -> Tuple[Tuple[Point, ...], Tuple[Point, ...],
                                  Callable[[CheckConfig], HatConfig]]:
    """Embed a check problem in R^(d-1) as a hat problem in R^d: side-1
    points get a zero first coordinate, side-2 points are additionally scaled
    by R, and check parameters map to
    U = ((x, v1), (R^2/(2y), R v2))."""
    R = Fraction(R)
    if R <= 0:
        raise ValueError("R must be positive")
    hat1 = tuple(Point((Fraction(0),) + tuple(c)) for c in C1)
    hat2 = tuple(Point((Fraction(0),) + tuple(c.scale(R))) for c in C2)

    def u_map(cfg: CheckConfig, k: int = 0) -> HatConfig:
        u1 = Point((cfg.x,) + tuple(cfg.v1))
        u2 = Point((R * R / (2 * cfg.y),) + tuple(cfg.v2.scale(R)))
        return HatConfig(k, u1, u2)

    return hat1, hat2, u_map


def stabilize_embedding(C1: Sequence[Point], C2: Sequence[Point],
                        cfg: CheckConfig, k: int = 0,
                        R0: Fraction = Fraction(8), agreements: int = 2,
                        cap: int = LADDER_CAP) -> Tuple[Fraction, TaggedOrdering]:
    """Double R until the embedded hat ordering equals the check ordering
    for `agreements` consecutive rungs."""
    target = check_ordering(cfg, C1, C2)
    R = Fraction(R0)
    streak = 0
    first_R = None
    while R <= cap:
        hat1, hat2, u_map = embed_check_to_hat(C1, C2, R)
        try:
            got = hat_ordering(k, u_map(cfg, k), hat1, hat2)
        except TieError:
            got = None
        if got == target:
            if streak == 0:
                first_R = R
            streak += 1
            if streak == agreements:
                return first_R, target
        else:
            streak, first_R = 0, None
        R *= 2
    raise StabilizationError("embedding did not stabilize below cap")


# -- recursive lower-bound configurations --------------------------------

@dataclass
class LowerBoundConfig:
    C: CandidateSet
    catalog: OrderingCatalog  # ordering -> verified VantageMultiset
    meta: dict = field(default_factory=dict)


def _generic_base_set(d: int, n: int, seed: int) -> CandidateSet:
    if d == 1:
        return CandidateSet([(Fraction(2) ** i,) for i in range(n)])
    rng = trial_rng(seed, 777)
    pts = set()
    while len(pts) < n:
        pts.add(tuple(Fraction(rng.randrange(0, 64 * n)) +
                      Fraction(rng.randrange(1, 97), 97) for _ in range(d)))
    return CandidateSet(sorted(pts))


def build_lower_bound_config(d: int, k: int, n_budget: int,
                             seed: int = 0) -> LowerBoundConfig:
    """Assemble a candidate set and a verified catalog of orderings realized
    by explicit k-point vantage multisets, by the k -> k+2 flanking
    recursion.  Base cases: k=1 generic sets, k=2 by doubling each k=1
    vantage point."""
    if d < 1 or k < 1:
        raise ValueError("d, k must be >= 1")
    if n_budget < 2:
        raise ValueError("n_budget too small")
    if n_budget > 16:
        raise ValueError("n_budget exceeds desk-scale guard (16)")

    if k in (1, 2):
        C = _generic_base_set(d, n_budget, seed)
        if d <= 2:
            base = enumerate_psi1_exact(C)
        else:
            base = estimate_psi(C, 1, trials=20000, seed=seed).catalog
        catalog = OrderingCatalog()
        for ordering, V in base.items():
            if k == 2:
                V = VantageMultiset([(p, 2 * m) for p, m in V.entries])
            assert rank(C, V) == ordering
            catalog.add(ordering, V)
        return LowerBoundConfig(C, catalog, {"kind": f"base k={k}"})

    # recursion: k = (k-2) + 2; flanks of size 2*m_fl per side beat the best
    # k=1 catalog on the same n only from m_fl = 2 upward
    m_fl = 2 if n_budget >= 10 else 1
    m_budget = n_budget - 4 * m_fl
    if m_budget < 2:
        raise ValueError("n_budget too small for the flanking recursion")
    inner = build_lower_bound_config(d, k - 2, m_budget, seed)
    kk = k - 2

    if d == 1:
        Rhat, C1, C2, hat_catalog = d1_flanking_catalog(kk, m_fl)
    else:
        rng = trial_rng(seed, 999)
        C1 = tuple(Point(tuple(Fraction(rng.randrange(1, 50), 7) for _ in range(d)))
                   for _ in range(2 * m_fl))
        C2 = tuple(Point(tuple(Fraction(rng.randrange(1, 50), 11) for _ in range(d)))
                   for _ in range(2 * m_fl))
        hat_catalog = enumerate_hat_psi(C1, C2, kk, trials=1500, seed=seed)

    pair_list = [(s, V, sh, U) for s, V in inner.catalog.items()
                 for sh, U in hat_catalog.items()]

    R = Fraction(64)
    streak = 0
    first_R = None
    results: Dict[tuple, VantageMultiset] = {}
    while R <= LADDER_CAP:
        ok = True
        trial_results: Dict[tuple, VantageMultiset] = {}
        try:
            C = build_flanked(inner.C, C1, C2, R)
        except OverlapError:
            R *= 2
            streak, first_R = 0, None
            continue
        for sigma, V_inner, sigma_hat, U in pair_list:
            expected = boxplus(sigma, sigma_hat, len(inner.C), len(C1))
            V = lift_vantage(V_inner, U, R)
            try:
                got = rank(C, V)
            except TieError:
                ok = False
                break
            if got != expected:
                ok = False
                break
            trial_results[expected] = V
        if ok:
            if streak == 0:
                first_R = R
                results = trial_results
            streak += 1
            if streak == 3:
                C = build_flanked(inner.C, C1, C2, first_R)
                catalog = OrderingCatalog()
                for ordering, V in results.items():
                    catalog.add(ordering, V)
                return LowerBoundConfig(
                    C, catalog,
                    {"kind": f"flanked k={k}", "R": first_R,
                     "inner": inner.meta, "hat_count": len(hat_catalog)})
        else:
            streak, first_R = 0, None
        R *= 2
    raise StabilizationError("lower-bound composition did not stabilize")
