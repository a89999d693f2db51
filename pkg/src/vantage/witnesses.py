"""Witness constructions and certified verification for unlimited vantage
points: protrusive orderings, the line recursion, the distance-matrix
construction, vertex-transitive generators, small planar cases via conics,
and the certified six-point counterexample check.
"""

from __future__ import annotations

import itertools
import multiprocessing
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import gmpy2

from vantage import lp
from vantage.geometry import (
    CandidateSet,
    Ordering,
    Point,
    TieError,
    VantageMultiset,
    distance,
    rank,
)
from vantage.scalar import (
    ComparisonResult,
    Interval,
    RadicalSum,
    compare,
    eval_interval,
)

LADDER_CAP = 2 ** 60


class NonProtrusiveError(ValueError):
    """The requested ordering cannot be witnessed (triangle inequality)."""


class NotApplicableError(ValueError):
    """Construction preconditions fail for this candidate set."""


class VerificationError(RuntimeError):
    """A constructed witness failed its exact re-verification."""


class CenterSearchError(RuntimeError):
    def __init__(self, prefix):
        super().__init__(f"no admissible equidistant center for prefix {prefix}")
        self.prefix = prefix


@dataclass
class WitnessCertificate:
    ordering: Ordering
    V: VantageMultiset
    margin: RadicalSum
    verified: bool

    def margin_float(self) -> float:
        return float(self.margin)


def certify(C: CandidateSet, V: VantageMultiset, ordering: Ordering
            ) -> WitnessCertificate:
    """Exact re-verification: rank must reproduce the ordering; the margin is
    the smallest consecutive gap of distance sums."""
    got = rank(C, V)
    if got != tuple(ordering):
        raise VerificationError(f"witness ranks as {got}, wanted {tuple(ordering)}")
    from vantage.geometry import distance_sum
    sums = [distance_sum(V, c) for c in C.points]
    margin = None
    for a, b in zip(ordering, ordering[1:]):
        gap = sums[b] - sums[a]
        if margin is None or compare(gap, margin) is ComparisonResult.LESS:
            margin = gap
    if margin is None:
        margin = RadicalSum.ZERO
    return WitnessCertificate(tuple(ordering), V, margin, True)


# -- protrusive orderings ------------------------------------------------

def is_protrusive(C: CandidateSet, ordering: Sequence[int]) -> bool:
    """Each successive point must lie outside the convex hull of its
    predecessors; decided by exact rational feasibility (a running min/max
    window on the line)."""
    if C.dim == 1:
        vals = [C.points[i][0] for i in ordering]
        lo = hi = vals[0]
        for v in vals[1:]:
            if lo <= v <= hi:
                return False
            lo, hi = min(lo, v), max(hi, v)
        return True
    pts = [C.points[i].coords for i in ordering]
    for i in range(1, len(pts)):
        if lp.in_convex_hull(pts[i], pts[:i]):
            return False
    return True


def avoids_132_312(perm: Sequence[int]) -> bool:
    """No later entry strictly between two earlier ones (0- or 1-indexed
    alike); equivalent to protrusiveness for sorted collinear candidates."""
    n = len(perm)
    for i1 in range(n):
        for i2 in range(i1 + 1, n):
            lo, hi = min(perm[i1], perm[i2]), max(perm[i1], perm[i2])
            for i3 in range(i2 + 1, n):
                if lo < perm[i3] < hi:
                    return False
    return True


def protrusive_orderings(C: CandidateSet) -> List[Ordering]:
    return [p for p in itertools.permutations(range(C.n)) if is_protrusive(C, p)]


# -- d = 1 witness recursion ---------------------------------------------

def witness_d1(C: CandidateSet, ordering: Sequence[int]) -> WitnessCertificate:
    """Recursive flank construction on the line: strip the last entry,
    witness the rest, then add K copies of the two extremes of the remaining
    set, with K the least power of two making the final comparison strict.
    All arithmetic is rational."""
    if C.dim != 1:
        raise ValueError("witness_d1 requires dim 1")
    ordering = tuple(ordering)
    if not is_protrusive(C, ordering):
        raise NonProtrusiveError(f"{ordering} is not protrusive")
    coords = [p[0] for p in C.points]

    def d_sum(mults: Dict[Fraction, int], x: Fraction) -> Fraction:
        return sum((m * abs(x - v) for v, m in mults.items()), Fraction(0))

    def rec(sub: Tuple[int, ...]) -> Dict[Fraction, int]:
        if len(sub) == 1:
            return {coords[sub[0]]: 1}
        last = sub[-1]
        rest = sub[:-1]
        V = rec(rest)
        rest_vals = [coords[i] for i in rest]
        a, b = min(rest_vals), max(rest_vals)
        x_last = coords[last]
        # protrusive: x_last is outside [a, b]
        gap = 2 * (x_last - b) if x_last > b else 2 * (a - x_last)
        need = d_sum(V, coords[rest[-1]]) - d_sum(V, x_last)
        K = 1
        while K * gap <= need and K < LADDER_CAP:
            K *= 2
        if K * gap <= need:
            raise VerificationError("flank multiplicity ladder exhausted")
        V = dict(V)
        V[a] = V.get(a, 0) + K
        V[b] = V.get(b, 0) + K
        return V

    mults = rec(ordering)
    V = VantageMultiset([(Point((v,)), m) for v, m in mults.items()])
    return certify(C, V, ordering)


# -- distance matrix construction -----------------------------------------

def distance_matrix(C: CandidateSet) -> List[List[RadicalSum]]:
    n = C.n
    return [[distance(C.points[i], C.points[j]) for j in range(n)]
            for i in range(n)]


def _interval_solve(M: List[List[Interval]], rhs_cols: List[List[Interval]]
                    ) -> Optional[List[List[Interval]]]:
    """Gaussian elimination with interval coefficients; None when a pivot
    cannot be certified nonzero.  rhs_cols is a list of right-hand sides."""
    n = len(M)
    A = [row[:] for row in M]
    B = [col[:] for col in rhs_cols]
    ncols = len(B)
    for col in range(n):
        piv = None
        best = None
        for r in range(col, n):
            iv = A[r][col]
            if iv.is_positive() or iv.is_negative():
                mag = abs(float(iv.lo) + float(iv.hi))
                if best is None or mag > best:
                    best, piv = mag, r
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        for k in range(ncols):
            B[k][col], B[k][piv] = B[k][piv], B[k][col]
        for r in range(n):
            if r != col:
                factor = A[r][col] / A[col][col]
                for c2 in range(col, n):
                    A[r][c2] = A[r][c2] - factor * A[col][c2]
                for k in range(ncols):
                    B[k][r] = B[k][r] - factor * B[k][col]
    out = []
    for k in range(ncols):
        out.append([B[k][r] / A[r][r] for r in range(n)])
    return out


@dataclass
class NuVector:
    values: list                  # Fractions (exact) or Intervals
    exact: bool
    signs: Optional[List[int]]    # certified signs, None if unresolved

    @property
    def all_positive(self) -> Optional[bool]:
        if self.signs is None:
            return None
        return all(s > 0 for s in self.signs)


def nu_vector(C: CandidateSet, precision_cap: int = 4096) -> NuVector:
    """nu = M_C^{-1} 1: exact when all pairwise distances are rational,
    otherwise solved in interval arithmetic at escalating precision until
    every entry's sign is certified."""
    M = distance_matrix(C)
    n = C.n
    if all(all(e.is_rational or e.is_zero for e in row) for row in M):
        A = [[e.as_fraction() for e in row] for row in M]
        x = lp.solve_linear(A, [Fraction(1)] * n)
        if x is None:
            raise VerificationError("distance matrix is singular (impossible)")
        return NuVector(x, True, [0 if v == 0 else (1 if v > 0 else -1) for v in x])
    prec = 128
    while prec <= precision_cap:
        Miv = [[eval_interval(e, prec) for e in row] for row in M]
        one = [Interval.from_fraction(Fraction(1), prec) for _ in range(n)]
        sol = _interval_solve(Miv, [one])
        if sol is not None:
            nu = sol[0]
            if all(iv.is_positive() or iv.is_negative() for iv in nu):
                return NuVector(nu, False,
                                [1 if iv.is_positive() else -1 for iv in nu])
        prec *= 2
    return NuVector([], False, None)


def witness_by_distance_matrix(C: CandidateSet, ordering: Sequence[int],
                               precision_cap: int = 4096) -> WitnessCertificate:
    """Vantage multiset supported on C itself: scale C to diameter at most
    1/(10 n), round K nu + M^{-1} mu down to integers, and use those as
    multiplicities.  Requires nu = M^{-1} 1 entrywise positive."""
    ordering = tuple(ordering)
    n = C.n
    nu = nu_vector(C, precision_cap)
    if nu.signs is None:
        raise NotApplicableError("nu signs unresolved at precision cap")
    if not nu.all_positive:
        raise NotApplicableError("nu has a non-positive entry")

    # certified upper bound for the diameter, then lambda * diam <= 1/(10n)
    diam_up = max(eval_interval(distance(p, q), 64).hi_fraction()
                  for i, p in enumerate(C.points) for q in C.points[i + 1:])
    lam = Fraction(1, 10 * n) / diam_up
    scaled = CandidateSet([p.scale(lam) for p in C.points])
    M = distance_matrix(scaled)
    mu = [Fraction(ordering.index(i) + 1) for i in range(n)]

    prec = 128
    while prec <= precision_cap:
        Miv = [[eval_interval(e, prec) for e in row] for row in M]
        rhs1 = [Interval.from_fraction(Fraction(1), prec) for _ in range(n)]
        rhs2 = [Interval.from_fraction(mu[i], prec) for i in range(n)]
        sol = _interval_solve(Miv, [rhs1, rhs2])
        if sol is None:
            prec *= 2
            continue
        nu_iv, w_iv = sol
        if not all(iv.is_positive() for iv in nu_iv):
            prec *= 2
            continue
        K = 1
        while K <= LADDER_CAP:
            rho = [nu_iv[i].scale(Fraction(K)) + w_iv[i] for i in range(n)]
            if all(iv.lo > 1 for iv in rho):
                floors = []
                determinate = True
                for iv in rho:
                    flo = iv.lo_fraction().__floor__()
                    fhi = iv.hi_fraction().__floor__()
                    if flo != fhi:
                        determinate = False
                        break
                    floors.append(int(flo))
                if determinate:
                    V = VantageMultiset(
                        [(C.points[i], floors[i]) for i in range(n)])
                    return certify(C, V, ordering)
                break  # escalate precision
            K *= 2
        prec *= 2
    raise VerificationError("distance-matrix witness did not certify below cap")


# -- vertex-transitive generators -----------------------------------------

_HEXAGON = [(1, -1, 0), (1, 0, -1), (0, 1, -1), (-1, 1, 0), (-1, 0, 1), (0, -1, 1)]


def gen_vertex_transitive(kind: str, param: int = 0,
                          precision: int = 128) -> CandidateSet:
    """Rational realizations of vertex-transitive vertex sets.

    regular_polygon(m) is exact for m in {3, 4, 6} (triangle and hexagon use
    rational coordinates in R^3); other m get rational approximations of the
    trigonometric coordinates accurate to ~2^-precision, certified a
    posteriori by whoever consumes them.
    """
    if kind == "regular_polygon":
        m = param
        if m < 3:
            raise ValueError("polygon needs m >= 3")
        if m == 3:
            return CandidateSet([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
        if m == 4:
            return CandidateSet([(0, 0), (1, 0), (1, 1), (0, 1)])
        if m == 6:
            return CandidateSet(_HEXAGON)
        pts = []
        with gmpy2.context(precision=precision):
            two_pi = 2 * gmpy2.const_pi()
            for j in range(m):
                ang = two_pi * j / m
                x = gmpy2.mpq(gmpy2.cos(ang))
                y = gmpy2.mpq(gmpy2.sin(ang))
                pts.append((Fraction(int(x.numerator), int(x.denominator)),
                            Fraction(int(y.numerator), int(y.denominator))))
        return CandidateSet(pts)
    if kind == "simplex":
        d = param
        if d < 1:
            raise ValueError("simplex needs d >= 1")
        return CandidateSet([tuple(1 if i == j else 0 for i in range(d + 1))
                             for j in range(d + 1)])
    if kind == "hypercube":
        d = param
        if not (1 <= d <= 4):
            raise ValueError("hypercube supports 1 <= d <= 4")
        return CandidateSet(list(itertools.product((0, 1), repeat=d)))
    if kind == "cross_polytope":
        d = param
        if d < 2:
            raise ValueError("cross polytope needs d >= 2")
        pts = []
        for i in range(d):
            for s in (1, -1):
                pts.append(tuple(s if i == j else 0 for j in range(d)))
        return CandidateSet(pts)
    raise ValueError(f"unsupported kind {kind!r}")


def row_sums_constant(C: CandidateSet, tolerance: Fraction = Fraction(1, 10 ** 20)
                      ) -> bool:
    """All distance-matrix row sums equal: exactly when radicands allow,
    otherwise within the interval tolerance."""
    M = distance_matrix(C)
    sums = [sum(row, RadicalSum.ZERO) for row in M]
    ok = True
    for s in sums[1:]:
        diff = s - sums[0]
        if diff.is_zero:
            continue
        iv = eval_interval(diff, 192)
        if not (abs(iv.lo_fraction()) < tolerance and abs(iv.hi_fraction()) < tolerance):
            ok = False
    return ok


# -- affinely independent sets ---------------------------------------------

def _affine_rank(points: Sequence[Point]) -> int:
    base = points[0]
    rows = [[c - b for c, b in zip(p.coords, base.coords)] for p in points[1:]]
    if not rows:
        return 0
    null = lp.nullspace(rows)
    # rank of the transpose: dim - nullity of row space computed via nullspace
    # of the matrix whose rows are the difference vectors
    m = len(rows)
    nullity = len(lp.nullspace([[rows[i][j] for i in range(m)]
                                for j in range(len(rows[0]))]))
    return m - nullity


def _equidistant_center(prefix: List[Point], later: List[Point]
                        ) -> Optional[List[Fraction]]:
    """A point equidistant from `prefix` with every point of `later` strictly
    farther, found by strict LP on the equidistant affine subspace."""
    d = prefix[0].dim
    p1 = prefix[0]
    A_eq, b_eq = [], []
    for p in prefix[1:]:
        A_eq.append([2 * (a - b) for a, b in zip(p1.coords, p.coords)])
        b_eq.append(sum(a * a for a in p1.coords) - sum(b * b for b in p.coords))
    if A_eq:
        x0 = lp.solve_linear(A_eq, b_eq)
        if x0 is None:
            return None
        W = lp.nullspace(A_eq)
    else:
        x0 = [Fraction(0)] * d
        W = [[Fraction(1) if i == j else Fraction(0) for j in range(d)]
             for i in range(d)]
    # later strictly farther than prefix: 2 (q - p1) . x < |q|^2 - |p1|^2
    A_ub, b_ub = [], []
    p1sq = sum(a * a for a in p1.coords)
    for q in later:
        row = [2 * (qa - pa) for qa, pa in zip(q.coords, p1.coords)]
        rhs = sum(qa * qa for qa in q.coords) - p1sq
        # substitute x = x0 + W t
        A_ub.append([sum(ra * wa for ra, wa in zip(row, w)) for w in W])
        b_ub.append(rhs - sum(ra * xa for ra, xa in zip(row, x0)))
    if not W:
        # zero-dimensional subspace: check x0 satisfies everything strictly
        if all(b > 0 for b in b_ub):
            return x0
        return None
    t = lp.strict_interior(A_ub, b_ub)
    if t is None:
        return None
    return [x0[i] + sum(W[w][i] * t[w] for w in range(len(W))) for i in range(d)]


def witness_affine_independent(C: CandidateSet, ordering: Sequence[int]
                               ) -> WitnessCertificate:
    """For affinely independent C, every ordering is witnessable: centers
    equidistant from each prefix (later points strictly farther) are stacked
    with geometrically growing multiplicities until the rank certifies."""
    ordering = tuple(ordering)
    n = C.n
    if _affine_rank(C.points) != n - 1:
        raise NotApplicableError("candidate set is not affinely independent")
    centers = []
    for i in range(2, n + 1):
        prefix = [C.points[ordering[t]] for t in range(i - 1)]
        later = [C.points[ordering[t]] for t in range(i - 1, n)]
        x = _equidistant_center(prefix, later)
        if x is None:
            raise CenterSearchError(tuple(ordering[: i - 1]))
        centers.append(Point(x))
    M = 2
    while M <= LADDER_CAP:
        entries = [(centers[i - 2], M ** (i - 2)) for i in range(2, n + 1)]
        V = VantageMultiset(entries)
        try:
            return certify(C, V, ordering)
        except (VerificationError, TieError):
            M *= 2
    raise VerificationError("multiplicity ladder exhausted")


# -- conics through four points --------------------------------------------

@dataclass(frozen=True)
class ConicCoeffs:
    """A x^2 + B xy + C y^2 + D x + E y + F = 0 with rational coefficients."""

    A: Fraction
    B: Fraction
    C: Fraction
    D: Fraction
    E: Fraction
    F: Fraction

    def evaluate(self, p: Point) -> Fraction:
        x, y = p[0], p[1]
        return (self.A * x * x + self.B * x * y + self.C * y * y
                + self.D * x + self.E * y + self.F)

    @property
    def disc(self) -> Fraction:
        return self.B * self.B - 4 * self.A * self.C

    @property
    def det3(self) -> Fraction:
        a, b, c, d, e, f = self.A, self.B / 2, self.C, self.D / 2, self.E / 2, self.F
        return (self.A * (c * f - e * e) - b * (b * f - e * d)
                + d * (b * e - c * d))

    @property
    def is_ellipse(self) -> bool:
        return self.disc < 0 and self.det3 != 0

    def center(self) -> Point:
        sol = lp.solve_linear(
            [[2 * self.A, self.B], [self.B, 2 * self.C]], [-self.D, -self.E])
        if sol is None:
            raise ValueError("conic has no unique center")
        return Point(sol)


def _orientation(a: Point, b: Point, c: Point) -> Fraction:
    return ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


def _hull_cycle(points: Sequence[Point]) -> List[int]:
    """Indices of the convex hull in counterclockwise order (exact)."""
    idx = sorted(range(len(points)), key=lambda i: points[i].coords)
    def build(seq):
        out = []
        for i in seq:
            while len(out) > 1 and _orientation(points[out[-2]], points[out[-1]],
                                                points[i]) <= 0:
                out.pop()
            out.append(i)
        return out
    lower = build(idx)
    upper = build(reversed(idx))
    return lower[:-1] + upper[:-1]


def _line_through(p: Point, q: Point) -> Tuple[Fraction, Fraction, Fraction]:
    return (q[1] - p[1], p[0] - q[0], q[0] * p[1] - p[0] * q[1])


def _conic_from_lines(l1, l2) -> ConicCoeffs:
    a1, b1, c1 = l1
    a2, b2, c2 = l2
    return ConicCoeffs(a1 * a2, a1 * b2 + a2 * b1, b1 * b2,
                       a1 * c2 + a2 * c1, b1 * c2 + b2 * c1, c1 * c2)


def _pencil(qa: ConicCoeffs, qb: ConicCoeffs, lam: Fraction) -> ConicCoeffs:
    mu = 1 - lam
    return ConicCoeffs(*(lam * x + mu * y for x, y in
                         zip((qa.A, qa.B, qa.C, qa.D, qa.E, qa.F),
                             (qb.A, qb.B, qb.C, qb.D, qb.E, qb.F))))


def ellipse_through(p1: Point, p2: Point, p3: Point, p4: Point) -> ConicCoeffs:
    """An ellipse through four points in convex position, from the pencil of
    the two opposite-side degenerate conics; the pencil parameter sits at the
    vertex of the (quadratic) discriminant, which is exactly the midpoint of
    the open ellipse interval."""
    pts = [p1, p2, p3, p4]
    cycle = _hull_cycle(pts)
    if len(cycle) != 4:
        raise ValueError("points are not in convex position")
    q = [pts[i] for i in cycle]
    QA = _conic_from_lines(_line_through(q[0], q[1]), _line_through(q[2], q[3]))
    QB = _conic_from_lines(_line_through(q[1], q[2]), _line_through(q[3], q[0]))

    # disc(lam) is quadratic in lam with rational coefficients
    def disc_of(lam: Fraction) -> Fraction:
        return _pencil(QA, QB, lam).disc

    d0 = disc_of(Fraction(0))
    d1 = disc_of(Fraction(1))
    dh = disc_of(Fraction(1, 2))
    # disc(l) = a l^2 + b l + c with c = d0, a + b + c = d1, a/4 + b/2 + c = dh
    a2 = 2 * d1 + 2 * d0 - 4 * dh
    b2 = d1 - d0 - a2
    candidates = []
    if a2 != 0:
        candidates.append(-b2 / (2 * a2))
    candidates += [Fraction(1, 2), Fraction(1, 4), Fraction(3, 4),
                   Fraction(1, 8), Fraction(7, 8), Fraction(3, 8), Fraction(5, 8)]
    for lam in candidates:
        conic = _pencil(QA, QB, lam)
        if conic.is_ellipse:
            for pt in pts:
                assert conic.evaluate(pt) == 0
            return conic
    raise ValueError("no ellipse in the pencil (degenerate input)")


def ellipse_foci(conic: ConicCoeffs, precision: int = 128
                 ) -> Tuple[Point, Point]:
    """Foci of a real ellipse: the center is exact; for non-circles the axis
    direction and focal distance are computed at the requested precision and
    returned as rational approximations (downstream constructions re-verify
    exactly, so approximation here is sound)."""
    if not conic.is_ellipse:
        raise ValueError("conic is not an ellipse")
    center = conic.center()
    if conic.B == 0 and conic.A == conic.C:
        return center, center
    A, B, Cc = conic.A, conic.B, conic.C
    det2 = A * Cc - B * B / 4
    k = -conic.det3 / det2  # lam1 X^2 + lam2 Y^2 = k in centered frame
    with gmpy2.context(precision=precision):
        def mt(q: Fraction):
            return gmpy2.mpfr(gmpy2.mpq(q.numerator, q.denominator))
        T = mt(A + Cc)
        root = gmpy2.sqrt(mt((A - Cc) ** 2 + B ** 2))
        lam1 = (T - root) / 2
        lam2 = (T + root) / 2
        kk = mt(k)
        axis1_sq = kk / lam1
        axis2_sq = kk / lam2
        if axis1_sq <= 0 or axis2_sq <= 0:
            raise ValueError("conic is an imaginary ellipse")
        # the major axis belongs to the eigenvalue with the larger k/lam
        major_lam = lam1 if axis1_sq >= axis2_sq else lam2
        foc = gmpy2.sqrt(abs(axis1_sq - axis2_sq))
        if B != 0:
            ux, uy = mt(B) / 2, major_lam - mt(A)
        elif (axis1_sq >= axis2_sq) == (A < Cc):
            # B = 0: eigenvalues are A (x-axis) and C (y-axis)
            ux, uy = gmpy2.mpfr(1), gmpy2.mpfr(0)
        else:
            ux, uy = gmpy2.mpfr(0), gmpy2.mpfr(1)
        norm = gmpy2.sqrt(ux * ux + uy * uy)
        fx = foc * ux / norm
        fy = foc * uy / norm
        def fr(v):
            q = gmpy2.mpq(v)
            return Fraction(int(q.numerator), int(q.denominator))
        off = (fr(fx), fr(fy))
    f1 = Point((center[0] + off[0], center[1] + off[1]))
    f2 = Point((center[0] - off[0], center[1] - off[1]))
    return f1, f2


# -- four planar points ----------------------------------------------------

def _collinear(points: Sequence[Point]) -> bool:
    if len(points) <= 2:
        return True
    return all(_orientation(points[0], points[1], p) == 0 for p in points[2:])


def _witness_collinear_embedded(C: CandidateSet, ordering: Sequence[int]
                                ) -> WitnessCertificate:
    """Collinear candidates inside R^d: run the line recursion in the
    rational parameterization of the common line; vantage points stay on it."""
    pts = [C.points[i] for i in range(C.n)]
    base = pts[0]
    direction = next(p - base for p in pts[1:] if p != base)
    dd = sum(a * a for a in direction.coords)
    ts = [sum((p - base).coords[j] * direction.coords[j] for j in range(C.dim)) / dd
          for p in pts]
    line_C = CandidateSet([(t,) for t in ts])
    cert1 = witness_d1(line_C, ordering)
    entries = []
    for p, m in cert1.V.entries:
        t = p[0]
        entries.append((Point(tuple(b + t * u for b, u in
                                    zip(base.coords, direction.coords))), m))
    V = VantageMultiset(entries)
    return certify(C, V, ordering)


def _three_point_witness(C: CandidateSet, ordering: Sequence[int]
                         ) -> WitnessCertificate:
    pts = [C.points[i] for i in range(C.n)]
    if _collinear(pts):
        return _witness_collinear_embedded(C, ordering)
    return witness_affine_independent(C, ordering)


def _strictly_inside_hull(z: Point, pts: Sequence[Point]) -> bool:
    cycle = _hull_cycle(pts)
    hull = [pts[i] for i in cycle]
    sign = None
    for a, b in zip(hull, hull[1:] + hull[:1]):
        o = _orientation(a, b, z)
        if o == 0:
            return False
        s = 1 if o > 0 else -1
        if sign is None:
            sign = s
        elif s != sign:
            return False
    return True


def witness_four_planar(C: CandidateSet, ordering: Sequence[int],
                        max_precision: int = 2048) -> WitnessCertificate:
    """Four points with a 2-dimensional affine span: witness the first three,
    then pin them to a common ellipse (or segment, in the collinear subcase)
    whose focal sum strictly separates the last point; K copies of the two
    foci are added with K doubled until the exact rank certifies."""
    ordering = tuple(ordering)
    if C.n != 4 or C.dim != 2:
        raise NotApplicableError("witness_four_planar needs 4 points in R^2")
    if _affine_rank(C.points) != 2:
        raise NotApplicableError("affine span must be 2-dimensional")
    if not is_protrusive(C, ordering):
        raise NonProtrusiveError(f"{ordering} is not protrusive")

    first3 = list(ordering[:3])
    Cp = CandidateSet([C.points[i] for i in first3])
    inner = _three_point_witness(Cp, (0, 1, 2))
    V_inner = inner.V
    cpts = [C.points[i] for i in first3]
    c4 = C.points[ordering[3]]

    if _collinear(cpts):
        # exact segment construction: both "foci" are the extreme candidates
        base = cpts[0]
        direction = next(p - base for p in cpts[1:] if p != base)
        dd = sum(a * a for a in direction.coords)
        ts = [(sum((p - base).coords[j] * direction.coords[j]
                   for j in range(2)) / dd, p) for p in cpts]
        ts.sort(key=lambda e: e[0])
        focus_pairs = [(ts[0][1], ts[-1][1])]
        precisions = [None]
    else:
        # walk from c4 toward the centroid of the first three: such points are
        # interior to conv(C) but outside conv(C') once close enough to c4
        g3 = Point((sum(p[0] for p in cpts) / 3, sum(p[1] for p in cpts) / 3))
        z_candidates = []
        for t in range(2, 16):
            z_candidates.append(Point((c4[0] + (g3[0] - c4[0]) / 2 ** t,
                                       c4[1] + (g3[1] - c4[1]) / 2 ** t)))
        g = Point((sum(p[0] for p in C.points) / 4, sum(p[1] for p in C.points) / 4))
        for u, w in itertools.combinations(cpts, 2):
            mid = Point(((u[0] + w[0]) / 2, (u[1] + w[1]) / 2))
            for t in range(2, 12):
                z_candidates.append(Point((g[0] + (mid[0] - g[0]) / 2 ** t,
                                           g[1] + (mid[1] - g[1]) / 2 ** t)))
        focus_pairs = []
        precisions = []
        for z in z_candidates:
            if not _strictly_inside_hull(z, C.points):
                continue
            four = cpts + [z]
            if len(_hull_cycle(four)) != 4:
                continue
            try:
                conic = ellipse_through(*four)
            except ValueError:
                continue
            for prec in (128, 256, 512, 1024, 2048):
                if prec > max_precision:
                    break
                focus_pairs.append(ellipse_foci(conic, prec))
                precisions.append(prec)
            break
        if not focus_pairs:
            raise CenterSearchError(tuple(first3))

    for (f1, f2) in focus_pairs:
        K = 1
        while K <= 2 ** 40:
            entries = list(V_inner.entries) + [(f1, K), (f2, K)]
            V = VantageMultiset(entries)
            try:
                return certify(C, V, ordering)
            except (VerificationError, TieError):
                K *= 2
    raise VerificationError("four-point construction did not certify")


# -- the six-point counterexample ------------------------------------------

FAR_FIELD_REQUIRED = Fraction(682, 279)  # (t+2)/(t-1.1) < 4/1.21 iff t above this


@dataclass
class SixPointReport:
    far_field_ok: bool
    far_threshold: Fraction
    grid_ok: bool
    grid_points: int
    grid_min_lo: float
    grid_min_cell: Tuple[int, int]
    escalated_cells: int
    failed_cells: List[Tuple[int, int]]
    lipschitz_ok: bool
    final_bound: float
    passed: bool


class _SixPointEval:
    """Directed-rounded evaluation of f(v) = sum |v-c_i| - sum |v-c'_i| for
    the fixed six-point configuration.  Outer points at radius 2 along the
    three triangle directions, inner points at radius 1.1 opposite them;
    sqrt(3) is the only irrational ingredient, carried as an enclosure."""

    def __init__(self, prec: int):
        self.prec = prec
        self.ctx_d = gmpy2.context(precision=prec, round=gmpy2.RoundDown)
        self.ctx_u = gmpy2.context(precision=prec, round=gmpy2.RoundUp)
        with self.ctx_d:
            self.s3_d = gmpy2.sqrt(gmpy2.mpfr(3))
            self.p2x_d = (gmpy2.mpfr(11) / 20) * self.s3_d
            self.i10_d = gmpy2.mpfr(11) / 10
            self.i20_d = gmpy2.mpfr(11) / 20
        with self.ctx_u:
            self.s3_u = gmpy2.sqrt(gmpy2.mpfr(3))
            self.p2x_u = (gmpy2.mpfr(11) / 20) * self.s3_u
            self.i10_u = gmpy2.mpfr(11) / 10
            self.i20_u = gmpy2.mpfr(11) / 20

    @staticmethod
    def _sq_lo(lo, hi):
        if lo <= 0 <= hi:
            return gmpy2.mpfr(0)
        m = lo if lo > 0 else -hi
        return m * m

    @staticmethod
    def _sq_hi(lo, hi):
        m = max(abs(lo), abs(hi))
        return m * m

    def f_lower(self, num_x: int, num_y: int, den: int):
        """Certified lower bound of f at the exact point (num_x/den, num_y/den)."""
        sq_lo, sq_hi = self._sq_lo, self._sq_hi
        with self.ctx_d:
            x_d = gmpy2.mpfr(num_x) / den
            y_d = gmpy2.mpfr(num_y) / den
        with self.ctx_u:
            x_u = gmpy2.mpfr(num_x) / den
            y_u = gmpy2.mpfr(num_y) / den
        with self.ctx_d:
            o1 = gmpy2.sqrt(sq_lo(x_d, x_u) + sq_lo(y_d - 2, y_u - 2))
            o2 = gmpy2.sqrt(sq_lo(x_d + self.s3_d, x_u + self.s3_u)
                            + sq_lo(y_d + 1, y_u + 1))
            o3 = gmpy2.sqrt(sq_lo(x_d - self.s3_u, x_u - self.s3_d)
                            + sq_lo(y_d + 1, y_u + 1))
            outer_lo = o1 + o2 + o3
        with self.ctx_u:
            i1 = gmpy2.sqrt(sq_hi(x_d, x_u)
                            + sq_hi(y_d + self.i10_d, y_u + self.i10_u))
            i2 = gmpy2.sqrt(sq_hi(x_d - self.p2x_u, x_u - self.p2x_d)
                            + sq_hi(y_d - self.i20_u, y_u - self.i20_d))
            i3 = gmpy2.sqrt(sq_hi(x_d + self.p2x_d, x_u + self.p2x_u)
                            + sq_hi(y_d - self.i20_u, y_u - self.i20_d))
            inner_hi = i1 + i2 + i3
        with self.ctx_d:
            return outer_lo - inner_hi

    def f_upper(self, num_x: int, num_y: int, den: int):
        """Certified upper bound of f at the exact point."""
        sq_lo, sq_hi = self._sq_lo, self._sq_hi
        with self.ctx_d:
            x_d = gmpy2.mpfr(num_x) / den
            y_d = gmpy2.mpfr(num_y) / den
        with self.ctx_u:
            x_u = gmpy2.mpfr(num_x) / den
            y_u = gmpy2.mpfr(num_y) / den
        with self.ctx_u:
            o1 = gmpy2.sqrt(sq_hi(x_d, x_u) + sq_hi(y_d - 2, y_u - 2))
            o2 = gmpy2.sqrt(sq_hi(x_d + self.s3_d, x_u + self.s3_u)
                            + sq_hi(y_d + 1, y_u + 1))
            o3 = gmpy2.sqrt(sq_hi(x_d - self.s3_u, x_u - self.s3_d)
                            + sq_hi(y_d + 1, y_u + 1))
            outer_hi = o1 + o2 + o3
        with self.ctx_d:
            i1 = gmpy2.sqrt(sq_lo(x_d, x_u)
                            + sq_lo(y_d + self.i10_d, y_u + self.i10_u))
            i2 = gmpy2.sqrt(sq_lo(x_d - self.p2x_u, x_u - self.p2x_d)
                            + sq_lo(y_d - self.i20_u, y_u - self.i20_d))
            i3 = gmpy2.sqrt(sq_lo(x_d + self.p2x_d, x_u + self.p2x_u)
                            + sq_lo(y_d - self.i20_u, y_u - self.i20_d))
            inner_lo = i1 + i2 + i3
        with self.ctx_u:
            return outer_hi - inner_lo


def _six_point_rows(args):
    """Worker: certified lower bounds of f over a chunk of grid rows; every
    lower bound must clear an up-rounded copy of the threshold."""
    i_list, steps_per_unit, half_range, prec, thr_num, thr_den = args
    ev = _SixPointEval(prec)
    with ev.ctx_u:
        thr = gmpy2.mpfr(thr_num) / thr_den

    min_lo = None
    min_cell = None
    fails = []
    for i in i_list:
        for j in range(-half_range, half_range + 1):
            f_lo = ev.f_lower(i, j, steps_per_unit)
            if min_lo is None or f_lo < min_lo:
                min_lo = f_lo
                min_cell = (i, j)
            if not f_lo > thr:
                fails.append((i, j))
    return float(min_lo), min_cell, fails


def six_point_candidates() -> CandidateSet:
    """Rational approximation of the six-point configuration (outer triangle
    of circumradius 2, inner points at radius 1.1 in the opposite
    directions), for plotting and experiments only; the certified
    verification uses exact enclosures of the true coordinates."""
    with gmpy2.context(precision=96):
        s3 = gmpy2.sqrt(gmpy2.mpfr(3))
        q = gmpy2.mpq(s3)
        s3f = Fraction(int(q.numerator), int(q.denominator))
    e = Fraction(11, 10)
    h = Fraction(11, 20)
    return CandidateSet([
        (0, 2), (-s3f, -1), (s3f, -1),
        (0, -e), (h * s3f, h), (-h * s3f, h),
    ])


def verify_six_point(grid_step: Fraction = Fraction(1, 50),
                     far_threshold: Fraction = Fraction(5, 2),
                     workers: Optional[int] = None,
                     base_precision: int = 64) -> SixPointReport:
    """Three certified stages: a symbolic far-field inequality, an interval
    sweep of the grid over [-2.5, 2.5]^2 proving f > 0.35 everywhere on it,
    and the exact Lipschitz slack 0.35 - 6 (step/2) sqrt(2) > 0.26."""
    grid_step = Fraction(grid_step)
    far_threshold = Fraction(far_threshold)

    far_ok = far_threshold > FAR_FIELD_REQUIRED and far_threshold >= 2

    span = Fraction(5, 2)
    ratio = span / grid_step
    if ratio.denominator != 1:
        raise ValueError("grid_step must divide 5/2 evenly")
    half_range = int(ratio)
    steps_per_unit = int(Fraction(1) / grid_step) if (Fraction(1) / grid_step).denominator == 1 else None
    if steps_per_unit is None:
        raise ValueError("grid_step must divide 1 evenly")

    rows = list(range(-half_range, half_range + 1))
    nproc = workers or min(multiprocessing.cpu_count(), 8)
    chunks = [rows[t::nproc] for t in range(nproc)]
    args = [(chunk, steps_per_unit, half_range, base_precision, 7, 20)
            for chunk in chunks if chunk]

    if nproc > 1:
        with multiprocessing.get_context("fork").Pool(len(args)) as pool:
            partials = pool.map(_six_point_rows, args)
    else:
        partials = [_six_point_rows(a) for a in args]

    min_lo = min(p[0] for p in partials)
    min_cell = min((p[0], p[1]) for p in partials)[1]
    first_fails = [c for p in partials for c in p[2]]

    escalated = len(first_fails)
    failed = []
    for (i, j) in first_fails:
        lo2, _, fails2 = _six_point_rows(([i], steps_per_unit, half_range, 128, 7, 20))
        # recheck only the single row point: _six_point_rows scans the whole
        # row, so narrow to the offending j
        if any(jj == j for (_, jj) in fails2):
            failed.append((i, j))
    grid_ok = not failed
    grid_points = (2 * half_range + 1) ** 2

    # Lipschitz stage, exact: 7/20 - 6 (step/2) sqrt(2) > 13/50
    slack = RadicalSum([(Fraction(7, 20), 1), (-3 * grid_step, 2)])
    lips_ok = compare(slack, RadicalSum.from_rational(Fraction(13, 50))) \
        is ComparisonResult.GREATER
    final_bound = float(slack) if lips_ok else float("nan")

    return SixPointReport(
        far_field_ok=far_ok,
        far_threshold=far_threshold,
        grid_ok=grid_ok,
        grid_points=grid_points,
        grid_min_lo=min_lo,
        grid_min_cell=min_cell,
        escalated_cells=escalated,
        failed_cells=failed,
        lipschitz_ok=lips_ok,
        final_bound=final_bound,
        passed=far_ok and grid_ok and lips_ok,
    )


def six_point_f_enclosure(x: Fraction, y: Fraction, precision: int = 96) -> Interval:
    """Certified enclosure of f at one rational point (test/diagnostic)."""
    x, y = Fraction(x), Fraction(y)
    den = x.denominator * y.denominator
    num_x = int(x * den)
    num_y = int(y * den)
    ev = _SixPointEval(precision)
    return Interval(ev.f_lower(num_x, num_y, den), ev.f_upper(num_x, num_y, den))


# -- experimental: the five-point question ----------------------------------

def five_point_search(C: CandidateSet, trials: int = 50000, seed: int = 0,
                      max_k: int = 3) -> dict:
    """Sample vantage multisets of size up to max_k and report protrusive
    orderings of C not yet seen; a nonempty result is only a lack of
    witnesses, never a proof of absence."""
    from vantage.enumeration import estimate_psi

    found = set()
    for k in range(1, max_k + 1):
        res = estimate_psi(C, k, trials=trials, seed=seed + k)
        found |= set(res.catalog.orderings())
    prot = set(protrusive_orderings(C))
    return {
        "protrusive": sorted(prot),
        "found": sorted(found & prot),
        "unwitnessed": sorted(prot - found),
        "trials_per_k": trials,
        "max_k": max_k,
    }
