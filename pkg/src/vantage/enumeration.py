"""Exact enumeration of vantage-point orderings and seeded lower-bound search.

psi_1 is enumerated exactly: on the line by sweeping pair midpoints, in the
plane by decomposing the arrangement of perpendicular-bisector lines into
vertical slabs and sampling one rational point per cell.  psi_k on the line
(small k, n) is enumerated by splitting vantage space into boxes where every
pairwise difference of distance sums is affine, then sign-branching with exact
LP feasibility.  Monte-Carlo estimators provide certified lower bounds (every
reported ordering carries a witness that re-verifies with `rank`).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from vantage import lp
from vantage.geometry import (
    CandidateSet,
    Ordering,
    Point,
    TieError,
    VantageMultiset,
    rank,
)

TaggedOrdering = Tuple[Tuple[int, int], ...]  # ((side, index), ...)


# -- catalogs ----------------------------------------------------------

@dataclass
class OrderingCatalog:
    """Deduplicated orderings, each with one representative witness."""

    entries: Dict[tuple, object] = field(default_factory=dict)

    def add(self, ordering: tuple, witness) -> bool:
        if ordering in self.entries:
            return False
        self.entries[ordering] = witness
        return True

    def merge(self, other: "OrderingCatalog"):
        for o, w in other.entries.items():
            self.add(o, w)

    def orderings(self) -> List[tuple]:
        return sorted(self.entries)

    def witness(self, ordering: tuple):
        return self.entries[ordering]

    def items(self):
        return sorted(self.entries.items())

    def __len__(self):
        return len(self.entries)

    def __contains__(self, ordering):
        return ordering in self.entries

    def __iter__(self):
        return iter(self.orderings())


def sign_vector_from_ordering(ordering: Ordering) -> Tuple[int, ...]:
    """Signs of D(c_i) - D(c_j) over pairs i<j implied by an ordering."""
    n = len(ordering)
    pos = {c: t for t, c in enumerate(ordering)}
    return tuple(-1 if pos[i] < pos[j] else 1
                 for i in range(n) for j in range(i + 1, n))


def ordering_from_sign_vector(sv: Sequence[int], n: int) -> Ordering:
    """Inverse of sign_vector_from_ordering; rejects cyclic tournaments."""
    wins = [0] * n
    t = 0
    for i in range(n):
        for j in range(i + 1, n):
            if sv[t] > 0:
                wins[i] += 1
            else:
                wins[j] += 1
            t += 1
    if sorted(wins) != list(range(n)):
        raise ValueError("sign vector is not consistent with a total order")
    order = sorted(range(n), key=lambda i: wins[i])
    return tuple(order)


@dataclass(frozen=True)
class ArrangementCell:
    """Full-dimensional cell given by per-line sides, with a rational sample
    point strictly satisfying every constraint."""

    constraints: Tuple[Tuple[int, int], ...]  # (line index, side in {-1,+1})
    sample: Point


@dataclass
class EstimateResult:
    catalog: OrderingCatalog
    trials: int
    ties_skipped: int
    seed: int


# -- exact psi_1 -------------------------------------------------------

def _psi1_d1(C: CandidateSet) -> OrderingCatalog:
    coords = [p[0] for p in C.points]
    mids = sorted({(a + b) / 2
                   for i, a in enumerate(coords) for b in coords[i + 1:]})
    if mids:
        samples = [mids[0] - 1]
        samples += [(x + y) / 2 for x, y in zip(mids, mids[1:])]
        samples += [mids[-1] + 1]
    else:
        samples = [coords[0] + 1]
    catalog = OrderingCatalog()
    for v in samples:
        V = VantageMultiset([Point((v,))])
        catalog.add(rank(C, V), V)
    return catalog


def bisector_lines(C: CandidateSet) -> List[Tuple[Fraction, ...]]:
    """Perpendicular bisector of each candidate pair as (a1, ..., ad, c)
    meaning a.x + c = 0; the a.x + c < 0 side is nearer the first point."""
    lines = []
    for i, p in enumerate(C.points):
        for q in C.points[i + 1:]:
            a = [2 * (qc - pc) for pc, qc in zip(p, q)]
            c = sum(pc * pc for pc in p) - sum(qc * qc for qc in q)
            lines.append(tuple(a) + (c,))
    return lines


def _dedupe_lines(lines: List[tuple]) -> List[tuple]:
    seen = {}
    for ln in lines:
        lead = next(v for v in ln if v != 0)
        key = tuple(v / lead for v in ln)
        seen.setdefault(key, ln)
    return list(seen.values())


def arrangement_cells_2d(lines: List[tuple]) -> List[ArrangementCell]:
    """All full-dimensional cells of a 2-d line arrangement.

    Vertical-slab decomposition: the x-projection of any cell is an open
    interval whose finite endpoints are x-coordinates of line intersections
    or of vertical lines, so sampling the midpoint of every consecutive gap
    (plus points beyond the extremes) and then sweeping each vertical
    transversal hits every cell exactly.
    """
    lines = _dedupe_lines(lines)
    breakpoints = set()
    for (a1, b1, c1), (a2, b2, c2) in itertools.combinations(lines, 2):
        det = a1 * b2 - a2 * b1
        if det != 0:
            breakpoints.add((b1 * c2 - b2 * c1) / det)
    for a, b, c in lines:
        if b == 0:
            breakpoints.add(Fraction(-c, a))
    xs = sorted(breakpoints)
    if xs:
        sample_xs = [xs[0] - 1]
        sample_xs += [(u + v) / 2 for u, v in zip(xs, xs[1:])]
        sample_xs += [xs[-1] + 1]
    else:
        sample_xs = [Fraction(0)]

    cells: Dict[tuple, ArrangementCell] = {}
    for sx in sample_xs:
        ys = sorted({Fraction(-(c + a * sx), b) for a, b, c in lines if b != 0})
        if ys:
            sample_ys = [ys[0] - 1]
            sample_ys += [(u + v) / 2 for u, v in zip(ys, ys[1:])]
            sample_ys += [ys[-1] + 1]
        else:
            sample_ys = [Fraction(0)]
        for sy in sample_ys:
            sides = []
            for idx, (a, b, c) in enumerate(lines):
                val = a * sx + b * sy + c
                assert val != 0, "sample point must avoid every line"
                sides.append((idx, 1 if val > 0 else -1))
            key = tuple(s for _, s in sides)
            if key not in cells:
                cells[key] = ArrangementCell(tuple(sides), Point((sx, sy)))
    return list(cells.values())


def _psi1_d2(C: CandidateSet) -> OrderingCatalog:
    lines = bisector_lines(C)
    catalog = OrderingCatalog()
    for cell in arrangement_cells_2d(lines):
        V = VantageMultiset([cell.sample])
        catalog.add(rank(C, V), V)
    return catalog


def enumerate_psi1_exact(C: CandidateSet) -> OrderingCatalog:
    """The exact set Psi_1(C) for dim 1 or 2, with one witness per ordering."""
    if C.n == 1:
        catalog = OrderingCatalog()
        v = Point((C.points[0][0] + 1,) * C.dim) if C.dim == 1 else \
            Point(tuple(c + 1 for c in C.points[0]))
        catalog.add((0,), VantageMultiset([v]))
        return catalog
    if C.dim == 1:
        return _psi1_d1(C)
    if C.dim == 2:
        return _psi1_d2(C)
    raise NotImplementedError("exact psi_1 enumeration is implemented for dim <= 2")


# -- exact psi_k on the line -------------------------------------------

def enumerate_psi_k_d1_exact(C: CandidateSet, k: int,
                             max_n: int = 6, max_k: int = 3) -> OrderingCatalog:
    """Exact Psi_k(C) for C on the line, small k and n.

    Vantage space R^k is cut by the hyperplanes {v_l = c_i} into boxes where
    every distance sum is affine in V; inside a box the orderings correspond
    to sign cells of the affine pair differences, enumerated by recursive
    sign branching with exact strict-feasibility checks.  WLOG v_1 < ... < v_k
    (orderings are invariant under permuting the multiset).
    """
    if C.dim != 1:
        raise ValueError("enumerate_psi_k_d1_exact requires dim 1")
    if C.n > max_n or k > max_k:
        raise ValueError(f"size guard exceeded (n <= {max_n}, k <= {max_k})")
    if k == 1:
        return _psi1_d1(C)

    coords = [p[0] for p in C.points]
    breaks = sorted(set(coords))
    intervals = []  # (lo, hi) with None = unbounded
    intervals.append((None, breaks[0]))
    intervals += list(zip(breaks, breaks[1:]))
    intervals.append((breaks[-1], None))
    n = C.n
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    catalog = OrderingCatalog()

    for box in itertools.combinations_with_replacement(range(len(intervals)), k):
        A: List[List[Fraction]] = []
        b: List[Fraction] = []
        for l, itv in enumerate(box):
            lo, hi = intervals[itv]
            if lo is not None:
                row = [Fraction(0)] * k
                row[l] = Fraction(-1)
                A.append(row)
                b.append(-Fraction(lo))
            if hi is not None:
                row = [Fraction(0)] * k
                row[l] = Fraction(1)
                A.append(row)
                b.append(Fraction(hi))
        for l in range(k - 1):
            row = [Fraction(0)] * k
            row[l] = Fraction(1)
            row[l + 1] = Fraction(-1)
            A.append(row)
            b.append(Fraction(0))
        if lp.strict_interior(A, b) is None:
            continue

        # inside the box, |c_i - v_l| = s * (c_i - v_l) with fixed sign s
        lin = []  # per candidate: (coefs over v, const)
        for c in coords:
            coefs, const = [], Fraction(0)
            for itv in box:
                lo, hi = intervals[itv]
                right_of = lo is not None and c <= lo
                # candidate at or left of the interval: |c - v| = v - c
                if right_of:
                    coefs.append(Fraction(1))
                    const -= c
                else:
                    coefs.append(Fraction(-1))
                    const += c
            lin.append((coefs, const))

        diffs = []
        for i, j in pairs:
            ci, ki = lin[i]
            cj, kj = lin[j]
            diffs.append(([a - bb for a, bb in zip(ci, cj)], ki - kj))

        def branch(idx: int, A_cur, b_cur):
            if idx == len(diffs):
                sample = lp.strict_interior(A_cur, b_cur)
                assert sample is not None
                vals = []
                for t, (coefs, const) in enumerate(lin):
                    vals.append((sum(a * s for a, s in zip(coefs, sample)) + const, t))
                vals.sort()
                ordering = tuple(i for _, i in vals)
                V = VantageMultiset([Point((s,)) for s in sample])
                catalog.add(ordering, V)
                return
            coefs, const = diffs[idx]
            if all(a == 0 for a in coefs):
                if const == 0:
                    return  # tied throughout the box: no distinguishing V here
                branch(idx + 1, A_cur, b_cur)
                return
            for sign in (1, -1):
                row = [sign * a for a in coefs]
                rhs = Fraction(-sign) * const
                A2 = A_cur + [row]
                b2 = b_cur + [rhs]
                if lp.strict_interior(A2, b2) is not None:
                    branch(idx + 1, A2, b2)

        branch(0, A, b)
    return catalog


# -- seeded sampling ---------------------------------------------------

def trial_rng(seed: int, counter: int) -> random.Random:
    """Counter-mode RNG: one independent stream per (seed, trial)."""
    return random.Random(f"{seed}:{counter}")


@dataclass(frozen=True)
class SamplerSpec:
    """Mixture of uniform boxes at multiples of the candidate diameter and
    candidate-centered Gaussians at several scales."""

    box_scales: Tuple[int, ...] = (1, 10, 100)
    gauss_scales: Tuple[Fraction, ...] = (Fraction(1, 100), Fraction(1, 10), Fraction(1))
    resolution_bits: int = 16


def _instance_frame(C: CandidateSet):
    lo = [min(p[t] for p in C.points) for t in range(C.dim)]
    hi = [max(p[t] for p in C.points) for t in range(C.dim)]
    center = [(a + b) / 2 for a, b in zip(lo, hi)]
    diam = max(b - a for a, b in zip(lo, hi))
    if diam == 0:
        diam = Fraction(1)
    return center, diam


def _sample_coord_int(rng: random.Random, center_f: float, half_width_f: float,
                      den: int) -> int:
    u = rng.getrandbits(24)
    x = center_f + (u - (1 << 23)) / float(1 << 23) * half_width_f
    return round(x * den)


def _sample_gauss_int(rng: random.Random, center_f: float, scale_f: float,
                      den: int) -> int:
    return round((center_f + rng.gauss(0.0, 1.0) * scale_f) * den)


def estimate_psi(C: CandidateSet, k: int, sampler: Optional[SamplerSpec] = None,
                 trials: int = 10000, seed: int = 0) -> EstimateResult:
    """Seeded Monte-Carlo lower bound for psi_k(C).

    Every distinct ordering found is recorded with its witnessing multiset and
    re-verified through `rank`, so the catalog size is always a true lower
    bound.  Tie samples are skipped and counted.  Deterministic per seed.
    """
    if trials < 0:
        raise ValueError("trials must be >= 0")
    sampler = sampler or SamplerSpec()
    center, diam = _instance_frame(C)
    den_c = 1
    for p in C.points:
        for c in p:
            den_c = den_c * c.denominator // _gcd(den_c, c.denominator)
    DEN = den_c << sampler.resolution_bits
    cand_int = [[int(c * DEN) for c in p] for p in C.points]
    center_f = [float(c) for c in center]
    cand_f = [[float(c) for c in p] for p in C.points]
    diam_f = float(diam)
    n, d = C.n, C.dim

    n_components = len(sampler.box_scales) + len(sampler.gauss_scales)
    catalog = OrderingCatalog()
    ties = 0
    for t in range(trials):
        rng = trial_rng(seed, t)
        comp = rng.randrange(n_components)
        vants = []
        for _ in range(k):
            if comp < len(sampler.box_scales):
                s = sampler.box_scales[comp]
                hw = s * (diam_f / 2 + 1.0)
                v = tuple(_sample_coord_int(rng, center_f[a], hw, DEN)
                          for a in range(d))
            else:
                s = float(sampler.gauss_scales[comp - len(sampler.box_scales)])
                base = cand_f[rng.randrange(n)]
                v = tuple(_sample_gauss_int(rng, base[a], s * diam_f + 1e-9, DEN)
                          for a in range(d))
            vants.append(v)

        ordering = _fast_rank_int(cand_int, vants, k)
        if ordering is None:
            ties += 1
            continue
        if ordering not in catalog.entries:
            V = VantageMultiset(
                [Point(tuple(Fraction(x, DEN) for x in v)) for v in vants])
            catalog.add(ordering, V)

    for ordering, V in catalog.items():
        assert rank(C, V) == ordering, "stored witness failed re-verification"
    return EstimateResult(catalog, trials, ties, seed)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _fast_rank_int(cand_int: List[List[int]], vants: List[tuple], k: int):
    """Exact integer ranking for k=1 (any dim, squared distances) and for
    dim 1 (any k, absolute values); None on ties; falls back to squared-sum
    comparison only where it is exact."""
    n = len(cand_int)
    d = len(cand_int[0])
    if k == 1:
        v = vants[0]
        keys = []
        for i, c in enumerate(cand_int):
            s = 0
            for a in range(d):
                dd = c[a] - v[a]
                s += dd * dd
            keys.append((s, i))
    elif d == 1:
        keys = []
        for i, c in enumerate(cand_int):
            x = c[0]
            s = 0
            for v in vants:
                s += abs(x - v[0])
            keys.append((s, i))
    else:
        return _slow_rank_fractions(cand_int, vants)
    keys.sort()
    for (ka, _), (kb, _) in zip(keys, keys[1:]):
        if ka == kb:
            return None
    return tuple(i for _, i in keys)


def _slow_rank_fractions(cand_int, vants):
    from vantage.geometry import distance_sum
    from vantage.scalar import RadicalSum

    sums = []
    for c in cand_int:
        total = RadicalSum.ZERO
        for v in vants:
            total = total + RadicalSum.sqrt_of(
                sum((a - b) ** 2 for a, b in zip(c, v)))
        sums.append(total)
    from vantage.geometry import _rank_sums, TieError as _Tie
    try:
        return _rank_sums(sums, 4096)
    except _Tie:
        return None


# -- hat / check enumeration -------------------------------------------

def _rank_tagged(values: List[Tuple[Tuple[int, int], object]],
                 precision_cap: int = 4096) -> Optional[TaggedOrdering]:
    """Sort (tag, RadicalSum|Fraction) items; None on tie."""
    from vantage.scalar import RadicalSum, compare, ComparisonResult

    rationals = all(isinstance(v, Fraction) or
                    (isinstance(v, RadicalSum) and v.is_rational)
                    for _, v in values)
    if rationals:
        keyed = [((v.as_fraction() if isinstance(v, RadicalSum) else v), tag)
                 for tag, v in values]
        keyed.sort()
        for (a, _), (b, _) in zip(keyed, keyed[1:]):
            if a == b:
                return None
        return tuple(tag for _, tag in keyed)

    import functools

    items = [(tag, v if isinstance(v, RadicalSum) else RadicalSum.from_rational(v))
             for tag, v in values]

    class _Tie(Exception):
        pass

    def cmp(x, y):
        r = compare(x[1], y[1], precision_cap)
        if r is ComparisonResult.EQUAL:
            raise _Tie()
        if r is ComparisonResult.INDETERMINATE:
            raise _Tie()
        return -1 if r is ComparisonResult.LESS else 1

    try:
        ordered = sorted(items, key=functools.cmp_to_key(cmp))
    except _Tie:
        return None
    return tuple(tag for tag, _ in ordered)


def enumerate_hat_psi(C1: Sequence[Point], C2: Sequence[Point], k: int,
                      configs: Optional[Iterable] = None,
                      trials: int = 0, seed: int = 0) -> OrderingCatalog:
    """Catalog of distinct flanking-limit orderings of C1 ⊔ C2.

    `configs` supplies explicit (u1, u2) pairs (e.g. a grid); otherwise
    `trials` pairs are sampled around the candidate frame.  Ties are skipped.
    """
    from vantage.constructions import HatConfig, hat_tagged_values

    pts = list(C1) + list(C2)
    catalog = OrderingCatalog()

    def consume(cfg: "HatConfig"):
        values = hat_tagged_values(k, cfg, C1, C2)
        ordering = _rank_tagged(values)
        if ordering is not None:
            catalog.add(ordering, cfg)

    if configs is not None:
        for cfg in configs:
            if not isinstance(cfg, HatConfig):
                u1, u2 = cfg
                cfg = HatConfig(k, u1 if isinstance(u1, Point) else Point(u1),
                                u2 if isinstance(u2, Point) else Point(u2))
            consume(cfg)
        return catalog

    if not pts:
        return catalog
    frame = CandidateSet(pts) if len(set(pts)) == len(pts) else None
    if frame is None:
        center, diam = [Fraction(0)] * pts[0].dim, Fraction(1)
        d = pts[0].dim
        center_f = [0.0] * d
    else:
        center, diam = _instance_frame(frame)
        d = frame.dim
        center_f = [float(c) for c in center]
    diam_f = float(diam)
    DEN = 1 << 20
    for t in range(trials):
        rng = trial_rng(seed, t)
        scale = [1.0, 10.0, 100.0, 0.1][rng.randrange(4)]
        hw = scale * (diam_f / 2 + 1.0)
        u1 = Point(tuple(Fraction(_sample_coord_int(rng, center_f[a], hw, DEN), DEN)
                         for a in range(d)))
        u2 = Point(tuple(Fraction(_sample_coord_int(rng, center_f[a], hw, DEN), DEN)
                         for a in range(d)))
        consume(HatConfig(k, u1, u2))
    return catalog


def enumerate_check_psi(C1: Sequence[Point], C2: Sequence[Point],
                        trials: int = 0, seed: int = 0) -> OrderingCatalog:
    """Catalog of distinct check-limit orderings over sampled
    (v1, v2, x, y>0) quadruples."""
    from vantage.constructions import CheckConfig, check_tagged_values

    pts = list(C1) + list(C2)
    catalog = OrderingCatalog()
    if not pts:
        return catalog
    d = pts[0].dim
    lo = [min(p[t] for p in pts) for t in range(d)]
    hi = [max(p[t] for p in pts) for t in range(d)]
    center_f = [float((a + b) / 2) for a, b in zip(lo, hi)]
    diam_f = max(float(b - a) for a, b in zip(lo, hi)) or 1.0
    DEN = 1 << 20
    for t in range(trials):
        rng = trial_rng(seed, t)
        scale = [1.0, 10.0, 100.0, 0.1][rng.randrange(4)]
        hw = scale * (diam_f / 2 + 1.0)
        v1 = Point(tuple(Fraction(_sample_coord_int(rng, center_f[a], hw, DEN), DEN)
                         for a in range(d)))
        v2 = Point(tuple(Fraction(_sample_coord_int(rng, center_f[a], hw, DEN), DEN)
                         for a in range(d)))
        x = Fraction(_sample_coord_int(rng, 0.0, hw, DEN), DEN)
        e = rng.randrange(-12, 13)
        mant = 1 + Fraction(rng.getrandbits(10), 1 << 10)
        y = mant * Fraction(2) ** e
        cfg = CheckConfig(v1, v2, x, y)
        ordering = _rank_tagged(check_tagged_values(cfg, C1, C2))
        if ordering is not None:
            catalog.add(ordering, cfg)
    return catalog
