"""Candidate sets, vantage multisets, exact distance-sum ranking, and the
one-dimensional median-collapse operation.

Coordinates are exact rationals throughout, so every ranking question reduces
to certified comparisons of radical sums.  Candidates are identified by their
index in the input list; orderings are reported as index permutations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Sequence, Tuple

from vantage.scalar import (
    DEFAULT_PRECISION_CAP,
    ComparisonResult,
    RadicalSum,
    compare,
)

Ordering = Tuple[int, ...]


class DimensionError(ValueError):
    pass


class TieError(Exception):
    """V fails to distinguish candidates i and j (equal distance sums)."""

    def __init__(self, i: int, j: int):
        super().__init__(f"tie between candidates {i} and {j}")
        self.pair = (i, j)


class IndeterminateError(Exception):
    """A comparison hit the precision cap without resolving."""


@dataclass(frozen=True)
class Point:
    coords: Tuple[Fraction, ...]

    def __init__(self, coords: Iterable):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __getitem__(self, i: int) -> Fraction:
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def __add__(self, other: "Point") -> "Point":
        return Point(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: "Point") -> "Point":
        return Point(a - b for a, b in zip(self.coords, other.coords))

    def scale(self, q) -> "Point":
        q = Fraction(q)
        return Point(q * a for a in self.coords)

    def sq_dist(self, other: "Point") -> Fraction:
        if len(self.coords) != len(other.coords):
            raise DimensionError(
                f"dimension mismatch: {len(self.coords)} vs {len(other.coords)}")
        return sum(((a - b) * (a - b) for a, b in zip(self.coords, other.coords)),
                   Fraction(0))

    def __repr__(self):
        return "Point(" + ", ".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class CandidateSet:
    points: Tuple[Point, ...]

    def __init__(self, points: Iterable):
        pts = tuple(p if isinstance(p, Point) else Point(p) for p in points)
        if not pts:
            raise ValueError("candidate set must be nonempty")
        dims = {p.dim for p in pts}
        if len(dims) != 1:
            raise DimensionError(f"mixed dimensions {dims}")
        if len(set(pts)) != len(pts):
            raise ValueError("candidate points must be pairwise distinct")
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return self.points[0].dim

    @property
    def n(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def diameter_sq(self) -> Fraction:
        return max(p.sq_dist(q) for i, p in enumerate(self.points)
                   for q in self.points[i + 1:]) if self.n > 1 else Fraction(0)


@dataclass(frozen=True)
class VantageMultiset:
    entries: Tuple[Tuple[Point, int], ...]

    def __init__(self, entries: Iterable):
        norm = []
        for e in entries:
            # an entry is a Point, a coordinate tuple, or a (point, mult) pair;
            # the pair form is recognized by its nested first element
            if isinstance(e, Point):
                p, m = e, 1
            elif (isinstance(e, (tuple, list)) and len(e) == 2
                  and isinstance(e[0], (Point, tuple, list))
                  and isinstance(e[1], int)):
                p, m = e
                if not isinstance(p, Point):
                    p = Point(p)
            else:
                p, m = Point(e), 1
            if m < 1:
                raise ValueError(f"multiplicity must be >= 1, got {m}")
            norm.append((p, m))
        if not norm:
            raise ValueError("vantage multiset must be nonempty")
        dims = {p.dim for p, _ in norm}
        if len(dims) != 1:
            raise DimensionError(f"mixed dimensions {dims}")
        # merge duplicate points
        merged: dict = {}
        for p, m in norm:
            merged[p] = merged.get(p, 0) + m
        object.__setattr__(
            self, "entries",
            tuple(sorted(merged.items(), key=lambda e: e[0].coords)))

    @property
    def dim(self) -> int:
        return self.entries[0][0].dim

    @property
    def size(self) -> int:
        return sum(m for _, m in self.entries)

    def expand(self) -> Tuple[Point, ...]:
        out = []
        for p, m in self.entries:
            out.extend([p] * m)
        return tuple(out)

    def __iter__(self):
        return iter(self.entries)


def distance(p: Point, q: Point) -> RadicalSum:
    """Euclidean distance as the exact radical sqrt(sum (p_i - q_i)^2)."""
    return RadicalSum.sqrt_of(p.sq_dist(q))


def distance_sum(V: VantageMultiset, c: Point) -> RadicalSum:
    if V.dim != c.dim:
        raise DimensionError(f"dimension mismatch: {V.dim} vs {c.dim}")
    total = RadicalSum.ZERO
    for p, m in V.entries:
        total = total + RadicalSum.sqrt_of(c.sq_dist(p), m)
    return total


def _rank_sums(sums: Sequence[RadicalSum], precision_cap: int) -> Ordering:
    n = len(sums)
    # fast path: every sum is a single nonnegative term (or zero), so the
    # squared values are plain rationals
    if all(len(s._terms) <= 1 for s in sums):
        keys = []
        for i, s in enumerate(sums):
            if s.is_zero:
                keys.append((Fraction(0), i))
            else:
                ((r, q),) = s._terms.items()
                keys.append((q * q * r, i))
        keys.sort()
        for (ka, ia), (kb, ib) in zip(keys, keys[1:]):
            if ka == kb:
                raise TieError(ia, ib)
        return tuple(i for _, i in keys)

    def cmp(i: int, j: int) -> int:
        res = compare(sums[i], sums[j], precision_cap)
        if res is ComparisonResult.EQUAL:
            raise TieError(i, j)
        if res is ComparisonResult.INDETERMINATE:
            raise IndeterminateError(
                f"candidates {i}, {j} unresolved at cap {precision_cap}")
        return -1 if res is ComparisonResult.LESS else 1

    return tuple(sorted(range(n), key=cmp_to_key(cmp)))


def rank(C: CandidateSet, V: VantageMultiset,
         precision_cap: int = DEFAULT_PRECISION_CAP) -> Ordering:
    """Permutation of candidate indices by strictly increasing distance sum.

    Raises TieError when V does not distinguish C and IndeterminateError when
    a comparison hits the precision cap.
    """
    if C.dim != V.dim:
        raise DimensionError(f"dimension mismatch: {C.dim} vs {V.dim}")
    sums = [distance_sum(V, c) for c in C.points]
    return _rank_sums(sums, precision_cap)


def distinguishes(C: CandidateSet, V: VantageMultiset,
                  precision_cap: int = DEFAULT_PRECISION_CAP) -> bool:
    try:
        rank(C, V, precision_cap)
        return True
    except TieError:
        return False


def collapse_median(V: VantageMultiset) -> VantageMultiset:
    """Replace the two middle order statistics of a 1-d multiset of even size
    by two copies of their midpoint; the induced ordering of any candidate set
    it distinguishes is unchanged."""
    if V.dim != 1:
        raise DimensionError("collapse_median requires dim 1")
    vals = sorted(p[0] for p in V.expand())
    k = len(vals)
    if k % 2:
        raise ValueError(f"collapse_median requires even size, got {k}")
    mid = (vals[k // 2 - 1] + vals[k // 2]) / 2
    vals[k // 2 - 1] = mid
    vals[k // 2] = mid
    return VantageMultiset([Point((v,)) for v in vals])


# -- exact JSON I/O ---------------------------------------------------

def _parse_scalar(x) -> Fraction:
    if isinstance(x, bool):
        raise ValueError(f"invalid coordinate {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise ValueError(
        f"coordinates must be integers or exact strings, got {x!r}")


def pointset_from_json(data) -> CandidateSet:
    """{"dim": d, "points": [["p/q" | "decimal" | int, ...], ...]}"""
    if isinstance(data, str):
        data = json.loads(data)
    dim = data["dim"]
    pts = [Point([_parse_scalar(c) for c in row]) for row in data["points"]]
    for p in pts:
        if p.dim != dim:
            raise DimensionError(f"point {p} does not have dim {dim}")
    return CandidateSet(pts)


def multiset_from_json(data) -> VantageMultiset:
    """Point-set JSON plus an optional "mult": [m1, ...] field."""
    if isinstance(data, str):
        data = json.loads(data)
    dim = data["dim"]
    pts = [Point([_parse_scalar(c) for c in row]) for row in data["points"]]
    for p in pts:
        if p.dim != dim:
            raise DimensionError(f"point {p} does not have dim {dim}")
    mults = data.get("mult", [1] * len(pts))
    if len(mults) != len(pts):
        raise ValueError("mult length does not match points")
    return VantageMultiset(list(zip(pts, [int(m) for m in mults])))


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def pointset_to_json(C: CandidateSet) -> dict:
    return {"dim": C.dim, "points": [[_fmt(c) for c in p] for p in C.points]}


def multiset_to_json(V: VantageMultiset) -> dict:
    return {
        "dim": V.dim,
        "points": [[_fmt(c) for c in p] for p, _ in V.entries],
        "mult": [m for _, m in V.entries],
    }
