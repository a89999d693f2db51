"""Exact computation, enumeration and certification of vantage-point orderings.

A candidate set is ranked by the sum of Euclidean distances to a multiset of
vantage points.  Everything here is exact: coordinates are rationals, distance
sums are radical sums compared by certified arithmetic, and every enumeration
or construction ships witnesses that re-verify through `rank`.
"""

from vantage.scalar import (
    ComparisonResult,
    Interval,
    RadicalSum,
    Rational,
    compare,
    eval_interval,
)
from vantage.geometry import (
    CandidateSet,
    Point,
    TieError,
    VantageMultiset,
    collapse_median,
    distance,
    distance_sum,
    distinguishes,
    rank,
)

__version__ = "0.1.0"

__all__ = [
    "CandidateSet",
    "ComparisonResult",
    "Interval",
    "Point",
    "RadicalSum",
    "Rational",
    "TieError",
    "VantageMultiset",
    "collapse_median",
    "compare",
    "distance",
    "distance_sum",
    "distinguishes",
    "eval_interval",
    "rank",
    "__version__",
]
