from fractions import Fraction as F

from vantage import lp


def test_hull_membership():
    tri = [[0, 0], [1, 0], [0, 1]]
    assert lp.in_convex_hull([F(1, 2), F(1, 4)], tri)
    assert lp.in_convex_hull([F(0), F(0)], tri)          # vertex counts
    assert lp.in_convex_hull([F(1, 2), F(1, 2)], tri)    # boundary counts
    assert not lp.in_convex_hull([F(1), F(1)], tri)
    assert lp.in_convex_hull([F(1)], [[0], [2]])
    assert not lp.in_convex_hull([F(3)], [[0], [2]])


def test_strict_interior():
    x = lp.strict_interior([[-1, 0], [0, -1], [1, 1]], [F(0), F(0), F(1)])
    assert x is not None
    assert x[0] > 0 and x[1] > 0 and x[0] + x[1] < 1
    assert lp.strict_interior([[1], [-1]], [F(0), F(0)]) is None
    # x <= 1 and -x <= -1 pins x = 1: no strict point
    assert lp.strict_interior([[1], [-1]], [F(1), F(-1)]) is None
    assert lp.strict_interior([], []) == []


def test_maximize():
    status, x, v = lp.maximize([[1, 1], [1, -1]], [F(4), F(2)], [1, 0])
    assert status == lp.OPTIMAL and v == 3
    status, _, _ = lp.maximize([[1]], [F(1)], [-1])
    assert status == lp.UNBOUNDED


def test_solve_linear_and_nullspace():
    assert lp.solve_linear([[1, 1], [1, -1]], [F(2), F(0)]) == [F(1), F(1)]
    assert lp.solve_linear([[1, 1], [1, 1]], [F(0), F(1)]) is None
    ns = lp.nullspace([[1, 1, 1]])
    assert len(ns) == 2
    for v in ns:
        assert sum(v) == 0
