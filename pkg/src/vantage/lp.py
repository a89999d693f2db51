"""Small exact linear programming over the rationals.

Two-phase dense simplex with Bland's rule, used for convex-hull membership
tests and for finding strictly interior points of arrangement cells.  Problem
sizes here are tiny (tens of rows/columns), so clarity beats sparsity.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def _pivot(T: List[List[Fraction]], basis: List[int], row: int, col: int):
    piv = T[row][col]
    T[row] = [x / piv for x in T[row]]
    for r, line in enumerate(T):
        if r != row and line[col]:
            f = line[col]
            T[r] = [a - f * b for a, b in zip(line, T[row])]
    basis[row] = col


def _simplex(T: List[List[Fraction]], basis: List[int], ncols: int) -> str:
    """Minimize the objective in the last row of tableau T (Bland's rule)."""
    while True:
        obj = T[-1]
        col = next((j for j in range(ncols) if obj[j] < 0), None)
        if col is None:
            return OPTIMAL
        best_row, best_ratio = None, None
        for r in range(len(T) - 1):
            if T[r][col] > 0:
                ratio = T[r][-1] / T[r][col]
                if (best_ratio is None or ratio < best_ratio
                        or (ratio == best_ratio and basis[r] > basis[best_row])):
                    best_row, best_ratio = r, ratio
        if best_row is None:
            return UNBOUNDED
        _pivot(T, basis, best_row, col)


def solve_standard(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction],
                   c: Sequence[Fraction]) -> Tuple[str, Optional[List[Fraction]], Optional[Fraction]]:
    """min c.x subject to A x = b, x >= 0.  Returns (status, x, value)."""
    m, n = len(A), len(c)
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    c = [Fraction(v) for v in c]
    for i in range(m):
        if b[i] < 0:
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]

    # phase 1: artificial variables
    T = [A[i] + [Fraction(1) if j == i else Fraction(0) for j in range(m)] + [b[i]]
         for i in range(m)]
    basis = [n + i for i in range(m)]
    obj = [Fraction(0)] * (n + m + 1)
    for i in range(m):
        for j in range(n + m + 1):
            obj[j] -= T[i][j]
        obj[n + i] += 1  # artificials have cost 1; cancel their column
    T.append(obj)
    _simplex(T, basis, n + m)
    if -T[-1][-1] != 0:
        return INFEASIBLE, None, None
    # drive remaining artificials out of the basis where possible
    for r in range(m):
        if basis[r] >= n:
            col = next((j for j in range(n) if T[r][j] != 0), None)
            if col is not None:
                _pivot(T, basis, r, col)

    # phase 2
    rows = [row[:n] + [row[-1]] for row in T[:-1]]
    keep = [r for r in range(m) if basis[r] < n or any(rows[r][:n])]
    rows = [rows[r] for r in keep]
    basis = [basis[r] for r in keep]
    obj = c[:] + [Fraction(0)]
    for r, bi in enumerate(basis):
        if bi < n and obj[bi]:
            f = obj[bi]
            obj = [a - f * v for a, v in zip(obj, rows[r])]
    rows.append(obj)
    status = _simplex(rows, basis, n)
    if status == UNBOUNDED:
        return UNBOUNDED, None, None
    x = [Fraction(0)] * n
    for r, bi in enumerate(basis):
        if bi < n:
            x[bi] = rows[r][-1]
    value = sum(ci * xi for ci, xi in zip(c, x))
    return OPTIMAL, x, value


def maximize(A_ub: Sequence[Sequence[Fraction]], b_ub: Sequence[Fraction],
             c: Sequence[Fraction]) -> Tuple[str, Optional[List[Fraction]], Optional[Fraction]]:
    """max c.x subject to A_ub x <= b_ub, x free.  Split x = u - w, add slacks."""
    m = len(A_ub)
    n = len(c)
    A = []
    for i, row in enumerate(A_ub):
        pos = [Fraction(v) for v in row]
        neg = [-v for v in pos]
        slack = [Fraction(1) if j == i else Fraction(0) for j in range(m)]
        A.append(pos + neg + slack)
    cc = [-Fraction(v) for v in c] + [Fraction(v) for v in c] + [Fraction(0)] * m
    status, x, value = solve_standard(A, b_ub, cc)
    if status != OPTIMAL:
        return status, None, None
    xs = [x[j] - x[n + j] for j in range(n)]
    return OPTIMAL, xs, -value


def strict_interior(A_ub: Sequence[Sequence[Fraction]],
                    b_ub: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """A point x with A_ub x < b_ub strictly, or None.

    Maximizes the uniform slack t (capped at 1 so the LP stays bounded);
    a positive optimum certifies strict feasibility.
    """
    m = len(A_ub)
    if m == 0:
        return []
    n = len(A_ub[0])
    A = [list(row) + [Fraction(1)] for row in A_ub]
    A.append([Fraction(0)] * n + [Fraction(1)])
    b = list(b_ub) + [Fraction(1)]
    c = [Fraction(0)] * n + [Fraction(1)]
    status, x, value = maximize(A, b, c)
    if status != OPTIMAL or value is None or value <= 0:
        return None
    return x[:n]


def in_convex_hull(point: Sequence[Fraction],
                   vertices: Sequence[Sequence[Fraction]]) -> bool:
    """Exact membership of `point` in the convex hull of `vertices`."""
    if not vertices:
        return False
    d = len(point)
    k = len(vertices)
    A = [[Fraction(vertices[j][i]) for j in range(k)] for i in range(d)]
    A.append([Fraction(1)] * k)
    b = [Fraction(point[i]) for i in range(d)] + [Fraction(1)]
    status, _, _ = solve_standard(A, b, [Fraction(0)] * k)
    return status == OPTIMAL


def solve_linear(A: Sequence[Sequence[Fraction]],
                 b: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """One exact solution of A x = b (possibly underdetermined), or None."""
    m = len(A)
    n = len(A[0]) if m else 0
    M = [[Fraction(v) for v in row] + [Fraction(b[i])] for i, row in enumerate(A)]
    row = 0
    pivots = []
    for col in range(n):
        piv = next((r for r in range(row, m) if M[r][col]), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        M[row] = [v / M[row][col] for v in M[row]]
        for r in range(m):
            if r != row and M[r][col]:
                f = M[r][col]
                M[r] = [a - f * c2 for a, c2 in zip(M[r], M[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    for r in range(row, m):
        if M[r][-1] != 0:
            return None
    x = [Fraction(0)] * n
    for r, col in enumerate(pivots):
        x[col] = M[r][-1]
    return x


def nullspace(A: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    """Basis of the rational nullspace of A."""
    m = len(A)
    n = len(A[0]) if m else 0
    M = [[Fraction(v) for v in row] for row in A]
    row = 0
    pivots = []
    for col in range(n):
        piv = next((r for r in range(row, m) if M[r][col]), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        M[row] = [v / M[row][col] for v in M[row]]
        for r in range(m):
            if r != row and M[r][col]:
                f = M[r][col]
                M[r] = [a - f * c2 for a, c2 in zip(M[r], M[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -M[r][fc]
        basis.append(v)
    return basis
