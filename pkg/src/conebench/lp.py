"""Exact rational linear programming (two-phase dense simplex, Bland's rule).

Small problems only: the cone computations here live in dimension <= ~20.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exact import Vec

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: Optional[Vec] = None
    value: Optional[Fraction] = None


def _pivot(tab, basis, r, c):
    piv = tab[r][c]
    rowr = [a / piv if a else a for a in tab[r]]
    tab[r] = rowr
    nz = [(j, b) for j, b in enumerate(rowr) if b]
    for i in range(len(tab)):
        if i != r and tab[i][c] != 0:
            f = tab[i][c]
            row = tab[i]
            for j, b in nz:
                row[j] -= f * b
    basis[r] = c


def _run(tab, basis, cost_row, allowed):
    """Minimize; ``tab[cost_row]`` holds reduced costs, last column the rhs."""
    m = cost_row
    while True:
        obj = tab[cost_row]
        col = next((j for j in allowed if obj[j] < 0), None)
        if col is None:
            return OPTIMAL
        best = None
        for i in range(m):
            a = tab[i][col]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return UNBOUNDED
        _pivot(tab, basis, best[1], col)


def simplex_standard(c: Sequence[Fraction], a_eq: Sequence[Sequence[Fraction]], b_eq: Sequence[Fraction]) -> LPResult:
    """Minimize ``c.x`` subject to ``a_eq x = b_eq``, ``x >= 0``."""
    n = len(c)
    rows = []
    for row, b in zip(a_eq, b_eq):
        row, b = list(row), Fraction(b)
        if b < 0:
            row, b = [-a for a in row], -b
        rows.append(row + [b])
    m = len(rows)
    # phase 1: artificials n..n+m-1
    tab = [r[:n] + [Fraction(int(i == k)) for k in range(m)] + [r[n]] for i, r in enumerate(rows)]
    basis = list(range(n, n + m))
    phase1 = [Fraction(0)] * n + [Fraction(0)] * m + [Fraction(0)]
    for r in tab:
        for j in range(n):
            phase1[j] -= r[j]
        phase1[-1] -= r[-1]
    tab.append(phase1)
    _run(tab, basis, m, range(n))
    if tab[m][-1] != 0:
        return LPResult(INFEASIBLE)
    # drive artificials out of the basis; drop redundant rows
    keep = []
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if tab[i][j] != 0), None)
            if col is None:
                continue
            _pivot(tab, basis, i, col)
        keep.append(i)
    tab = [tab[i][:n] + [tab[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    m = len(tab)
    obj = [Fraction(x) for x in c] + [Fraction(0)]
    for i, bcol in enumerate(basis):
        f = obj[bcol]
        if f != 0:
            obj = [a - f * b for a, b in zip(obj, tab[i])]
    tab.append(obj)
    status = _run(tab, basis, m, range(n))
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [Fraction(0)] * n
    for i, bcol in enumerate(basis):
        x[bcol] = tab[i][-1]
    return LPResult(OPTIMAL, tuple(x), -tab[m][-1])


def maximize(
    c: Sequence[Fraction],
    a_ub: Sequence[Sequence[Fraction]] = (),
    b_ub: Sequence[Fraction] = (),
    a_eq: Sequence[Sequence[Fraction]] = (),
    b_eq: Sequence[Fraction] = (),
) -> LPResult:
    """Maximize ``c.x`` over free ``x`` with ``a_ub x <= b_ub`` and ``a_eq x = b_eq``."""
    n = len(c)
    k = len(a_ub)
    # x = xp - xm, slacks s >= 0
    rows, rhs = [], []
    for i, (row, b) in enumerate(zip(a_ub, b_ub)):
        rows.append(list(row) + [-a for a in row] + [Fraction(int(i == j)) for j in range(k)])
        rhs.append(Fraction(b))
    for row, b in zip(a_eq, b_eq):
        rows.append(list(row) + [-a for a in row] + [Fraction(0)] * k)
        rhs.append(Fraction(b))
    cost = [-Fraction(a) for a in c] + [Fraction(a) for a in c] + [Fraction(0)] * k
    res = simplex_standard(cost, rows, rhs)
    if res.status != OPTIMAL:
        return LPResult(res.status)
    x = tuple(res.x[i] - res.x[n + i] for i in range(n))
    return LPResult(OPTIMAL, x, -res.value)


def feasible_point(
    n: int,
    a_ub: Sequence[Sequence[Fraction]] = (),
    b_ub: Sequence[Fraction] = (),
    a_eq: Sequence[Sequence[Fraction]] = (),
    b_eq: Sequence[Fraction] = (),
) -> Optional[Vec]:
    res = maximize([Fraction(0)] * n, a_ub, b_ub, a_eq, b_eq)
    return res.x if res.status == OPTIMAL else None
