"""Exact rational linear programming.

A dense two-phase simplex over :class:`fractions.Fraction` with Bland's
anti-cycling rule. Problems in this package have at most a few dozen
variables and constraints, so clarity wins over speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


def _pivot(T, basis, r, c):
    piv = T[r][c]
    T[r] = [v / piv for v in T[r]]
    for i, row in enumerate(T):
        if i != r and row[c] != 0:
            f = row[c]
            T[i] = [a - f * b for a, b in zip(row, T[r])]
    basis[r] = c


def _run(T, basis, ncols, allowed):
    """Minimize the objective stored in the last row of ``T``.

    The last row holds reduced costs; the last column holds the rhs.
    Returns False when the problem is unbounded.
    """
    m = len(T) - 1
    while True:
        obj = T[-1]
        c = next((j for j in range(ncols) if allowed[j] and obj[j] < 0), None)
        if c is None:
            return True
        best = None
        for i in range(m):
            if T[i][c] > 0:
                ratio = T[i][-1] / T[i][c]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return False
        _pivot(T, basis, best[1], c)


def simplex(c: Sequence, A_eq: Sequence[Sequence], b_eq: Sequence) -> LPResult:
    """Minimize ``c.x`` subject to ``A_eq x = b_eq`` and ``x >= 0``."""
    n = len(c)
    rows = []
    for a, b in zip(A_eq, b_eq):
        a = [Fraction(v) for v in a]
        b = Fraction(b)
        if b < 0:
            a, b = [-v for v in a], -b
        rows.append((a, b))
    m = len(rows)
    ncols = n + m
    # phase 1: artificial variable per row
    T = []
    for i, (a, b) in enumerate(rows):
        T.append(a + [Fraction(int(i == k)) for k in range(m)] + [b])
    obj = [Fraction(0)] * (ncols + 1)
    for row in T:
        obj = [o - v for o, v in zip(obj, row)]
    for k in range(m):
        obj[n + k] = Fraction(0)
    T.append(obj)
    basis = list(range(n, n + m))
    _run(T, basis, ncols, [True] * ncols)
    if T[-1][-1] != 0:
        return LPResult(INFEASIBLE)
    # drive artificials out of the basis; drop redundant rows
    i = 0
    while i < len(T) - 1:
        if basis[i] >= n:
            j = next((j for j in range(n) if T[i][j] != 0), None)
            if j is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, basis, i, j)
        i += 1
    # phase 2
    cost = [Fraction(v) for v in c] + [Fraction(0)] * (m + 1)
    for i, bvar in enumerate(basis):
        if cost[bvar] != 0:
            f = cost[bvar]
            cost = [a - f * b for a, b in zip(cost, T[i])]
    T[-1] = cost
    allowed = [j < n for j in range(ncols)]
    if not _run(T, basis, ncols, allowed):
        return LPResult(UNBOUNDED)
    x = [Fraction(0)] * n
    for i, bvar in enumerate(basis):
        if bvar < n:
            x[bvar] = T[i][-1]
    x = tuple(x)
    value = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, x, value)


def linprog(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    free: Sequence[bool] | bool = False,
) -> LPResult:
    """Minimize ``c.x`` under ``A_ub x <= b_ub`` and ``A_eq x = b_eq``.

    Variables are nonnegative unless marked in ``free`` (a flag per
    variable, or a single flag for all of them).
    """
    n = len(c)
    if isinstance(free, bool):
        free = [free] * n
    # column layout: x+ (n), x- (for free vars), slacks (len(A_ub))
    free_idx = [j for j in range(n) if free[j]]
    k = len(A_ub)

    def expand(row, slack_pos):
        out = [Fraction(v) for v in row]
        out += [-Fraction(row[j]) for j in free_idx]
        out += [Fraction(int(s == slack_pos)) for s in range(k)]
        return out

    A = [expand(row, s) for s, row in enumerate(A_ub)] + [expand(row, -1) for row in A_eq]
    b = list(b_ub) + list(b_eq)
    cc = [Fraction(v) for v in c] + [-Fraction(c[j]) for j in free_idx] + [Fraction(0)] * k
    if not A:
        if any(v != 0 for v in cc):
            return LPResult(UNBOUNDED)
        return LPResult(OPTIMAL, tuple(Fraction(0) for _ in range(n)), Fraction(0))
    res = simplex(cc, A, b)
    if res.status != OPTIMAL:
        return res
    x = list(res.x[:n])
    for t, j in enumerate(free_idx):
        x[j] -= res.x[n + t]
    return LPResult(OPTIMAL, tuple(x), res.value)


def feasible_point(
    nvars: int,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    free: Sequence[bool] | bool = False,
) -> tuple[Fraction, ...] | None:
    res = linprog([0] * nvars, A_ub, b_ub, A_eq, b_eq, free)
    return res.x if res.status == OPTIMAL else None
