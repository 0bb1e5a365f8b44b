"""Exact integer and rational linear algebra for fan computations.

Everything here works on plain Python ``int`` and :class:`fractions.Fraction`
values stored in tuples or lists. No floating point is ever used.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import ZeroVector

Vector = tuple  # tuple of int or Fraction
Matrix = Sequence[Sequence]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def primitivize(v: Iterable) -> tuple[int, ...]:
    """Return the primitive lattice vector on the ray spanned by ``v``.

    >>> primitivize([2, 4])
    (1, 2)
    >>> primitivize([Fraction(-6, 4), Fraction(9, 4)])
    (-2, 3)
    """
    v = [_frac(x) for x in v]
    if all(x == 0 for x in v):
        raise ZeroVector("cannot primitivize the zero vector")
    den = lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = gcd(*ints)
    return tuple(x // g for x in ints)


def is_primitive(v: Sequence[int]) -> bool:
    return any(v) and gcd(*v) == 1


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), 0)


def mat_vec(M: Matrix, v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in M)


def transpose(M: Matrix) -> list[list]:
    return [list(col) for col in zip(*M)]


def rref(M: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q together with the pivot columns."""
    A = [[_frac(x) for x in row] for row in M]
    if not A:
        return A, []
    rows, cols = len(A), len(A[0])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        piv = A[r][c]
        A[r] = [x / piv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def rank(M: Matrix) -> int:
    if not M or not M[0]:
        return 0
    return len(rref(M)[1])


def kernel_basis(M: Matrix, ncols: int | None = None) -> list[tuple[int, ...]]:
    """Basis of the right kernel of ``M`` as primitive integer vectors.

    One vector per free column of the reduced echelon form, in column
    order, each scaled so that its free coordinate is positive.
    ``ncols`` is needed only when ``M`` has no rows.
    """
    if not M:
        if ncols is None:
            raise ValueError("ncols is required for a matrix with no rows")
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    R, pivots = rref(M)
    cols = len(M[0])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(primitivize(v))
    return basis


def solve(M: Matrix, b: Sequence) -> tuple[Fraction, ...] | None:
    """One rational solution of ``M x = b`` or ``None`` if inconsistent."""
    rows = len(M)
    if rows == 0:
        raise ValueError("empty system")
    cols = len(M[0])
    aug = [list(M[i]) + [b[i]] for i in range(rows)]
    R, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for row, p in zip(R, pivots):
        x[p] = row[cols]
    return tuple(x)


def det(M: Matrix) -> int | Fraction:
    """Determinant by fraction-free Bareiss elimination (exact)."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(row) for row in M]
    integral = all(isinstance(x, int) for row in A for x in row)
    if not integral:
        A = [[_frac(x) for x in row] for row in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = A[i][j] * A[k][k] - A[i][k] * A[k][j]
                A[i][j] = num // prev if integral else num / prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def hermite_normal_form(M: Matrix) -> list[list[int]]:
    """Row-style Hermite normal form of an integer matrix.

    The result is obtained from ``M`` by unimodular row operations, is in
    row echelon form with positive pivots, has every entry above a pivot
    reduced into ``[0, pivot)``, and has its zero rows removed.
    """
    A = [[int(x) for x in row] for row in M]
    if not A:
        return []
    rows, cols = len(A), len(A[0])
    r = 0
    for c in range(cols):
        if r == rows:
            break
        # Euclid on column c below row r
        while True:
            nz = [i for i in range(r, rows) if A[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[p] = A[p], A[r]
            done = True
            for i in range(r + 1, rows):
                if A[i][c] != 0:
                    q = A[i][c] // A[r][c]
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    if A[i][c] != 0:
                        done = False
            if done:
                break
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-a for a in A[r]]
        for i in range(r):
            q = A[i][c] // A[r][c]
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
        r += 1
    return [row for row in A if any(row)]


def smith_normal_form(M: Matrix) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form ``D = U M V`` with unimodular ``U`` and ``V``.

    Returns ``(D, U, V)``. The diagonal of ``D`` is nonnegative and each
    entry divides the next.
    """
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U, V = _identity(m), _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        A[dst] = [a - q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in A:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    t = 0
    while t < min(m, n):
        entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            changed = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, A[i][t] // A[t][t])
                    if A[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, A[t][j] // A[t][t])
                    if A[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            # enforce divisibility of the remaining block
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % A[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], -1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return A, U, V


@dataclass(frozen=True)
class LatticeProjection:
    """Surjection ``Z^source_rank -> Z^target_rank`` given by an integer matrix."""

    source_rank: int
    target_rank: int
    matrix: tuple[tuple[int, ...], ...]

    def __call__(self, v: Sequence) -> tuple:
        return mat_vec(self.matrix, v)

    apply = __call__


def quotient_projection(n: int, generators: Sequence[Sequence[int]]) -> LatticeProjection:
    """Projection of ``Z^n`` onto ``Z^n / (Z^n ∩ span_Q(generators))``.

    The quotient is torsion free: the rows of the Smith transform beyond
    the rank of the generator matrix annihilate the saturated sublattice
    and map ``Z^n`` onto ``Z^(n - r)``. The matrix is put in Hermite normal
    form so the result does not depend on elimination order.
    """
    gens = [tuple(int(x) for x in g) for g in generators]
    for g in gens:
        if len(g) != n:
            raise ValueError(f"generator {g} does not lie in Z^{n}")
    if not gens or n == 0:
        return LatticeProjection(n, n, tuple(tuple(r) for r in _identity(n)))
    A = transpose(gens)  # n x k, generators as columns
    D, U, _ = smith_normal_form(A)
    r = sum(1 for i in range(min(len(D), len(D[0]))) if D[i][i])
    rows = U[r:]
    P = hermite_normal_form(rows) if rows else []
    return LatticeProjection(n, n - r, tuple(tuple(row) for row in P))
