from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from oracles import brute_primitive, gcd_all, nullspace, rank as oracle_rank
from torquo import lattice
from torquo.errors import ZeroVector

small = st.integers(-6, 6)


@pytest.mark.parametrize(
    "v, expected",
    [
        ((2, 4), (1, 2)),
        ((1, 0, 0), (1, 0, 0)),
        ((Fraction(-6, 4), Fraction(9, 4)), (-2, 3)),
        ((0, -3), (0, -1)),
    ],
)
def test_primitivize_examples(v, expected):
    assert lattice.primitivize(v) == expected
    assert brute_primitive(v) == expected


def test_primitivize_zero():
    with pytest.raises(ZeroVector):
        lattice.primitivize((0, 0))


@given(st.lists(small, min_size=1, max_size=5).filter(any), st.fractions(min_value=Fraction(1, 50), max_value=50))
def test_primitivize_idempotent_and_scale_invariant(v, lam):
    p = lattice.primitivize(v)
    assert lattice.primitivize(p) == p
    assert lattice.primitivize([lam * x for x in v]) == p
    assert p == brute_primitive(v)


def test_kernel_examples():
    assert lattice.kernel_basis([[1, 0], [0, 1]]) == []
    assert lattice.kernel_basis([[1, 0, -1], [0, 1, -1]]) == [(1, 1, 1)]
    assert lattice.kernel_basis([[1, -1, 0, 0], [0, 0, 1, -1]]) == [(1, 1, 0, 0), (0, 0, 1, 1)]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8).flatmap(lambda r: st.integers(1, 8).flatmap(
    lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))))
def test_kernel_against_row_reduction_oracle(M):
    cols = len(M[0])
    ker = lattice.kernel_basis(M)
    for k in ker:
        assert all(x == 0 for x in lattice.mat_vec(M, k))
        assert gcd_all(k) == 1
    assert len(ker) == cols - oracle_rank(M)
    assert len(ker) == len(nullspace(M, cols))
    if ker:
        assert oracle_rank([list(k) for k in ker]) == len(ker)


def test_det_and_rank():
    assert lattice.det([[1, 0], [-1, -2]]) == -2
    assert lattice.det([[2, 1, 0], [1, 2, 1], [0, 1, 2]]) == 4
    assert lattice.rank([[1, 2], [2, 4]]) == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_matches_sympy(M):
    assert lattice.det(M) == sympy.Matrix(M).det()


def test_solve():
    assert lattice.solve([[1, 1], [1, -1]], [2, 0]) == (1, 1)
    assert lattice.solve([[1, 1], [2, 2]], [1, 3]) is None


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))))
def test_smith_normal_form(M):
    D, U, V = lattice.smith_normal_form(M)
    assert sympy.Matrix(U) * sympy.Matrix(M) * sympy.Matrix(V) == sympy.Matrix(D)
    assert abs(sympy.Matrix(U).det()) == 1 and abs(sympy.Matrix(V).det()) == 1
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    expected = sympy_snf(sympy.Matrix(M), domain=sympy.ZZ)
    assert sorted(abs(expected[i, i]) for i in range(len(diag))) == sorted(diag)


def test_hermite_normal_form():
    H = lattice.hermite_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert all(H[i][j] == 0 for i in range(3) for j in range(i))
    assert all(0 <= H[i][i + k] < H[i + k][i + k] for i in range(3) for k in range(1, 3 - i))
    # unimodular row ops keep the row lattice
    assert abs(sympy.Matrix(H).det()) == abs(sympy.Matrix([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]).det())


def test_quotient_projection_examples():
    p = lattice.quotient_projection(2, [(1, 0)])
    assert p.target_rank == 1 and p((0, 1)) in ((1,), (-1,)) and p((1, 0)) == (0,)
    p = lattice.quotient_projection(2, [(1, 1), (-1, -1)])
    assert p.target_rank == 1
    assert {p((1, 0)), p((0, 1))} == {(1,), (-1,)}
    p = lattice.quotient_projection(3, [(2, 0, 0)])
    assert p.target_rank == 2
    assert p((1, 0, 0)) == (0, 0)  # saturated: quotient by Z(1,0,0), not Z(2,0,0)


def _surjective(P):
    if not P:
        return True
    D = sympy_snf(sympy.Matrix(P), domain=sympy.ZZ)
    return all(abs(D[i, i]) == 1 for i in range(len(P)))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.lists(small, min_size=n, max_size=n).filter(any), min_size=1, max_size=4))))
def test_quotient_projection_properties(args):
    n, gens = args
    p = lattice.quotient_projection(n, gens)
    for g in gens:
        assert all(x == 0 for x in p(g))
    assert p.target_rank + oracle_rank(gens) == n
    assert len(p.matrix) == p.target_rank
    assert oracle_rank([list(r) for r in p.matrix]) == p.target_rank if p.target_rank else True
    assert _surjective([list(r) for r in p.matrix])
    # kernel is exactly the saturation: v in span and integral => p(v) = 0
    for g in gens:
        prim = lattice.primitivize(g)
        assert all(x == 0 for x in p(prim))
