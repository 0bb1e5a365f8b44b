from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog as scipy_linprog

from torquo.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, feasible_point, linprog


def test_small_optimum():
    # max x + y  s.t. x + 2y <= 4, 3x + y <= 6
    res = linprog([-1, -1], A_ub=[[1, 2], [3, 1]], b_ub=[4, 6])
    assert res.status == OPTIMAL
    assert res.x == (Fraction(8, 5), Fraction(6, 5))
    assert res.value == Fraction(-14, 5)


def test_infeasible_and_unbounded():
    assert linprog([0], A_ub=[[1]], b_ub=[-1]).status == INFEASIBLE
    assert linprog([-1], A_ub=[[-1]], b_ub=[0]).status == UNBOUNDED
    assert linprog([1], free=True).status == UNBOUNDED


def test_free_variables_and_redundant_equalities():
    x = feasible_point(2, A_eq=[[1, 1], [2, 2]], b_eq=[-3, -6], free=True)
    assert x is not None and x[0] + x[1] == -3


def test_degenerate_problem_terminates():
    # Klee-Minty style degeneracy: many constraints tight at the origin
    A = [[1, 1, 1], [1, -1, 0], [0, 1, -1], [-1, 0, 1], [1, 0, 0]]
    res = linprog([-1, -1, -1], A_ub=A, b_ub=[0, 0, 0, 0, 0])
    assert res.status == OPTIMAL and res.value == 0


coef = st.integers(-5, 5)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.lists(coef, min_size=n, max_size=n),
    st.lists(st.lists(coef, min_size=n, max_size=n), min_size=1, max_size=5),
    st.lists(st.integers(0, 8), min_size=5, max_size=5),
)))
def test_matches_scipy_on_bounded_problems(args):
    c, A, b = args
    b = b[: len(A)]
    n = len(c)
    # box keeps the problem bounded; origin keeps it feasible
    A_full = A + [[int(i == j) for j in range(n)] for i in range(n)]
    b_full = b + [10] * n
    ours = linprog(c, A_ub=A_full, b_ub=b_full)
    ref = scipy_linprog(c, A_ub=A_full, b_ub=b_full, bounds=[(0, None)] * n, method="highs")
    assert ours.status == OPTIMAL and ref.status == 0
    assert float(ours.value) == pytest.approx(ref.fun, abs=1e-7)
    for row, rhs in zip(A_full, b_full):
        assert sum(a * x for a, x in zip(row, ours.x)) <= rhs
    assert all(x >= 0 for x in ours.x)
