from fractions import Fraction

import numpy as np
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import linprog

from sonc import linalg
from sonc.lp import feasible_point, in_cone, solve_lp

small = st.integers(-5, 5)


def matrices(rows=st.integers(1, 4), cols=st.integers(1, 5)):
    return st.tuples(rows, cols).flatmap(
        lambda rc: st.lists(st.lists(small, min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0])
    )


@given(matrices())
def test_rank_matches_sympy(M):
    assert linalg.rank(M) == sp.Matrix(M).rank()


@given(matrices())
def test_nullspace_is_kernel_basis(M):
    N = linalg.nullspace(M)
    assert len(N) == len(M[0]) - sp.Matrix(M).rank()
    for v in N:
        assert all(linalg.dot(row, v) == 0 for row in M)
    if N:
        assert linalg.rank(N) == len(N)


@given(st.integers(1, 4).flatmap(lambda k: st.lists(st.lists(small, min_size=k, max_size=k), min_size=k, max_size=k)))
def test_det_matches_sympy(M):
    assert linalg.det(M) == sp.Matrix(M).det()


@given(st.lists(st.fractions(min_value=-10, max_value=10, max_denominator=12), min_size=1, max_size=6))
def test_primitive_integer_is_positive_rescaling(v):
    p = linalg.primitive_integer(v)
    if all(x == 0 for x in v):
        return
    ratios = {Fraction(a) / b for a, b in zip(p, v) if b}
    assert len(ratios) == 1 and next(iter(ratios)) > 0
    assert np.gcd.reduce([abs(x) for x in p]) == 1


def test_solve_returns_exact_solution():
    x = linalg.solve([[2, 1], [1, 3]], [3, 5])
    assert x == (Fraction(4, 5), Fraction(7, 5))
    assert linalg.solve([[1, 1], [1, 1]], [1, 2]) is None


@given(
    st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=5),
    st.lists(st.integers(0, 6), min_size=5, max_size=5),
    st.lists(small, min_size=3, max_size=3),
)
def test_lp_value_matches_scipy(A, b, c):
    b = b[: len(A)]
    # bounded box keeps both solvers on the same finite problem
    A_full = A + [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    b_full = b + [4, 4, 4]
    ours = solve_lp(c, A_full, b_full)
    ref = linprog([-v for v in c], A_ub=A_full, b_ub=b_full, bounds=[(0, None)] * 3, method="highs")
    assert (ours.status == "optimal") == (ref.status == 0)
    if ref.status == 0:
        assert abs(float(ours.value) + ref.fun) < 1e-7
        x = ours.x
        assert all(v >= 0 for v in x)
        assert all(linalg.dot(row, x) <= bb for row, bb in zip(A_full, b_full))


def test_lp_detects_infeasible_and_unbounded():
    assert solve_lp([1], A_ub=[[1], [-1]], b_ub=[1, -2]).status == "infeasible"
    assert solve_lp([1], A_ub=[[-1]], b_ub=[0]).status == "unbounded"


def test_free_variables_and_equalities():
    res = solve_lp([-1, 0], A_eq=[[1, 1]], b_eq=[-3], free=[0, 1], A_ub=[[0, 1]], b_ub=[2])
    assert res.status == "optimal"
    assert res.x == (Fraction(-5), Fraction(2))


def test_feasible_point_and_cone_membership():
    p = feasible_point(A_ub=[[1, 1]], b_ub=[1], A_eq=[[1, -1]], b_eq=[0])
    assert p is not None and p[0] == p[1] and sum(p) <= 1
    assert in_cone([(1, 0), (1, 1)], (3, 1)) == (Fraction(2), Fraction(1))
    assert in_cone([(1, 0), (1, 1)], (0, 1)) is None
