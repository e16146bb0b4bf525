import itertools
import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from sonc import linalg
from sonc.circuits import (
    barycentric_vector,
    enumerate_circuits,
    is_edge_generator,
    minimal_circuits,
    reznick_cone,
    simplicial_circuit_through,
)
from sonc.errors import NotInteriorPoint, NotSimplicial
from sonc.geometry import Polytope, SupportSet
from sonc.lp import in_cone

SIX = SupportSet([(0, 0), (2, 0), (3, 0), (1, 1), (2, 1), (1, 2)])
MOTZKIN = SupportSet([(0, 0), (4, 2), (2, 4), (2, 2)])
LINE = SupportSet([(i,) for i in range(5)])

configs = st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=3, max_size=7, unique=True)


def brute_circuits(A):
    """Supports of minimal dependent subsets, via sympy."""
    M = sp.Matrix(A.matrix)
    out = set()
    for size in range(2, len(A) + 1):
        for S in itertools.combinations(range(len(A)), size):
            if M[:, list(S)].rank() == size:
                continue
            if all(M[:, [i for i in S if i != j]].rank() == size - 1 for j in S):
                out.add(S)
    return out


@given(configs)
def test_enumeration_matches_brute_force(pts):
    A = SupportSet(pts)
    C = enumerate_circuits(A)
    assert {c.support for c in C} == brute_circuits(A)
    assert len({c.support for c in C}) == len(C)


@given(configs)
def test_circuit_invariants(pts):
    A = SupportSet(pts)
    for c in enumerate_circuits(A):
        assert all(linalg.dot(row, c.kernel_vec) == 0 for row in A.matrix)
        assert all(c.kernel_vec[i] != 0 for i in c.support)
        if c.simplicial:
            assert c.kernel_vec[c.interior_index] == -1
            assert sum(c.kernel_vec[i] for i in c.vertices) == 1
            P = Polytope(A.subset(c.vertices))
            assert P.in_relint(A.points[c.interior_index])
        else:
            assert c.kernel_vec[c.support[0]] == 1


def test_motzkin_circuit():
    (c,) = enumerate_circuits(MOTZKIN)
    assert c.simplicial and c.interior_index == 3
    assert c.integer_vector() == (1, 1, 1, -3)
    third = Fraction(1, 3)
    assert barycentric_vector(c) == (third, third, third, -1)


def test_univariate_barycentric_vectors():
    (c,) = enumerate_circuits(SupportSet([(0,), (1,), (2,)]))
    assert barycentric_vector(c) == (Fraction(1, 2), -1, Fraction(1, 2))
    (c,) = enumerate_circuits(SupportSet([(0,), (2,), (3,)]))
    assert barycentric_vector(c) == (Fraction(1, 3), -1, Fraction(2, 3))


def test_square_has_no_simplicial_circuit():
    A = SupportSet([(0, 0), (1, 0), (0, 1), (1, 1)])
    (c,) = enumerate_circuits(A)
    assert c.signature == (2, 2) and not c.simplicial
    with pytest.raises(NotSimplicial):
        barycentric_vector(c)
    with pytest.raises(NotSimplicial):
        is_edge_generator(A, c)
    assert reznick_cone(A).dim == 0


def test_edge_generators():
    assert len(reznick_cone(SIX).edge_generators) == 4
    assert [c.support for c in minimal_circuits(LINE)] == [(0, 1, 2), (1, 2, 3), (2, 3, 4)]
    assert reznick_cone(SIX).dim == 3
    assert reznick_cone(LINE).dim == 3
    (c,) = enumerate_circuits(MOTZKIN)
    assert is_edge_generator(MOTZKIN, c)


@given(configs)
def test_edge_generators_span_every_simplicial_circuit(pts):
    A = SupportSet(pts)
    R = reznick_cone(A)
    gens = [c.kernel_vec for c in R.edge_generators]
    for c in R.circuits:
        assert in_cone(gens, c.kernel_vec) is not None


@given(configs, st.randoms(use_true_random=False))
def test_edge_generators_invariant_under_relabeling(pts, rnd):
    A = SupportSet(pts)
    perm = list(range(len(pts)))
    rnd.shuffle(perm)
    B = SupportSet([pts[p] for p in perm])
    left = {frozenset(A.points[i] for i in c.support) for c in minimal_circuits(A)}
    right = {frozenset(B.points[i] for i in c.support) for c in minimal_circuits(B)}
    assert left == right


@given(configs)
def test_interior_point_gives_full_dimensional_cone(pts):
    A = SupportSet(pts)
    P = A.polytope
    if any(P.in_relint(p) for p in A.points):
        assert reznick_cone(A).dim == A.codim


def test_simplicial_circuit_through():
    c = simplicial_circuit_through(SIX, 3, 2)
    assert c.simplicial and c.interior_index == 3 and 2 in c.support
    assert c.support == (0, 2, 3, 5)
    (m,) = enumerate_circuits(MOTZKIN)
    assert simplicial_circuit_through(MOTZKIN, 3, 0) == m
    c = simplicial_circuit_through(LINE, 2, 4)
    assert c.interior_index == 2 and 4 in c.support and len(c.support) == 3
    with pytest.raises(NotInteriorPoint):
        simplicial_circuit_through(SIX, 0, 3)


@given(configs, st.integers(0, 10**6))
def test_simplicial_circuit_through_random(pts, seed):
    A = SupportSet(pts)
    inner = [i for i, p in enumerate(A.points) if A.polytope.in_relint(p)]
    if not inner:
        return
    rng = random.Random(seed)
    i = rng.choice(inner)
    v = rng.choice([j for j in range(len(A)) if j != i])
    c = simplicial_circuit_through(A, i, v)
    assert c.simplicial and c.interior_index == i and v in c.support
