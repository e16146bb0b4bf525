import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sonc.errors import AmbientDimTooLarge, InvalidSubdivision, TooLarge
from sonc.geometry import SupportSet
from sonc.subdivision import (
    census,
    check_duality,
    enumerate_regular_subdivisions,
    is_regular,
    sonc_complex,
    subdivide,
    tropical_complex,
)

SIX = SupportSet([(0, 0), (2, 0), (3, 0), (1, 1), (2, 1), (1, 2)])
MOTZKIN = SupportSet([(0, 0), (4, 2), (2, 4), (2, 2)])
LINE = SupportSet([(i,) for i in range(5)])

configs = st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=3, max_size=7, unique=True)
weights = st.lists(st.integers(-4, 4), min_size=7, max_size=7)


def cells(L):
    return sorted(c.key for c in L.cells)


def test_univariate_split():
    L = subdivide(LINE, (0, 0, 1, 0, 0))
    assert cells(L) == [(0, 1, 2), (2, 3, 4)]
    M = tropical_complex(LINE, (0, 0, 1, 0, 0))
    assert sorted(x for _, x in M.vertices) == [(Fraction(-1, 2),), (Fraction(1, 2),)]
    assert check_duality(L, M)


def test_zero_weights_give_trivial_subdivision():
    assert cells(subdivide(SIX, [0] * 6)) == [tuple(range(6))]
    L = subdivide(MOTZKIN, [0] * 4)
    G = sonc_complex(L)
    assert G.signature == ((0, 1, 2, 3),)
    assert len(G.cells) == 7


def test_fold_along_shared_edge():
    # concave fold along the line 2x + y = 4 through (2,0) and (1,2)
    w = [-abs(2 * x + y - 4) for x, y in SIX.points]
    L = subdivide(SIX, w)
    assert cells(L) == [(0, 1, 3, 5), (1, 2, 4, 5)]
    # (2,1) sits on an edge of the second triangle, so only that edge is generated
    assert sonc_complex(L).signature == ((0, 1, 3, 5), (2, 4, 5))


def test_tropical_vertices_on_a_line():
    A = SupportSet([(0,), (2,), (3,)])
    M = tropical_complex(A, (0, -2, -3))
    assert M.vertices == ((frozenset({0, 1, 2}), (Fraction(1),)),)
    M = tropical_complex(A, (0, 0, 0))
    assert M.vertices == ((frozenset({0, 1, 2}), (Fraction(0),)),)


def test_stale_tropical_complex_fails_duality():
    L = subdivide(LINE, (0, 0, 1, 0, 0))
    M = tropical_complex(LINE, (0, 0, 0, 0, 0))
    assert not check_duality(L, M)
    assert check_duality(subdivide(LINE, [0] * 5), M)


def test_ambient_limit():
    A = SupportSet([(0, 0, 0, 0), (1, 0, 0, 0)])
    with pytest.raises(AmbientDimTooLarge):
        subdivide(A, (0, 0))


@given(configs, weights, st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)))
def test_invariant_under_affine_change_of_weights(pts, w, v):
    A = SupportSet(pts)
    w = w[: len(A)]
    shifted = [wi + v[0] * p[0] + v[1] * p[1] + v[2] for wi, p in zip(w, A.points)]
    assert cells(subdivide(A, w)) == cells(subdivide(A, shifted))


@given(configs, weights)
def test_duality_for_random_weights(pts, w):
    A = SupportSet(pts)
    w = w[: len(A)]
    assert check_duality(subdivide(A, w), tropical_complex(A, w))


@given(st.lists(st.integers(-6, 6), min_size=2, max_size=7, unique=True))
def test_univariate_count_is_power_of_two(xs):
    A = SupportSet([(x,) for x in xs])
    assert len(enumerate_regular_subdivisions(A)) == 2 ** (len(xs) - 2)


def test_small_counts():
    assert len(enumerate_regular_subdivisions(SupportSet([(0,), (1,), (2,)]))) == 2
    assert len(enumerate_regular_subdivisions(LINE)) == 8


def test_six_point_census():
    subs = enumerate_regular_subdivisions(SIX)
    assert len(subs) == len({L.signature for L in subs})
    by_complex = census(SIX)
    assert len(by_complex) == 10
    assert () in by_complex  # the empty sonc-complex occurs


@pytest.mark.parametrize(
    "pts",
    [
        [(0, 0), (2, 0), (3, 0), (1, 1), (2, 1), (1, 2)],
        [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (0, 2)],
        [(0, 0), (2, 0), (0, 2), (1, 1), (2, 2)],
    ],
)
def test_enumeration_contains_every_sampled_subdivision(pts):
    # independent oracle: subdivisions induced by random integer weights
    A = SupportSet(pts)
    known = {L.signature for L in enumerate_regular_subdivisions(A)}
    rng = random.Random(7)
    seen = set()
    for _ in range(400):
        w = [rng.randint(-20, 20) for _ in pts]
        seen.add(subdivide(A, w).signature)
    assert seen <= known


@pytest.mark.parametrize("pts", [[(0, 0), (2, 0), (3, 0), (1, 1), (2, 1), (1, 2)], [(0, 0), (2, 0), (0, 2), (1, 1), (2, 2)]])
def test_witnesses_reproduce_their_subdivisions(pts):
    A = SupportSet(pts)
    for L in enumerate_regular_subdivisions(A):
        assert subdivide(A, L.witness).signature == L.signature
        assert is_regular(A, [c.indices for c in L.cells]) is not None


def test_is_regular_cases():
    assert list(is_regular(SIX, [frozenset(range(6))])) == [0] * 6
    assert is_regular(LINE, [frozenset({0, 1, 2}), frozenset({2, 3, 4})]) is not None
    with pytest.raises(InvalidSubdivision):
        # overlapping triangles
        is_regular(SIX, [frozenset({0, 1, 2, 3}), frozenset({0, 3, 4, 5}), frozenset({0, 1, 3, 5})])
    with pytest.raises(InvalidSubdivision):
        is_regular(LINE, [frozenset({0, 1, 2})])


def test_enumeration_limits():
    with pytest.raises(TooLarge):
        enumerate_regular_subdivisions(SupportSet([(i, j) for i in range(4) for j in range(3)]))
