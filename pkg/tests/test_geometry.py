from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from sonc.errors import AmbientDimTooLarge
from sonc.geometry import Polytope, SupportSet, affine_span_basis, dims, newton_faces, points_in, relint_points

SIX = SupportSet([(0, 0), (2, 0), (3, 0), (1, 1), (2, 1), (1, 2)])

points2d = st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=3, max_size=9, unique=True)


def test_dims_of_six_point_support():
    assert dims(SIX) == (2, 3)
    assert SIX.n == 2 and SIX.d == 5


def test_affine_span_of_collinear_points():
    base, dirs = affine_span_basis([(3, 0), (2, 1), (1, 2)])
    assert base == (3, 0) and dirs == [(1, -1)]


def test_support_validation():
    with pytest.raises(ValueError):
        SupportSet([(0, 0), (0, 0)])
    with pytest.raises(ValueError):
        SupportSet.from_json({"points": [[0.5, 1]]})
    with pytest.raises(AmbientDimTooLarge):
        newton_faces(SupportSet([(0, 0, 0, 0), (1, 0, 0, 0)]))


def test_json_round_trip():
    A = SupportSet([(0, 0), (Fraction(1, 2), 3)])
    assert SupportSet.from_json(A.to_json()) == A


def test_newton_faces_of_six_point_support():
    faces = newton_faces(SIX)
    by_dim = {}
    for F in faces:
        by_dim.setdefault(F.dim, []).append(F.indices)
    assert sorted(by_dim[0]) == [(0,), (2,), (5,)]
    assert sorted(by_dim[1]) == [(0, 1, 2), (0, 5), (2, 4, 5)]
    assert by_dim[2] == [tuple(range(6))]
    for F in faces:
        vals = [sum(a * b for a, b in zip(F.normal, p)) for p in SIX.points]
        assert {i for i, v in enumerate(vals) if v == F.offset} == set(F.indices)
        assert all(v <= F.offset for v in vals)


@given(points2d)
def test_hull_vertices_match_scipy(pts):
    P = Polytope(pts)
    if P.dim < 2:
        return
    ref = ConvexHull(pts)
    assert set(P.vertex_indices) == set(int(v) for v in ref.vertices)
    assert abs(float(P.volume()) * _area_scale(P) - ref.volume) < 1e-9


def _area_scale(P):
    # the chart may shear the plane; compare areas through the direction determinant
    (a, b), (c, d) = P.chart.directions
    return abs(a * d - b * c) ** -1 if (a * d - b * c) else 1


@given(points2d)
def test_relint_and_closure_consistent(pts):
    A = SupportSet(pts)
    inner = relint_points(A, range(len(A)))
    closed = points_in(A, range(len(A)))
    assert closed == frozenset(range(len(A)))
    verts = set(A.polytope.vertex_indices)
    assert not verts & set(inner) or A.dim == 0


def test_collinear_points_in_the_plane_are_one_dimensional():
    A = SupportSet([(0, 0), (1, 1), (2, 2), (3, 3)])
    assert A.dim == 1
    assert relint_points(A, range(4)) == [1, 2]
