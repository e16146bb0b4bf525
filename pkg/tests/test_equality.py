import random

import pytest

from sonc.equality import EQUAL, NOT_EQUAL, PRECONDITION, check_equality, is_generic, lattice_symmetries
from sonc.errors import TooLarge
from sonc.geometry import SupportSet

EQ = [(0, 0), (0, 5), (1, 2), (1, 3), (5, 0), (5, 5)]
SIX = [(0, 0), (2, 0), (3, 0), (1, 1), (2, 1), (1, 2)]


def test_three_points_on_a_line():
    assert check_equality(SupportSet([(0,), (1,), (2,)])).verdict == EQUAL


def test_generic_six_point_configuration():
    rep = check_equality(SupportSet(EQ))
    assert rep.generic and rep.verdict == EQUAL
    assert all(len(e.complex.generators) == 1 for e in rep.nonempty)
    assert len(rep.census) == 10
    assert rep.nonempty_up_to_symmetry == 5
    data = rep.to_json()
    assert data["verdict"] == EQUAL and len(data["census"]) == 10


def test_non_generic_support():
    A = SupportSet(SIX)
    assert not is_generic(A)
    assert check_equality(A).verdict == PRECONDITION


def test_collinear_interior_points_violate_genericity():
    A = SupportSet([(0, 0), (3, 0), (0, 3), (1, 1), (3, 3), (2, 2)])
    assert check_equality(A).verdict == PRECONDITION


def test_interior_points_split_by_a_diagonal():
    # a subdivision can put the two interior points in different cells
    rep = check_equality(SupportSet([(0, 0), (4, 0), (0, 4), (4, 4), (1, 2), (2, 3)]))
    assert rep.generic and rep.verdict == NOT_EQUAL
    assert any(len(e.complex.generators) > 1 for e in rep.census)


def test_symmetries_of_square_grid():
    A = SupportSet([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert len(lattice_symmetries(A)) == 8


def _unimodular_image(pts, seed):
    rng = random.Random(seed)
    M = rng.choice([((1, 1), (0, 1)), ((0, 1), (1, 0)), ((1, 0), (2, 1)), ((-1, 0), (0, 1)), ((2, 1), (1, 1))])
    b = (rng.randint(-3, 3), rng.randint(-3, 3))
    out = [(M[0][0] * x + M[0][1] * y + b[0], M[1][0] * x + M[1][1] * y + b[1]) for x, y in pts]
    rng.shuffle(out)
    return out


@pytest.mark.parametrize("seed", range(3))
def test_verdict_invariant_under_unimodular_maps_and_relabeling(seed):
    ref = check_equality(SupportSet(EQ))
    img = check_equality(SupportSet(_unimodular_image(EQ, seed)))
    assert img.verdict == ref.verdict
    assert len(img.census) == len(ref.census)
    assert img.nonempty_up_to_symmetry == ref.nonempty_up_to_symmetry
    assert check_equality(SupportSet(_unimodular_image(SIX, seed))).verdict == PRECONDITION


def test_too_large():
    with pytest.raises(TooLarge):
        check_equality(SupportSet([(i, j) for i in range(4) for j in range(3)]))
