"""Support sets, Newton polytopes and their faces, all in exact arithmetic.

Ambient dimension is limited to three.  Hulls are computed in intrinsic
coordinates of the affine span, so lower-dimensional configurations sitting
in a bigger ambient space behave like full-dimensional ones.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import linalg
from .errors import AmbientDimTooLarge
from .linalg import Vector, as_fraction

MAX_AMBIENT = 3


def affine_span_basis(points: Sequence[Sequence]) -> tuple[Vector, list[Vector]]:
    """Base point and an exact basis of the direction space of ``Aff(points)``.

    The directions are the rows of a reduced echelon form, so each has a
    unit pivot; ``(3,0),(2,1),(1,2)`` gives the single direction ``(1,-1)``.
    """
    pts = [tuple(as_fraction(v) for v in p) for p in points]
    if not pts:
        raise ValueError("need at least one point")
    base = pts[0]
    diffs = [linalg.sub(p, base) for p in pts[1:]]
    if not diffs:
        return base, []
    r, piv = linalg.rref(diffs)
    return base, [tuple(row) for row in r[: len(piv)]]


class AffineChart:
    """Coordinates on the affine span of a point set."""

    def __init__(self, points: Sequence[Vector]):
        self.base, self.directions = affine_span_basis(points)
        self.dim = len(self.directions)
        self.ambient = len(self.base)
        self.pivots = []
        for d in self.directions:
            self.pivots.append(next(i for i, v in enumerate(d) if v != 0))

    def coords(self, p: Sequence[Fraction]) -> Vector | None:
        """Intrinsic coordinates of ``p``, or None when ``p`` is off the span."""
        diff = linalg.sub(p, self.base)
        lam = tuple(diff[c] for c in self.pivots)
        back = [Fraction(0)] * self.ambient
        for l, d in zip(lam, self.directions):
            if l:
                for i, v in enumerate(d):
                    back[i] += l * v
        if tuple(back) != diff:
            return None
        return lam

    def ambient_functional(self, eta: Sequence[Fraction]) -> Vector:
        """An ambient normal ``N`` with ``<N, p - base> = <eta, coords(p)>`` on the span."""
        if not self.directions:
            return tuple(Fraction(0) for _ in range(self.ambient))
        x = linalg.solve(self.directions, eta)
        assert x is not None
        return x


def _orient(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull_2d(pts: Sequence[Vector]) -> list[int]:
    """Indices of the strict hull vertices, counter-clockwise (monotone chain)."""
    order = sorted(range(len(pts)), key=lambda i: pts[i])
    if len(order) <= 2:
        return order

    def chain(seq):
        out: list[int] = []
        for i in seq:
            while len(out) >= 2 and _orient(pts[out[-2]], pts[out[-1]], pts[i]) <= 0:
                out.pop()
            out.append(i)
        return out

    lower = chain(order)
    upper = chain(reversed(order))
    return lower[:-1] + upper[:-1]


class Polytope:
    """Convex hull of a finite point set, with exact facet inequalities.

    ``facets`` holds ``(eta, offset)`` pairs in intrinsic coordinates with
    ``<eta, y> <= offset`` on the polytope.
    """

    def __init__(self, points: Iterable[Sequence]):
        self.points: list[Vector] = [tuple(as_fraction(v) for v in p) for p in points]
        if not self.points:
            raise ValueError("empty polytope")
        if len(self.points[0]) > MAX_AMBIENT:
            raise AmbientDimTooLarge(f"ambient dimension {len(self.points[0])} > {MAX_AMBIENT}")
        self.chart = AffineChart(self.points)
        self.dim = self.chart.dim
        self.local = [self.chart.coords(p) for p in self.points]
        self.facets: list[tuple[Vector, Fraction]] = self._facets()

    def _facets(self):
        k = self.dim
        y = self.local
        if k == 0:
            return []
        if k == 1:
            xs = [p[0] for p in y]
            return [((Fraction(1),), max(xs)), ((Fraction(-1),), -min(xs))]
        if k == 2:
            hull = _hull_2d(y)
            out = []
            for a, b in zip(hull, hull[1:] + hull[:1]):
                p, q = y[a], y[b]
                eta = (q[1] - p[1], p[0] - q[0])
                out.append((eta, linalg.dot(eta, p)))
            return out
        # k == 3: every facet is spanned by three affinely independent points
        seen = {}
        for a, b, c in itertools.combinations(range(len(y)), 3):
            u = linalg.sub(y[b], y[a])
            v = linalg.sub(y[c], y[a])
            eta = (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])
            if not any(eta):
                continue
            off = linalg.dot(eta, y[a])
            vals = [linalg.dot(eta, p) for p in y]
            if all(v <= off for v in vals):
                pass
            elif all(v >= off for v in vals):
                eta, off = tuple(-e for e in eta), -off
            else:
                continue
            key = frozenset(i for i, p in enumerate(y) if linalg.dot(eta, p) == off)
            if key not in seen:
                seen[key] = (eta, off)
        return list(seen.values())

    @cached_property
    def vertex_indices(self) -> tuple[int, ...]:
        """Indices of the extreme points."""
        if self.dim == 0:
            return (0,)
        if self.dim == 2:
            return tuple(sorted(_hull_2d(self.local)))
        out = []
        for i, p in enumerate(self.local):
            tight = [eta for eta, off in self.facets if linalg.dot(eta, p) == off]
            if tight and linalg.rank(tight) == self.dim:
                out.append(i)
        return tuple(out)

    def locate(self, p: Sequence) -> int:
        """-1 outside, 0 on the relative boundary, 1 in the relative interior."""
        y = self.chart.coords(tuple(as_fraction(v) for v in p))
        if y is None:
            return -1
        if self.dim == 0:
            return 1
        inside = True
        for eta, off in self.facets:
            v = linalg.dot(eta, y)
            if v > off:
                return -1
            if v == off:
                inside = False
        return 1 if inside else 0

    def contains(self, p: Sequence) -> bool:
        return self.locate(p) >= 0

    def in_relint(self, p: Sequence) -> bool:
        return self.locate(p) == 1

    def volume(self) -> Fraction:
        """Intrinsic volume up to the normalization of the chart (2-D: area)."""
        if self.dim == 2:
            h = _hull_2d(self.local)
            y = self.local
            s = Fraction(0)
            for a, b in zip(h, h[1:] + h[:1]):
                s += y[a][0] * y[b][1] - y[b][0] * y[a][1]
            return s / 2
        if self.dim == 1:
            xs = [p[0] for p in self.local]
            return max(xs) - min(xs)
        if self.dim == 0:
            return Fraction(1)
        raise NotImplementedError("volume only for dim <= 2")


@dataclass(frozen=True)
class Face:
    """A face of a Newton polytope.

    ``indices`` lists every point of the support on the face; ``vertices``
    the extreme ones.  ``normal``/``offset`` is a supporting functional that
    is maximized over the support exactly on ``indices``.
    """

    indices: tuple[int, ...]
    vertices: tuple[int, ...]
    normal: Vector
    offset: Fraction
    dim: int


@dataclass(frozen=True)
class SupportSet:
    """An ordered, finite set of distinct exponent vectors."""

    points: tuple[Vector, ...]

    def __init__(self, points: Iterable[Sequence]):
        pts = tuple(tuple(as_fraction(v) for v in p) for p in points)
        if not pts:
            raise ValueError("a support set needs at least one point")
        n = len(pts[0])
        if any(len(p) != n for p in pts):
            raise ValueError("all points need the same length")
        if len(set(pts)) != len(pts):
            raise ValueError("points must be pairwise distinct")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return len(self.points[0])

    @property
    def d(self) -> int:
        return len(self.points) - 1

    def __len__(self) -> int:
        return len(self.points)

    @cached_property
    def matrix(self) -> list[list[Fraction]]:
        """The lifted ``(1+n) x (1+d)`` matrix with columns ``(1, alpha)``."""
        rows = [[Fraction(1)] * len(self.points)]
        for i in range(self.n):
            rows.append([p[i] for p in self.points])
        return rows

    @cached_property
    def dim(self) -> int:
        return linalg.rank(self.matrix) - 1

    @property
    def codim(self) -> int:
        return self.d - self.dim

    @cached_property
    def polytope(self) -> Polytope:
        return Polytope(self.points)

    @cached_property
    def is_integral(self) -> bool:
        return all(v.denominator == 1 for p in self.points for v in p)

    def subset(self, idx: Iterable[int]) -> list[Vector]:
        return [self.points[i] for i in idx]

    def to_json(self) -> dict:
        return {"n": self.n, "points": [[str(v) for v in p] for p in self.points]}

    @classmethod
    def from_json(cls, data: dict) -> "SupportSet":
        pts = data["points"]
        for p in pts:
            for v in p:
                if isinstance(v, float):
                    raise ValueError(f"floats are not accepted in support sets: {v!r}")
        A = cls(pts)
        if "n" in data and int(data["n"]) != A.n:
            raise ValueError(f"declared n={data['n']} but points have length {A.n}")
        return A

    @classmethod
    def load(cls, path) -> "SupportSet":
        with open(path) as fh:
            data = json.load(fh)
        if "support" in data:
            data = data["support"]
        return cls.from_json(data)


def dims(A: SupportSet) -> tuple[int, int]:
    return A.dim, A.codim


def _check_ambient(A: SupportSet) -> None:
    if A.n > MAX_AMBIENT:
        raise AmbientDimTooLarge(f"n = {A.n} exceeds {MAX_AMBIENT}")


def newton_faces(A: SupportSet) -> list[Face]:
    """All nonempty faces of the Newton polytope, the polytope itself included.

    Sorted by dimension, then by index tuple.
    """
    _check_ambient(A)
    P = A.polytope
    chart = P.chart
    facet_sets = []
    for eta, off in P.facets:
        idx = frozenset(i for i, y in enumerate(P.local) if linalg.dot(eta, y) == off)
        facet_sets.append((idx, eta, off))

    # every proper face is an intersection of facets
    faces = {frozenset(range(len(A)))} | {f for f, _, _ in facet_sets}
    changed = True
    while changed:
        changed = False
        for s in list(faces):
            for f, _, _ in facet_sets:
                t = s & f
                if t and t not in faces:
                    faces.add(t)
                    changed = True
    out = []
    for s in faces:
        idx = tuple(sorted(s))
        tight = [k for k, (f, _, _) in enumerate(facet_sets) if s <= f]
        if len(s) == len(A):
            tight = []
        eta = [Fraction(0)] * P.dim
        off = Fraction(0)
        for k in tight:
            e, o = facet_sets[k][1], facet_sets[k][2]
            eta = [a + b for a, b in zip(eta, e)]
            off += o
        normal = chart.ambient_functional(eta)
        offset = off + linalg.dot(normal, chart.base)
        sub = Polytope(A.subset(idx))
        verts = tuple(idx[i] for i in sub.vertex_indices)
        out.append(Face(idx, verts, normal, offset, sub.dim))
    out.sort(key=lambda F: (F.dim, F.indices))
    return out


def relint_members(A: SupportSet, F: Face) -> list[int]:
    """Indices of support points in the relative interior of ``F``."""
    P = Polytope(A.subset(F.indices))
    return [i for i in F.indices if P.in_relint(A.points[i])]


def relint_points(A: SupportSet, idx: Iterable[int]) -> list[int]:
    """Support points in the relative interior of ``conv(A[idx])``."""
    idx = list(idx)
    P = Polytope(A.subset(idx))
    return [i for i in range(len(A)) if P.in_relint(A.points[i])]


def points_in(A: SupportSet, idx: Iterable[int]) -> frozenset[int]:
    """All support points of the (closed) hull of ``A[idx]``."""
    P = Polytope(A.subset(idx))
    return frozenset(i for i in range(len(A)) if P.contains(A.points[i]))
