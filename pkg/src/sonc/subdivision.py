"""Regular subdivisions, sonc-complexes and tropical complexes.

Everything runs in intrinsic coordinates of ``Aff(A)``, so a collinear set
in the plane subdivides like a set on the line.  Cells are geometric: the
index set of a cell is every point of ``A`` in its hull, whether or not the
point was lifted onto the upper hull.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import linalg
from .errors import AmbientDimTooLarge, InvalidSubdivision, TooLarge
from .geometry import MAX_AMBIENT, Polytope, SupportSet, newton_faces, points_in
from .linalg import Vector, as_fraction
from .lp import feasible_point

MAX_ENUM_POINTS = 10


@dataclass(frozen=True)
class WeightVector:
    values: tuple[Fraction, ...]

    def __init__(self, values: Iterable):
        object.__setattr__(self, "values", tuple(as_fraction(v) for v in values))

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def to_json(self) -> list[str]:
        return [str(v) for v in self.values]


def _weights(A: SupportSet, w) -> WeightVector:
    w = w if isinstance(w, WeightVector) else WeightVector(w)
    if len(w) != len(A):
        raise ValueError(f"expected {len(A)} weights, got {len(w)}")
    return w


@dataclass(frozen=True)
class Cell:
    """A maximal cell.  ``lifted`` are the points on the upper hull."""

    indices: frozenset[int]
    vertices: tuple[int, ...]
    lifted: frozenset[int] = frozenset()

    @property
    def key(self) -> tuple[int, ...]:
        return tuple(sorted(self.indices))


@dataclass(frozen=True)
class RegularSubdivision:
    support: SupportSet
    cells: tuple[Cell, ...]
    witness: WeightVector | None = None

    @property
    def signature(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(c.key for c in self.cells))

    @cached_property
    def faces(self) -> frozenset[frozenset[int]]:
        """Every face of every cell, as geometric index sets."""
        out = set()
        for c in self.cells:
            out |= _cell_faces(self.support, c.indices)
        return frozenset(out)

    def to_json(self) -> dict:
        data = {"cells": [list(k) for k in self.signature]}
        if self.witness is not None:
            data["witness"] = self.witness.to_json()
        return data


def _cell_faces(A: SupportSet, idx: Iterable[int]) -> set[frozenset[int]]:
    idx = sorted(idx)
    sub = SupportSet(A.subset(idx))
    return {frozenset(idx[i] for i in F.indices) for F in newton_faces(sub)}


def _local(A: SupportSet) -> list[Vector]:
    return A.polytope.local


def _hyperplane(pts: Sequence[Vector], vals: Sequence[Fraction]) -> tuple[Vector, Fraction] | None:
    """Affine ``h(y) = <a, y> + b`` through lifted points, or None if degenerate."""
    k = len(pts[0])
    rows = [list(p) + [Fraction(1)] for p in pts]
    if linalg.rank(rows) < k + 1:
        return None
    sol = linalg.solve(rows, vals)
    return tuple(sol[:k]), sol[k]


def subdivide(A: SupportSet, w) -> RegularSubdivision:
    """Regular subdivision induced by the upper hull of ``{(alpha_i, w_i)}``."""
    if A.n > MAX_AMBIENT:
        raise AmbientDimTooLarge(f"n = {A.n} exceeds {MAX_AMBIENT}")
    w = _weights(A, w)
    y = _local(A)
    k = A.dim
    N = len(A)
    if k == 0:
        return RegularSubdivision(A, (Cell(frozenset([0]), (0,), frozenset([0])),), w)
    seen: dict[tuple, Cell] = {}
    for S in itertools.combinations(range(N), k + 1):
        hp = _hyperplane([y[i] for i in S], [w[i] for i in S])
        if hp is None:
            continue
        a, b = hp
        vals = [linalg.dot(a, y[i]) + b for i in range(N)]
        if any(w[i] > vals[i] for i in range(N)):
            continue
        if (a, b) in seen:
            continue
        lifted = frozenset(i for i in range(N) if w[i] == vals[i])
        cell_pts = points_in(A, lifted)
        P = Polytope(A.subset(sorted(lifted)))
        lifted_sorted = sorted(lifted)
        verts = tuple(sorted(lifted_sorted[i] for i in P.vertex_indices))
        seen[(a, b)] = Cell(frozenset(cell_pts), verts, lifted)
    cells = tuple(sorted(seen.values(), key=lambda c: c.key))
    return RegularSubdivision(A, cells, w)


# ---------------------------------------------------------------- sonc-complex


@dataclass(frozen=True)
class SoncComplex:
    """Faces of the subdivision lying in a cell with a relative interior point of ``A``.

    ``generators`` are the inclusion-maximal such cells; ``cells`` is their
    closure under faces.  Both are sets of geometric index sets.
    """

    support: SupportSet
    cells: frozenset[frozenset[int]]
    generators: frozenset[frozenset[int]]

    @property
    def is_empty(self) -> bool:
        return not self.cells

    @property
    def signature(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(tuple(sorted(g)) for g in self.generators))

    @property
    def dim(self) -> int:
        if not self.generators:
            return -1
        return max(Polytope(self.support.subset(sorted(g))).dim for g in self.generators)


def _has_relint_point(A: SupportSet, face: frozenset[int]) -> bool:
    P = Polytope(A.subset(sorted(face)))
    if P.dim == 0:
        return False
    return any(P.in_relint(A.points[i]) for i in face)


def sonc_complex(L: RegularSubdivision) -> SoncComplex:
    A = L.support
    gens = [F for F in L.faces if _has_relint_point(A, F)]
    maximal = frozenset(F for F in gens if not any(F < G for G in gens))
    cells = set()
    for G in maximal:
        cells |= _cell_faces(A, G)
    return SoncComplex(A, frozenset(cells), maximal)


# ------------------------------------------------------------ tropical complex


@dataclass(frozen=True)
class TropicalCell:
    """The cell ``mu_I`` where exactly the terms in ``I`` attain the maximum.

    ``vertices`` are the tropical vertices in its closure, ``rays`` generate
    its recession cone modulo ``lineality``.
    """

    indicator: frozenset[int]
    dim: int
    vertices: tuple[Vector, ...]
    rays: tuple[Vector, ...] = ()
    lineality: tuple[Vector, ...] = ()


@dataclass(frozen=True)
class TropicalComplex:
    support: SupportSet
    weights: WeightVector
    cells: tuple[TropicalCell, ...]
    vertices: tuple[tuple[frozenset[int], Vector], ...]

    def theta(self, x: Sequence) -> Fraction:
        x = tuple(as_fraction(v) for v in x)
        return max(wi + linalg.dot(x, p) for wi, p in zip(self.weights, self.support.points))

    def indicator(self, x: Sequence) -> frozenset[int]:
        x = tuple(as_fraction(v) for v in x)
        vals = [wi + linalg.dot(x, p) for wi, p in zip(self.weights, self.support.points)]
        m = max(vals)
        return frozenset(i for i, v in enumerate(vals) if v == m)


def tropical_vertex(A: SupportSet, w, lifted: Iterable[int]) -> Vector | None:
    """Solve ``w_i + <x, alpha_i>`` equal over ``lifted``; one particular solution."""
    w = _weights(A, w)
    idx = sorted(lifted)
    i0 = idx[0]
    rows = [linalg.sub(A.points[i], A.points[i0]) for i in idx[1:]]
    rhs = [w[i0] - w[i] for i in idx[1:]]
    if not rows:
        return tuple(Fraction(0) for _ in range(A.n))
    return linalg.solve(rows, rhs)


def tropical_complex(A: SupportSet, w) -> TropicalComplex:
    if A.n > MAX_AMBIENT:
        raise AmbientDimTooLarge(f"n = {A.n} exceeds {MAX_AMBIENT}")
    w = _weights(A, w)
    L = subdivide(A, w)
    P = A.polytope
    chart = P.chart
    if chart.directions:
        lineality = tuple(linalg.nullspace(chart.directions))
    else:
        lineality = tuple(linalg.nullspace([], ncols=A.n))
    top_vertices = []
    for c in L.cells:
        x = tropical_vertex(A, w, c.lifted)
        assert x is not None
        top_vertices.append((c.lifted, x))

    # outer normals of N(A) in ambient form, for recession cones
    outer = []
    for eta, off in P.facets:
        idx = frozenset(i for i, yy in enumerate(P.local) if linalg.dot(eta, yy) == off)
        outer.append((idx, chart.ambient_functional(eta)))

    cells = []
    for F in sorted(L.faces, key=lambda s: (-len(s), sorted(s))):
        owners = [(c, x) for c, (lf, x) in zip(L.cells, top_vertices) if F <= c.indices]
        indicator = frozenset().union(*(c.lifted & F for c, _ in owners))
        fdim = Polytope(A.subset(sorted(F))).dim
        rays = tuple(nrm for idx, nrm in outer if F <= idx)
        verts = tuple(sorted({x for _, x in owners}))
        cells.append(TropicalCell(indicator, A.n - fdim, verts, rays, lineality))
    cells.sort(key=lambda c: (c.dim, sorted(c.indicator)))
    return TropicalComplex(A, w, tuple(cells), tuple(top_vertices))


def check_duality(L: RegularSubdivision, M: TropicalComplex) -> bool:
    """Indicator sets match the cells of ``L`` one to one, with inclusion reversed."""
    A = L.support
    if M.support != A:
        return False
    faces = L.faces
    closure = {}
    for c in M.cells:
        G = points_in(A, c.indicator)
        if G not in faces or G in closure.values():
            return False
        fdim = Polytope(A.subset(sorted(G))).dim
        if c.dim != A.n - fdim:
            return False
        closure[c.indicator] = G
    if set(closure.values()) != set(faces):
        return False
    # mu_J inside mu_I iff I inside J, which must match face inclusion
    for I, J in itertools.permutations(closure, 2):
        if (I <= J) != (closure[I] <= closure[J]):
            return False
    # every tropical vertex must attain the maximum exactly on its indicator
    for lifted, x in M.vertices:
        if M.indicator(x) != lifted:
            return False
    top = {c.indices for c in L.cells}
    return {points_in(A, lf) for lf, _ in M.vertices} == top


# --------------------------------------------------------------- regularity


def _validate(A: SupportSet, cells: Sequence[frozenset[int]]) -> None:
    k = A.dim
    if k > 2:
        return
    total = A.polytope.volume()
    vol = Fraction(0)
    for c in cells:
        if points_in(A, c) != c:
            raise InvalidSubdivision(f"cell {sorted(c)} is not all of A inside its hull")
        P = Polytope(A.subset(sorted(c)))
        if P.dim != k:
            raise InvalidSubdivision(f"cell {sorted(c)} is not full-dimensional")
        vol += _local_volume(A, c)
    for c1, c2 in itertools.combinations(cells, 2):
        if not _compatible(A, c1, c2):
            raise InvalidSubdivision(f"cells {sorted(c1)} and {sorted(c2)} do not meet face to face")
    if vol != total:
        raise InvalidSubdivision("cells do not cover the Newton polytope")


def _local_volume(A: SupportSet, idx) -> Fraction:
    y = _local(A)
    pts = [y[i] for i in sorted(idx)]
    return Polytope(pts).volume() if len(pts[0]) else Fraction(1)


def is_regular(A: SupportSet, cells: Iterable[Iterable[int]], validate: bool = True) -> WeightVector | None:
    """An exact weight vector inducing exactly these cells, or None.

    For each cell the lift ``h`` is written through an affine basis of its
    vertices, so the LP only has the weights as unknowns: vertices lie on
    ``h``, other points of the cell on or below it, and points outside the
    cell at least one unit below it.
    """
    cells = [frozenset(c) for c in cells]
    if validate:
        _validate(A, cells)
    y = _local(A)
    N = len(A)
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for c in cells:
        idx = sorted(c)
        verts = [idx[i] for i in Polytope(A.subset(idx)).vertex_indices]
        basis = [verts[i] for i in _affine_basis([y[v] for v in verts])]
        lifts = [list(y[b]) + [Fraction(1)] for b in basis]
        cols = linalg.transpose(lifts)
        for p in range(N):
            # h(p) = sum_j lam_j w_{basis_j} with barycentric lam
            lam = linalg.solve(cols, list(y[p]) + [Fraction(1)])
            row = [Fraction(0)] * N
            for b, l in zip(basis, lam):
                row[b] += l
            if p in basis:
                continue
            if p in verts:
                row[p] -= 1
                A_eq.append(row)
                b_eq.append(Fraction(0))
            else:
                # w_p - h(p) <= 0 inside, <= -1 outside
                row = [-v for v in row]
                row[p] += 1
                A_ub.append(row)
                b_ub.append(Fraction(0) if p in c else Fraction(-1))
    for p in _affine_basis(y):
        row = [Fraction(0)] * N
        row[p] = Fraction(1)
        A_eq.append(row)
        b_eq.append(Fraction(0))
    x = feasible_point(A_ub, b_ub, A_eq, b_eq, nvar=N, free=range(N))
    if x is None:
        return None
    den = 1
    for v in x:
        den = linalg.lcm(den, v.denominator)
    return WeightVector(v * den for v in x)


def _affine_basis(y: Sequence[Vector]) -> list[int]:
    out = [0]
    for i in range(1, len(y)):
        trial = out + [i]
        _, dirs = _dirs([y[j] for j in trial])
        if len(dirs) == len(trial) - 1:
            out = trial
    return out


def _dirs(pts):
    from .geometry import affine_span_basis

    return affine_span_basis(pts)


# -------------------------------------------------------------- enumeration


def _ccw_vertices(y: Sequence[Vector], idx: Sequence[int]) -> list[int]:
    from .geometry import _hull_2d

    pts = [y[i] for i in idx]
    return [idx[i] for i in _hull_2d(pts)]


def _compatible(A: SupportSet, c1: frozenset[int], c2: frozenset[int]) -> bool:
    """Interiors disjoint and the intersection a common face (possibly empty)."""
    y = _local(A)
    k = A.dim
    if k == 1:
        a = [y[i][0] for i in c1]
        b = [y[i][0] for i in c2]
        lo1, hi1, lo2, hi2 = min(a), max(a), min(b), max(b)
        return hi1 <= lo2 or hi2 <= lo1
    P = Polytope([y[i] for i in sorted(c1)])
    Q = Polytope([y[i] for i in sorted(c2)])
    axes = [eta for eta, _ in P.facets] + [eta for eta, _ in Q.facets]
    pts1 = [y[i] for i in c1]
    pts2 = [y[i] for i in c2]
    for eta in axes:
        v1 = [linalg.dot(eta, p) for p in pts1]
        v2 = [linalg.dot(eta, p) for p in pts2]
        if max(v1) <= min(v2):
            s, lo_side, hi_side = max(v1), c1, c2
        elif max(v2) <= min(v1):
            s, lo_side, hi_side = max(v2), c2, c1
        else:
            continue
        # faces cut out by the separating line
        f1 = frozenset(i for i in lo_side if linalg.dot(eta, y[i]) == s)
        f2 = frozenset(i for i in hi_side if linalg.dot(eta, y[i]) == s)
        if not f1 or not f2:
            return True
        return _segment_meet_ok(y, f1, f2)
    return False


def _segment_meet_ok(y, f1: frozenset[int], f2: frozenset[int]) -> bool:
    """Faces on a common line meet in a common face of both."""
    pts = [y[i] for i in f1 | f2]
    base, dirs = _dirs(pts)
    if not dirs:
        return f1 == f2
    d = dirs[0]

    def t(i):
        return linalg.dot(linalg.sub(y[i], base), d)

    a = sorted(t(i) for i in f1)
    b = sorted(t(i) for i in f2)
    lo, hi = max(a[0], b[0]), min(a[-1], b[-1])
    if lo > hi:
        return True
    if lo == hi:
        # a single point: must be an endpoint of both
        return lo in (a[0], a[-1]) and lo in (b[0], b[-1])
    return a[0] == b[0] and a[-1] == b[-1]


def _candidate_cells(A: SupportSet) -> list[frozenset[int]]:
    y = _local(A)
    N = len(A)
    out = set()
    for size in range(3, N + 1):
        for S in itertools.combinations(range(N), size):
            P = Polytope([y[i] for i in S])
            if P.dim != 2 or len(P.vertex_indices) != size:
                continue
            cell = points_in(A, S)
            # the vertex set of the geometric cell must be S itself
            out.add(cell)
    return sorted(out, key=lambda c: sorted(c))


def _enumerate_1d(A: SupportSet) -> list[RegularSubdivision]:
    y = [p[0] for p in _local(A)]
    order = sorted(range(len(A)), key=lambda i: y[i])
    interior = order[1:-1]
    out = []
    for r in range(len(interior) + 1):
        for B in itertools.combinations(interior, r):
            w = [-sum((abs(y[i] - y[b]) for b in B), Fraction(0)) for i in range(len(A))]
            L = subdivide(A, w)
            out.append(L)
    return out


def _enumerate_2d(A: SupportSet) -> list[frozenset[frozenset[int]]]:
    y = _local(A)
    P = A.polytope
    boundary_facets = [
        frozenset(i for i, yy in enumerate(P.local) if linalg.dot(eta, yy) == off) for eta, off in P.facets
    ]

    def on_boundary(u, v):
        return any(u in F and v in F for F in boundary_facets)

    cands = _candidate_cells(A)
    edges_of = {}
    by_edge: dict[tuple[int, int], list[frozenset[int]]] = {}
    for c in cands:
        ring = _ccw_vertices(y, sorted(c))
        es = [(ring[i], ring[(i + 1) % len(ring)]) for i in range(len(ring))]
        edges_of[c] = es
        for e in es:
            by_edge.setdefault(e, []).append(c)

    total = P.volume()
    vol = {c: Polytope([y[i] for i in sorted(c)]).volume() for c in cands}

    # the first cell holds the boundary piece leaving the lex-smallest vertex ccw
    ring = _ccw_vertices(y, list(range(len(A))))
    v0 = min(ring, key=lambda i: y[i])
    nxt = ring[(ring.index(v0) + 1) % len(ring)]
    hull_edge = next(F for F in boundary_facets if v0 in F and nxt in F)
    starts = [c for c in cands if any(u == v0 and v in hull_edge for u, v in edges_of[c])]

    results = []

    def grow(chosen: list[frozenset[int]], area: Fraction):
        present = set()
        for c in chosen:
            present.update(edges_of[c])
        frontier = sorted(
            (u, v) for c in chosen for u, v in edges_of[c] if (v, u) not in present and not on_boundary(u, v)
        )
        if not frontier:
            if area == total:
                results.append(frozenset(chosen))
            return
        u, v = frontier[0]
        for c in by_edge.get((v, u), []):
            if area + vol[c] > total:
                continue
            if all(_compatible(A, c, o) for o in chosen):
                grow(chosen + [c], area + vol[c])

    for c in starts:
        grow([c], vol[c])
    return sorted(set(results), key=lambda s: sorted(sorted(c) for c in s))


def enumerate_regular_subdivisions(A: SupportSet) -> list[RegularSubdivision]:
    """Every regular subdivision of ``N(A)`` once, each with an exact witness."""
    if A.n > 2 or len(A) > MAX_ENUM_POINTS:
        raise TooLarge(f"enumeration needs n <= 2 and at most {MAX_ENUM_POINTS} points")
    k = A.dim
    if k == 0:
        return [subdivide(A, [0] * len(A))]
    if k == 1:
        out = _enumerate_1d(A)
    else:
        out = []
        for cells in _enumerate_2d(A):
            w = is_regular(A, cells, validate=False)
            if w is None:
                continue
            L = subdivide(A, w)
            assert {c.indices for c in L.cells} == set(cells), "witness does not reproduce the cells"
            out.append(L)
    out.sort(key=lambda L: (len(L.cells), L.signature))
    return out


def census(A: SupportSet) -> dict[tuple, list[RegularSubdivision]]:
    """Group the regular subdivisions by the sonc-complex they induce."""
    groups: dict[tuple, list[RegularSubdivision]] = {}
    for L in enumerate_regular_subdivisions(A):
        groups.setdefault(sonc_complex(L).signature, []).append(L)
    return dict(sorted(groups.items(), key=lambda kv: (len(kv[0]), kv[0])))
