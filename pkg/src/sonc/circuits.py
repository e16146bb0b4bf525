"""Circuits of a support set and the Reznick cone they generate."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import NotInteriorPoint, NotSimplicial
from .geometry import Polytope, SupportSet, affine_span_basis
from .linalg import Vector


@dataclass(frozen=True)
class Circuit:
    """A minimally supported kernel vector of the lifted matrix.

    ``kernel_vec`` has full length ``d+1`` with zeros off the support.
    Simplicial circuits are stored in barycentric form (``-1`` on the
    interior point); the others have first nonzero entry ``+1``.
    """

    support: tuple[int, ...]
    kernel_vec: Vector
    signature: tuple[int, int]
    simplicial: bool
    interior_index: int | None
    dim: int

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(i for i in self.support if i != self.interior_index)

    def integer_vector(self) -> tuple[int, ...]:
        """Primitive integer rescaling (positive factor), e.g. ``(1,1,1,-3)``."""
        return linalg.primitive_integer(self.kernel_vec)

    def restricted(self) -> Vector:
        return tuple(self.kernel_vec[i] for i in self.support)

    def __str__(self) -> str:
        return f"Circuit({list(self.support)}, {[str(v) for v in self.restricted()]})"


def _kernel_on(A: SupportSet, S: Sequence[int]) -> list[Vector]:
    cols = [[A.matrix[r][j] for j in S] for r in range(len(A.matrix))]
    return linalg.nullspace(cols)


def make_circuit(A: SupportSet, support: Sequence[int], vec: Sequence[Fraction]) -> Circuit:
    """Normalize a kernel vector supported on ``support`` into a Circuit."""
    support = tuple(sorted(support))
    full = [Fraction(0)] * len(A)
    for i, v in zip(support, vec):
        full[i] = Fraction(v)
    neg = [i for i in support if full[i] < 0]
    pos = [i for i in support if full[i] > 0]
    if len(pos) == 1 and len(neg) != 1:
        full = [-v for v in full]
        neg, pos = pos, neg
    simplicial = len(neg) == 1
    if simplicial:
        s = -full[neg[0]]
        interior = neg[0]
    else:
        s = full[support[0]]
        interior = None
    full = tuple(v / s for v in full)
    return Circuit(
        support=support,
        kernel_vec=full,
        signature=(len(neg), len(pos)),
        simplicial=simplicial,
        interior_index=interior,
        dim=len(support) - 2,
    )


def circuit_on(A: SupportSet, support: Sequence[int]) -> Circuit | None:
    """The circuit with exactly this support, or None if it is not one."""
    support = tuple(sorted(support))
    ker = _kernel_on(A, support)
    if len(ker) != 1 or any(v == 0 for v in ker[0]):
        return None
    return make_circuit(A, support, ker[0])


def enumerate_circuits(A: SupportSet) -> list[Circuit]:
    """All circuits, each once, ordered by support size then lexicographically."""
    r = A.dim + 1
    out = []
    for size in range(2, min(r + 1, len(A)) + 1):
        for S in itertools.combinations(range(len(A)), size):
            c = circuit_on(A, S)
            if c is not None:
                out.append(c)
    return out


def simplicial_circuits(A: SupportSet) -> list[Circuit]:
    return [c for c in enumerate_circuits(A) if c.simplicial]


def barycentric_vector(c: Circuit) -> Vector:
    if not c.simplicial:
        raise NotSimplicial(f"{c} has signature {c.signature}")
    return c.kernel_vec


def is_edge_generator(A: SupportSet, c: Circuit) -> bool:
    """True iff no other point of ``A`` lies in the hull of the circuit."""
    if not c.simplicial:
        raise NotSimplicial(f"{c} has signature {c.signature}")
    P = Polytope(A.subset(c.support))
    inside = {i for i in range(len(A)) if P.contains(A.points[i])}
    return inside == set(c.support)


@dataclass(frozen=True)
class ReznickCone:
    circuits: tuple[Circuit, ...]
    edge_generators: tuple[Circuit, ...]
    dim: int


def reznick_cone(A: SupportSet) -> ReznickCone:
    C = simplicial_circuits(A)
    gens = tuple(c for c in C if is_edge_generator(A, c))
    dim = linalg.rank([c.kernel_vec for c in C]) if C else 0
    return ReznickCone(tuple(C), gens, dim)


def minimal_circuits(A: SupportSet) -> list[Circuit]:
    """Simplicial circuits whose hull meets ``A`` only in the circuit itself."""
    return list(reznick_cone(A).edge_generators)


def simplicial_circuit_through(A: SupportSet, interior: int, vertex: int) -> Circuit:
    """A simplicial circuit with ``interior`` as its interior point and ``vertex`` among its vertices.

    Walk from ``vertex`` through ``interior`` until the boundary of the Newton
    polytope, then pick a simplex of support points on the smallest face
    containing the exit point that has the exit point in its relative
    interior.  The exit point, the interior point and ``vertex`` are
    collinear, so the resulting point set is a simplicial circuit.
    """
    if interior == vertex:
        raise ValueError("interior and vertex must differ")
    P = A.polytope
    a0, a1 = A.points[interior], A.points[vertex]
    if not P.in_relint(a0):
        raise NotInteriorPoint(f"point {interior} is not in the relative interior of N(A)")
    y0 = P.chart.coords(a0)
    y1 = P.chart.coords(a1)
    v = linalg.sub(y0, y1)
    step = None
    for eta, off in P.facets:
        ev = linalg.dot(eta, v)
        if ev > 0:
            s = (off - linalg.dot(eta, y0)) / ev
            step = s if step is None or s < step else step
    assert step is not None and step > 0
    exit_local = linalg.add(y0, linalg.scale(step, v))
    tight = [(eta, off) for eta, off in P.facets if linalg.dot(eta, exit_local) == off]
    face = [
        i for i, y in enumerate(P.local) if all(linalg.dot(eta, y) == off for eta, off in tight)
    ]
    # smallest affinely independent subset of the face holding the exit point in its relint
    for size in range(1, len(face) + 1):
        for S in itertools.combinations(face, size):
            pts = [P.local[i] for i in S]
            _, dirs = affine_span_basis(pts)
            if len(dirs) != size - 1:
                continue
            rows = [[Fraction(1)] * size] + [[p[k] for p in pts] for k in range(P.dim)]
            beta = linalg.solve(rows, (Fraction(1),) + exit_local)
            if beta is not None and all(b > 0 for b in beta):
                c = circuit_on(A, (interior, vertex) + S)
                if c is not None and c.simplicial and c.interior_index == interior:
                    return c
    raise AssertionError("no simplicial circuit found; the construction should not fail")
