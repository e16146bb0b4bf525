"""Deciding whether every nonnegative sum on a generic support is sonc.

For supports whose simplicial circuits are all full-dimensional the two
cones agree exactly when every sonc-complex has a single maximal cell.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .circuits import simplicial_circuits
from .geometry import SupportSet
from .subdivision import RegularSubdivision, SoncComplex, enumerate_regular_subdivisions, sonc_complex

EQUAL = "equal"
NOT_EQUAL = "not-equal"
PRECONDITION = "precondition-violated"


@dataclass(frozen=True)
class CensusEntry:
    complex: SoncComplex
    subdivisions: tuple[RegularSubdivision, ...]

    @property
    def signature(self) -> tuple[tuple[int, ...], ...]:
        return self.complex.signature


@dataclass(frozen=True)
class EqualityReport:
    generic: bool
    census: tuple[CensusEntry, ...]
    verdict: str
    symmetries: tuple[tuple[int, ...], ...]
    orbits: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def nonempty(self) -> list[CensusEntry]:
        return [e for e in self.census if not e.complex.is_empty]

    @property
    def nonempty_up_to_symmetry(self) -> int:
        return sum(1 for o in self.orbits if o)

    def to_json(self) -> dict:
        return {
            "generic": self.generic,
            "verdict": self.verdict,
            "complexes": len(self.census),
            "nonempty": len(self.nonempty),
            "nonempty_up_to_symmetry": self.nonempty_up_to_symmetry,
            "symmetries": len(self.symmetries),
            "census": [
                {
                    "generators": [list(g) for g in e.signature],
                    "single_cell": len(e.complex.generators) <= 1,
                    "subdivisions": [list(map(list, L.signature)) for L in e.subdivisions],
                    "witness": e.subdivisions[0].witness.to_json() if e.subdivisions[0].witness else None,
                }
                for e in self.census
            ],
        }


def is_generic(A: SupportSet) -> bool:
    return all(c.dim == A.dim for c in simplicial_circuits(A))


def sonc_census(A: SupportSet) -> tuple[CensusEntry, ...]:
    groups: dict[tuple, list] = {}
    cx: dict[tuple, SoncComplex] = {}
    for L in enumerate_regular_subdivisions(A):
        G = sonc_complex(L)
        groups.setdefault(G.signature, []).append(L)
        cx.setdefault(G.signature, G)
    keys = sorted(groups, key=lambda k: (len(k), k))
    return tuple(CensusEntry(cx[k], tuple(groups[k])) for k in keys)


def lattice_symmetries(A: SupportSet) -> list[tuple[int, ...]]:
    """Point permutations induced by affine unimodular maps preserving ``A``.

    Maps are taken in the intrinsic coordinates of ``Aff(A)``.
    """
    y = A.polytope.local
    N = len(A)
    k = A.dim
    if k == 0:
        return [(0,)]
    basis = [0]
    for i in range(1, N):
        _, dirs = _span([y[j] for j in basis + [i]])
        if len(dirs) == len(basis):
            basis.append(i)
        if len(basis) == k + 1:
            break
    lookup = {p: i for i, p in enumerate(y)}
    src = [linalg.sub(y[b], y[basis[0]]) for b in basis[1:]]
    out = set()
    for img in itertools.permutations(range(N), k + 1):
        dst = [linalg.sub(y[b], y[img[0]]) for b in img[1:]]
        # M src_j = dst_j for each j, i.e. M = D S^-1
        S = linalg.transpose(src)
        D = linalg.transpose(dst)
        Sinv = _inverse(S)
        if Sinv is None:
            continue
        M = [[sum((D[r][t] * Sinv[t][c] for t in range(k)), Fraction(0)) for c in range(k)] for r in range(k)]
        if any(v.denominator != 1 for row in M for v in row):
            continue
        if abs(linalg.det(M)) != 1:
            continue
        perm = []
        for p in y:
            q = linalg.sub(p, y[basis[0]])
            image = tuple(
                sum((M[r][c] * q[c] for c in range(k)), Fraction(0)) + y[img[0]][r] for r in range(k)
            )
            if image not in lookup:
                break
            perm.append(lookup[image])
        else:
            out.add(tuple(perm))
    return sorted(out)


def _span(pts):
    from .geometry import affine_span_basis

    return affine_span_basis(pts)


def _inverse(M):
    k = len(M)
    rows = [list(M[r]) + [Fraction(int(r == c)) for c in range(k)] for r in range(k)]
    R, piv = linalg.rref(rows)
    if piv[:k] != list(range(k)):
        return None
    return [row[k:] for row in R[:k]]


def _orbits(census, perms) -> tuple[tuple[tuple[int, ...], ...], ...]:
    seen = set()
    reps = []
    for e in census:
        sig = e.signature
        if sig in seen:
            continue
        orbit = {
            tuple(sorted(tuple(sorted(p[i] for i in g)) for g in sig)) for p in perms
        }
        seen |= orbit
        reps.append(sig)
    return tuple(reps)


def check_equality(A: SupportSet) -> EqualityReport:
    census = sonc_census(A)
    generic = is_generic(A)
    perms = lattice_symmetries(A)
    orbits = _orbits(census, perms)
    if not generic:
        verdict = PRECONDITION
    elif all(len(e.complex.generators) <= 1 for e in census):
        verdict = EQUAL
    else:
        verdict = NOT_EQUAL
    return EqualityReport(generic, census, verdict, tuple(perms), orbits)
