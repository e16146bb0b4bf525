"""Lambda-discriminant charts, exact samples and vanishing checks.

A chart for a regular subdivision assigns every minimal simplicial circuit
to the first top cell containing it and gives each top cell a toric point
``z_j``.  Points of cells sharing a face must agree on that face's
directions: ``z_i^u = z_j^u``.  Samples are drawn exactly by writing
``log z`` in an integral basis of the solution space of those relations,
so ``z`` is a product of integral powers of random positive rationals and
the relations hold identically.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg
from .circuits import Circuit, minimal_circuits
from .errors import CircuitNotInCell, RelationViolated
from .expsum import (
    Agiform,
    ExponentialSum,
    GridConfig,
    SoncDecomposition,
    assemble,
    check_nonneg_numeric,
    monomial,
    toric_point,
)
from .geometry import SupportSet, affine_span_basis
from .linalg import Vector, as_fraction
from .subdivision import (
    RegularSubdivision,
    TropicalComplex,
    is_regular,
    subdivide,
    tropical_complex,
)


@dataclass(frozen=True)
class Relation:
    pair: tuple[int, int]
    u: tuple[int, ...]


@dataclass(frozen=True)
class LambdaChart:
    support: SupportSet
    subdivision: RegularSubdivision
    circuits: tuple[Circuit, ...]
    circuit_cell: tuple[int, ...]
    covered: frozenset[int]
    monomials: tuple[int, ...]
    relations: tuple[Relation, ...]

    @property
    def n_cells(self) -> int:
        return len(self.subdivision.cells)

    def circuits_in(self, j: int) -> list[int]:
        return [k for k, cj in enumerate(self.circuit_cell) if cj == j]

    def log_basis(self) -> list[list[Vector]]:
        """Integral basis of ``{(X_1..X_k) : <X_i - X_j, u> = 0}``, per cell blocks."""
        n = self.support.n
        k = self.n_cells
        rows = []
        for r in self.relations:
            i, j = r.pair
            row = [Fraction(0)] * (k * n)
            for c in range(n):
                row[i * n + c] += r.u[c]
                row[j * n + c] -= r.u[c]
            rows.append(row)
        basis = linalg.nullspace(rows, ncols=k * n) if rows else linalg.nullspace([], ncols=k * n)
        out = []
        for b in basis:
            ints = linalg.primitive_integer(b)
            out.append([tuple(Fraction(v) for v in ints[j * n : (j + 1) * n]) for j in range(k)])
        return out

    def to_json(self) -> dict:
        return {
            "cells": [list(c.key) for c in self.subdivision.cells],
            "circuits": [
                {"support": list(c.support), "vector": list(c.integer_vector()), "cell": j}
                for c, j in zip(self.circuits, self.circuit_cell)
            ],
            "monomials": list(self.monomials),
            "relations": [{"pair": list(r.pair), "u": list(r.u)} for r in self.relations],
        }


def build_chart(A: SupportSet, L: RegularSubdivision) -> LambdaChart:
    cells = L.cells
    circuits, owner = [], []
    for c in minimal_circuits(A):
        j = next((j for j, cell in enumerate(cells) if set(c.support) <= cell.indices), None)
        if j is not None:
            circuits.append(c)
            owner.append(j)
    covered = frozenset(i for c in circuits for i in c.support)
    monos = tuple(i for i in range(len(A)) if i not in covered)
    rels = []
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            common = sorted(cells[i].indices & cells[j].indices)
            if len(common) < 2:
                continue
            _, dirs = affine_span_basis(A.subset(common))
            for d in dirs:
                rels.append(Relation((i, j), linalg.primitive_integer(d)))
    return LambdaChart(A, L, tuple(circuits), tuple(owner), covered, monos, tuple(rels))


@dataclass(frozen=True)
class HKSample:
    chart: LambdaChart
    t: tuple[Fraction, ...]
    z_cells: tuple[Vector, ...]
    monomial_coeffs: tuple[Fraction, ...]
    a: tuple[Fraction, ...]

    def to_json(self) -> dict:
        return {
            "t": [str(v) for v in self.t],
            "z": [[str(v) for v in z] for z in self.z_cells],
            "monomials": [str(v) for v in self.monomial_coeffs],
            "a": [str(v) for v in self.a],
        }


def _zpow(z: Vector, u: Sequence[int]) -> Fraction:
    return monomial(z, u)


def hk_sample(
    chart: LambdaChart,
    t: Sequence,
    z_cells: Sequence[Sequence],
    monomials: Sequence = (),
) -> HKSample:
    """Evaluate the Horn-Kapranov-type map at exact parameters."""
    A = chart.support
    t = tuple(as_fraction(v) for v in t)
    if len(t) != len(chart.circuits):
        raise ValueError(f"expected {len(chart.circuits)} circuit scales, got {len(t)}")
    if len(z_cells) == 1 and chart.n_cells > 1:
        z_cells = list(z_cells) * chart.n_cells
    z = tuple(toric_point(v) for v in z_cells)
    if len(z) != chart.n_cells:
        raise ValueError(f"expected {chart.n_cells} toric points, got {len(z)}")
    mono = tuple(as_fraction(v) for v in monomials) or tuple(Fraction(0) for _ in chart.monomials)
    if len(mono) != len(chart.monomials):
        raise ValueError(f"expected {len(chart.monomials)} monomial coefficients")
    for r in chart.relations:
        i, j = r.pair
        if _zpow(z[i], r.u) != _zpow(z[j], r.u):
            raise RelationViolated(r.pair, r.u)
    a = [Fraction(0)] * len(A)
    for tc, c, j in zip(t, chart.circuits, chart.circuit_cell):
        if not tc:
            continue
        vec = c.integer_vector()
        for i in c.support:
            a[i] += tc * vec[i] / monomial(z[j], A.points[i])
    for i, s in zip(chart.monomials, mono):
        a[i] += s
    return HKSample(chart, t, z, mono, tuple(a))


def _rand_rational(rng: random.Random, lo: int = 1, hi: int = 5) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(lo, hi))


def random_sample(chart: LambdaChart, rng: random.Random) -> HKSample:
    """Exact random sample with positive scales and relations satisfied."""
    n = chart.support.n
    basis = chart.log_basis()
    s = [_rand_rational(rng) for _ in basis]
    z = []
    for j in range(chart.n_cells):
        zj = []
        for c in range(n):
            v = Fraction(1)
            for sb, B in zip(s, basis):
                e = int(B[j][c])
                if e:
                    v *= sb**e
            zj.append(v)
        z.append(tuple(zj))
    t = [_rand_rational(rng) for _ in chart.circuits]
    mono = [_rand_rational(rng) for _ in chart.monomials]
    return hk_sample(chart, t, z, mono)


# ------------------------------------------------------- implicit polynomials

_TERM = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*((?:a\d+(?:\^\d+)?\s*\*?\s*)*)")


@dataclass(frozen=True)
class ImplicitPolynomial:
    """Integer polynomial in the coefficients ``a_0 .. a_d``."""

    name: str
    terms: tuple[tuple[int, tuple[tuple[int, int], ...]], ...]

    @classmethod
    def parse(cls, name: str, text: str) -> "ImplicitPolynomial":
        """Read forms like ``-a2^2*a3^4 + 4*a0*a1*a4^4``."""
        src = text.replace(" ", "")
        terms = []
        pos = 0
        while pos < len(src):
            m = _TERM.match(src, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse {text!r} at {src[pos:]!r}")
            sign, num, mons = m.groups()
            coef = int(num) if num else 1
            if sign == "-":
                coef = -coef
            powers: dict[int, int] = {}
            for var, exp in re.findall(r"a(\d+)(?:\^(\d+))?", mons):
                powers[int(var)] = powers.get(int(var), 0) + (int(exp) if exp else 1)
            if not num and not powers:
                raise ValueError(f"empty term in {text!r}")
            terms.append((coef, tuple(sorted(powers.items()))))
            pos = m.end()
        return cls(name, tuple(terms))

    @property
    def nvars(self) -> int:
        return 1 + max((i for _, mon in self.terms for i, _ in mon), default=-1)

    def __call__(self, a: Sequence) -> Fraction:
        a = [as_fraction(v) for v in a]
        total = Fraction(0)
        for coef, mon in self.terms:
            v = Fraction(coef)
            for i, e in mon:
                v *= a[i] ** e
            total += v
        return total

    def __str__(self) -> str:
        parts = []
        for coef, mon in self.terms:
            body = "*".join(f"a{i}" + (f"^{e}" if e > 1 else "") for i, e in mon)
            c = "" if abs(coef) == 1 and body else str(abs(coef))
            s = "*".join(x for x in (c, body) if x)
            parts.append(("-" if coef < 0 else "+") + " " + s)
        out = " ".join(parts)
        return out[2:] if out.startswith("+ ") else "-" + out[2:]


def verify_vanishing(D: ImplicitPolynomial, s: HKSample | Sequence) -> Fraction:
    a = s.a if isinstance(s, HKSample) else s
    return D(a)


# The support (0,0),(2,0),(3,0),(1,1),(2,1),(1,2) with its six boundary strata.
# D5 is the discriminant of the bottom-edge circuit (1,-3,2) on exponents 0,2,3.
EXAMPLE_SUPPORT = ((0, 0), (2, 0), (3, 0), (1, 1), (2, 1), (1, 2))
EXAMPLE_POLYNOMIALS: dict[str, str] = {
    "D0": (
        "-a2*a3^6 + a1*a3^5*a4 + a0*a3^3*a4^3 - a1^2*a3^4*a5 - 36*a0*a2*a3^3*a4*a5"
        " + 30*a0*a1*a3^2*a4^2*a5 + 27*a0^2*a4^4*a5 + 72*a0*a1*a2*a3^2*a5^2"
        " - 96*a0*a1^2*a3*a4*a5^2 - 216*a0^2*a2*a4^2*a5^2 + 64*a0*a1^3*a5^3"
        " + 432*a0^2*a2^2*a5^3"
    ),
    "D1": "-a2^2*a3^4 + 4*a0*a1*a4^4 - 32*a0*a1*a2*a4^2*a5 + 64*a0*a1*a2^2*a5^2",
    "D2": "a2^2*a3^3 + 4*a1^3*a4*a5 + 27*a0*a2^2*a4*a5",
    "D3": "27*a0*a4^4 - 216*a0*a2*a4^2*a5 + 64*a1^3*a5^2 + 432*a0*a2^2*a5^2",
    "D4": "a4^2 - 4*a2*a5",
    "D5": "4*a1^3 + 27*a0*a2^2",
}

# Top cells of one subdivision per stratum (any subdivision with the same
# sonc-complex gives the same chart image).
EXAMPLE_SUBDIVISIONS: dict[str, tuple[tuple[int, ...], ...]] = {
    "D0": ((0, 1, 2, 3, 4, 5),),
    "D1": ((0, 1, 3, 5), (1, 2, 4, 5)),
    "D2": ((0, 1, 2, 4), (0, 3, 4, 5)),
    "D3": ((0, 1, 2, 3), (0, 3, 5), (2, 3, 4, 5)),
    "D4": ((0, 1, 3), (0, 3, 5), (1, 2, 3), (2, 3, 4, 5)),
    "D5": ((0, 1, 2, 3), (0, 3, 5), (2, 3, 4), (3, 4, 5)),
}


def example_polynomial(name: str) -> ImplicitPolynomial:
    return ImplicitPolynomial.parse(name, EXAMPLE_POLYNOMIALS[name])


def example_chart(name: str) -> LambdaChart:
    A = SupportSet(EXAMPLE_SUPPORT)
    w = is_regular(A, [frozenset(c) for c in EXAMPLE_SUBDIVISIONS[name]])
    return build_chart(A, subdivide(A, w))


# ---------------------------------------------------------- boundary samples


@dataclass(frozen=True)
class BoundarySample:
    decomposition: SoncDecomposition
    f: ExponentialSum
    complex: TropicalComplex
    loci: tuple[Vector, ...]
    log_scale: float
    cells: tuple[int, ...]

    def __iter__(self):
        return iter((self.decomposition, self.f, self.complex))


def boundary_sample(
    A: SupportSet,
    w,
    t: Sequence | None = None,
    circuits: Sequence[Circuit] | None = None,
) -> BoundarySample:
    """Agiforms centred on the tropical vertices dual to their cells.

    A tropical vertex ``x`` is rational, so ``e^x`` is not; the loci are
    placed at ``z = 2^(L x)`` with ``L`` clearing denominators, which is the
    tropical vertex for the weights scaled by ``L log 2`` and hence for the
    same subdivision.  ``loci`` keeps the unscaled vertices.
    """
    L = subdivide(A, w)
    M = tropical_complex(A, w)
    if circuits is None:
        circuits = list(build_chart(A, L).circuits)
    t = [Fraction(1)] * len(circuits) if t is None else [as_fraction(v) for v in t]
    if len(t) != len(circuits):
        raise ValueError("one scale per circuit")
    owners = []
    for c in circuits:
        j = next((j for j, cell in enumerate(L.cells) if set(c.support) <= cell.indices), None)
        if j is None:
            raise CircuitNotInCell(f"circuit {list(c.support)} lies in no cell of the subdivision")
        owners.append(j)
    verts = [x for _, x in M.vertices]
    den = 1
    for j in owners:
        for v in verts[j]:
            den = linalg.lcm(den, v.denominator)
    terms = []
    loci = []
    for c, tc, j in zip(circuits, t, owners):
        x = verts[j]
        z = tuple(Fraction(2) ** int(den * v) for v in x)
        terms.append(Agiform(A, c, tc, z))
        loci.append(x)
    dec = SoncDecomposition(A, tuple(terms))
    return BoundarySample(dec, assemble(dec), M, tuple(loci), den * math.log(2), tuple(owners))


# ----------------------------------------------------------- codim probe


@dataclass
class CodimReport:
    expected: int
    n_params: int
    observed: list[int]

    @property
    def rank(self) -> int:
        return max(self.observed) if self.observed else 0


def _phi_float(chart: LambdaChart, basis, params: np.ndarray) -> np.ndarray:
    A = chart.support
    nc = len(chart.circuits)
    nb = len(basis)
    t = params[:nc]
    logs = params[nc : nc + nb]
    mono = params[nc + nb :]
    n = A.n
    X = np.zeros((chart.n_cells, n))
    for lb, B in zip(logs, basis):
        X += lb * np.array([[float(v) for v in Bj] for Bj in B])
    P = np.array([[float(v) for v in p] for p in A.points])
    a = np.zeros(len(A))
    for tc, c, j in zip(t, chart.circuits, chart.circuit_cell):
        vec = np.array(c.integer_vector(), dtype=float)
        a += tc * vec * np.exp(-P @ X[j])
    for i, s in zip(chart.monomials, mono):
        a[i] += s
    return a


def codim_probe(chart: LambdaChart, samples: int = 5, seed: int = 0, h: float = 1e-5, tol: float = 1e-6) -> CodimReport:
    """Numeric rank of the chart's Jacobian at random parameter points."""
    rng = np.random.default_rng(seed)
    basis = chart.log_basis()
    npar = len(chart.circuits) + len(basis) + len(chart.monomials)
    ranks = []
    for _ in range(samples):
        p0 = np.concatenate(
            [
                rng.uniform(0.5, 2.0, len(chart.circuits)),
                rng.uniform(-0.5, 0.5, len(basis)),
                rng.uniform(0.5, 2.0, len(chart.monomials)),
            ]
        )
        J = np.zeros((len(chart.support), npar))
        for k in range(npar):
            e = np.zeros(npar)
            e[k] = h
            J[:, k] = (_phi_float(chart, basis, p0 + e) - _phi_float(chart, basis, p0 - e)) / (2 * h)
        if npar == 0:
            ranks.append(0)
            continue
        sv = np.linalg.svd(J, compute_uv=False)
        ranks.append(int(np.sum(sv > tol * max(sv[0], 1.0))))
    A = chart.support
    return CodimReport(A.dim + A.codim, npar, ranks)


# ----------------------------------------------------------- slice grids


def slice_grid(
    f: ExponentialSum,
    D: ImplicitPolynomial | None,
    axes: tuple[int, int],
    span: float = 1.0,
    steps: int = 11,
    config: GridConfig = GridConfig(points_per_axis=21, descent_steps=50),
) -> list[list]:
    """Rows ``a..., D(a), f_min`` over a 2-D slice through ``f``'s coefficients."""
    i, j = axes
    base = [as_fraction(v) for v in f.coeffs]
    rows = []
    offs = [Fraction(k, steps - 1) * 2 * as_fraction(str(span)) - as_fraction(str(span)) for k in range(steps)]
    for di in offs:
        for dj in offs:
            a = list(base)
            a[i] += di
            a[j] += dj
            g = ExponentialSum(f.support, tuple(a))
            dval = D(a) if D is not None else ""
            fmin = check_nonneg_numeric(g, config).min_found
            rows.append([str(v) for v in a] + [str(dval), repr(fmin)])
    return rows
