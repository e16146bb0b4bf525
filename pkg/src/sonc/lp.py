"""A small exact two-phase simplex method.

Used for regularity certificates and cone-membership checks, where a float
LP solver could report a strict inequality as feasible (or not) by rounding.
Bland's rule keeps it from cycling; all arithmetic is ``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import as_fraction


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


class _Tableau:
    def __init__(self, rows, rhs, basis):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis

    def pivot(self, r, c, obj):
        piv = self.rows[r][c]
        row = [v / piv if v else v for v in self.rows[r]]
        b = self.rhs[r] / piv
        self.rows[r] = row
        self.rhs[r] = b
        nz = [(j, p) for j, p in enumerate(row) if p]
        for i in range(len(self.rows)):
            if i != r:
                f = self.rows[i][c]
                if f != 0:
                    target = self.rows[i]
                    for j, p in nz:
                        target[j] -= f * p
                    self.rhs[i] -= f * b
        f = obj[0][c]
        if f != 0:
            target = obj[0]
            for j, p in nz:
                target[j] -= f * p
            obj[1] -= f * b
        self.basis[r] = c

    def optimize(self, cost, allowed):
        """Maximize ``cost`` over the current basis. Returns False if unbounded."""
        # obj holds reduced costs (c_j - c_B B^-1 a_j) and -(current value)
        red = list(cost)
        val = Fraction(0)
        for r, bv in enumerate(self.basis):
            cb = cost[bv]
            if cb != 0:
                red = [a - cb * p for a, p in zip(red, self.rows[r])]
                val -= cb * self.rhs[r]
        obj = [red, val]
        while True:
            enter = next((j for j in allowed if obj[0][j] > 0), None)
            if enter is None:
                return True
            best = None
            for r, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = self.rhs[r] / a
                    key = (ratio, self.basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                return False
            self.pivot(best[1], enter, obj)


def solve_lp(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    free: Sequence[int] = (),
) -> LPResult:
    """Maximize ``c @ x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``.

    Variables are nonnegative except those listed in ``free``.
    """
    c = [as_fraction(v) for v in c]
    nvar = len(c)
    free = sorted(set(free))
    # column map: original var -> (plus column, minus column or None)
    cols = []
    ncol = 0
    for j in range(nvar):
        if j in free:
            cols.append((ncol, ncol + 1))
            ncol += 2
        else:
            cols.append((ncol, None))
            ncol += 1
    n_ub = len(A_ub)
    nslack = n_ub
    total = ncol + nslack

    def expand(row):
        out = [Fraction(0)] * total
        for j, v in enumerate(row):
            v = as_fraction(v)
            p, m = cols[j]
            out[p] = v
            if m is not None:
                out[m] = -v
        return out

    rows, rhs = [], []
    for i, (row, b) in enumerate(zip(A_ub, b_ub)):
        r = expand(row)
        r[ncol + i] = Fraction(1)
        rows.append(r)
        rhs.append(as_fraction(b))
    for row, b in zip(A_eq, b_eq):
        rows.append(expand(row))
        rhs.append(as_fraction(b))
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]

    m = len(rows)
    cost = [Fraction(0)] * total
    for j, v in enumerate(c):
        p, mm = cols[j]
        cost[p] = v
        if mm is not None:
            cost[mm] = -v

    if m == 0:
        if any(v > 0 for v in cost):
            return LPResult("unbounded")
        return LPResult("optimal", tuple(Fraction(0) for _ in range(nvar)), Fraction(0))

    # phase one: artificial basis
    art0 = total
    rows = [r + [Fraction(int(i == k)) for k in range(m)] for i, r in enumerate(rows)]
    tab = _Tableau(rows, rhs, [art0 + i for i in range(m)])
    phase1 = [Fraction(0)] * total + [Fraction(-1)] * m
    tab.optimize(phase1, range(total + m))
    infeas = sum((tab.rhs[r] for r, bv in enumerate(tab.basis) if bv >= art0), Fraction(0))
    if infeas > 0:
        return LPResult("infeasible")

    # drive zero-level artificials out, dropping redundant rows
    r = 0
    while r < len(tab.rows):
        if tab.basis[r] >= art0:
            j = next((j for j in range(total) if tab.rows[r][j] != 0), None)
            if j is None:
                del tab.rows[r], tab.rhs[r], tab.basis[r]
                continue
            dummy = [[Fraction(0)] * (total + m), Fraction(0)]
            tab.pivot(r, j, dummy)
        r += 1
    tab.rows = [row[:total] for row in tab.rows]

    if not tab.optimize(cost, range(total)):
        return LPResult("unbounded")
    xs = [Fraction(0)] * total
    for r, bv in enumerate(tab.basis):
        xs[bv] = tab.rhs[r]
    x = []
    for p, mm in cols:
        x.append(xs[p] - (xs[mm] if mm is not None else 0))
    value = sum((a * b for a, b in zip(c, x)), Fraction(0))
    return LPResult("optimal", tuple(x), value)


def feasible_point(
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    nvar: int | None = None,
    free: Sequence[int] = (),
) -> tuple[Fraction, ...] | None:
    """Any exact point of the polyhedron, or None when it is empty."""
    if nvar is None:
        src = A_ub if len(A_ub) else A_eq
        nvar = len(src[0])
    res = solve_lp([0] * nvar, A_ub, b_ub, A_eq, b_eq, free)
    return res.x if res.status == "optimal" else None


def in_cone(generators: Sequence[Sequence], target: Sequence) -> tuple[Fraction, ...] | None:
    """Nonnegative coefficients expressing ``target`` in the generators, if any."""
    k = len(generators)
    if k == 0:
        return () if all(as_fraction(v) == 0 for v in target) else None
    A_eq = [[as_fraction(g[i]) for g in generators] for i in range(len(target))]
    return feasible_point(A_eq=A_eq, b_eq=list(target), nvar=k)
