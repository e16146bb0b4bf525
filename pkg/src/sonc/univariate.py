"""The univariate boundary stratification and an exact half-line oracle.

For ``A = {alpha_0 < ... < alpha_d}`` the minimal circuits are the triples
``c_i = {alpha_(i-1), alpha_i, alpha_(i+1)}``, ``i = 1..m`` with ``m = d-1``.
A stratum is labelled by the circuits used and by which of them share a
singular locus; groups of equal loci are written between bars, so
``{1,2|4}`` has ``c_1, c_2`` at one locus and ``c_4`` at a larger one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .linalg import as_fraction


@dataclass(frozen=True, order=True)
class StratumLabel:
    groups: tuple[tuple[int, ...], ...]

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(i for g in self.groups for i in g)

    @property
    def dim(self) -> int:
        """Dimension of the stratum in the full coefficient space."""
        return len(self.indices) + len(self.groups)

    def slice_dim(self) -> int:
        """Dimension inside the affine slice ``a_0 = a_d = 1``."""
        return self.dim - 2

    def is_valid(self) -> bool:
        idx = self.indices
        if any(not g for g in self.groups):
            return False
        if list(idx) != sorted(set(idx)):
            return False
        # indices one apart must share a group
        for g, h in zip(self.groups, self.groups[1:]):
            if h[0] - g[-1] == 1:
                return False
        return True

    @classmethod
    def parse(cls, text: str) -> "StratumLabel":
        body = text.strip().strip("{}").strip()
        if not body:
            return cls(())
        groups = tuple(tuple(int(v) for v in g.split(",") if v.strip()) for g in body.split("|"))
        label = cls(groups)
        if not label.is_valid():
            raise ValueError(f"invalid stratum label {text!r}")
        return label

    def __str__(self) -> str:
        return "{" + "|".join(",".join(str(i) for i in g) for g in self.groups) + "}"


def _compositions(idx: Sequence[int]) -> Iterable[tuple[tuple[int, ...], ...]]:
    """Ways to cut a sorted index list into consecutive groups."""
    k = len(idx)
    for cuts in itertools.product((False, True), repeat=max(k - 1, 0)):
        groups, cur = [], [idx[0]]
        for i, cut in enumerate(cuts):
            if cut:
                groups.append(tuple(cur))
                cur = []
            cur.append(idx[i + 1])
        groups.append(tuple(cur))
        yield tuple(groups)


def enumerate_labels(d: int, slice: bool = False) -> list[StratumLabel]:
    """All valid labels for ``d+1`` points; ``slice`` keeps those with ``1`` and ``m``."""
    if d < 2:
        raise ValueError("need d >= 2")
    m = d - 1
    out = [] if slice else [StratumLabel(())]
    for r in range(1, m + 1):
        for I in itertools.combinations(range(1, m + 1), r):
            if slice and (I[0] != 1 or I[-1] != m):
                continue
            for groups in _compositions(I):
                label = StratumLabel(groups)
                if label.is_valid():
                    out.append(label)
    out.sort(key=lambda L: (-L.dim, L.indices, L.groups))
    return out


def _lower(label: StratumLabel) -> list[StratumLabel]:
    """Labels reached by deleting one index or one bar."""
    out = set()
    gs = [list(g) for g in label.groups]
    for gi, g in enumerate(gs):
        for i in g:
            new = [list(h) for h in gs]
            new[gi].remove(i)
            if not new[gi]:
                del new[gi]
            cand = StratumLabel(tuple(tuple(h) for h in new))
            if cand.is_valid():
                out.add(cand)
    for b in range(len(gs) - 1):
        new = gs[:b] + [gs[b] + gs[b + 1]] + gs[b + 2 :]
        cand = StratumLabel(tuple(tuple(h) for h in new))
        if cand.is_valid():
            out.add(cand)
    return sorted(out)


@dataclass
class StrataPoset:
    labels: list[StratumLabel]
    covers: list[tuple[StratumLabel, StratumLabel]]

    def closure(self, label: StratumLabel) -> set[StratumLabel]:
        """``label`` and every stratum in its closure."""
        below = {}
        for hi, lo in self.covers:
            below.setdefault(hi, []).append(lo)
        seen = {label}
        stack = [label]
        while stack:
            x = stack.pop()
            for y in below.get(x, []):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def to_json(self) -> dict:
        return {
            "nodes": [{"label": str(L), "dim": L.dim} for L in self.labels],
            "edges": [[str(a), str(b)] for a, b in self.covers],
        }

    def to_dot(self) -> str:
        lines = ["digraph strata {"]
        for L in self.labels:
            lines.append(f'  "{L}" [label="{L} ({L.dim})"];')
        for a, b in self.covers:
            lines.append(f'  "{a}" -> "{b}";')
        lines.append("}")
        return "\n".join(lines)


def build_poset(labels: Iterable[StratumLabel]) -> StrataPoset:
    """Closure order generated by index and bar deletion.

    Deletions that leave the given label set are followed through, so the
    edges stay correct on sliced label sets.
    """
    labels = list(labels)
    present = set(labels)
    covers = []
    for L in labels:
        frontier = _lower(L)
        seen = set()
        while frontier:
            x = frontier.pop()
            if x in seen:
                continue
            seen.add(x)
            if x in present:
                covers.append((L, x))
            else:
                frontier.extend(_lower(x))
    covers.sort(key=lambda e: (e[0].indices, e[0].groups, e[1].indices, e[1].groups))
    return StrataPoset(labels, covers)


@dataclass(frozen=True)
class Codim1Count:
    labels: int
    total: int


def codim1_count(d: int) -> Codim1Count:
    """Codimension-one strata in the full space, plus ``a_0 = 0`` and ``a_d = 0``."""
    if d < 3:
        raise ValueError("need d >= 3")
    k = sum(1 for L in enumerate_labels(d) if L.dim == d)
    return Codim1Count(k, k + 2)


# ------------------------------------------------------------- quartic test


def quartic_facet_form(w1, w3):
    """Coefficients ``(c11, c20, c02)`` of ``q_F = c11 x y + c20 x^2 + c02 y^2``."""
    w1, w3 = as_fraction(w1), as_fraction(w3)
    u = w1 * w3
    return 8 * u * (2 - u), -4 * w1**4, -4 * w3**4


def quartic_boundary_test(w1, w3) -> str:
    """``"boundary"`` or ``"interior"`` for ``g_1 + g_3`` on ``{0,...,4}``.

    ``g_1 = 1 - 2 w1 z + w1^2 z^2`` and ``g_3 = z^2 (w3^2 - 2 w3 z + z^2)``.
    The sum is interior exactly when the facet form ``q_F`` is positive
    somewhere on the open positive quadrant.
    """
    w1, w3 = as_fraction(w1), as_fraction(w3)
    if w1 <= 0 or w3 <= 0:
        raise ValueError("loci must be positive")
    c11, c20, c02 = quartic_facet_form(w1, w3)
    # a binary form with negative squares is positive on the quadrant
    # iff its mixed coefficient is positive and its discriminant is too
    positive_somewhere = c11 > 0 and c11 * c11 - 4 * c20 * c02 > 0
    return "interior" if positive_somewhere else "boundary"


def classify_decomposition(terms: Iterable[tuple[int, object, object]]) -> StratumLabel | str:
    """Stratum label of ``sum t_i g_i`` with ``g_i`` on ``c_i`` singular at ``w_i``.

    Returns ``"interior-candidate"`` when the loci break the ordering that
    boundary points must satisfy.
    """
    ts = sorted((int(i), as_fraction(w), as_fraction(t)) for i, w, t in terms)
    if any(t <= 0 for _, _, t in ts):
        raise ValueError("scales must be positive")
    idx = [i for i, _, _ in ts]
    if len(set(idx)) != len(idx):
        raise ValueError("each circuit at most once")
    for (i, wi, _), (j, wj, _) in zip(ts, ts[1:]):
        if wj < wi:
            return "interior-candidate"
        if j - i == 1 and wi != wj:
            return "interior-candidate"
    groups: list[list[int]] = []
    last = None
    for i, w, _ in ts:
        if groups and w == last:
            groups[-1].append(i)
        else:
            groups.append([i])
        last = w
    return StratumLabel(tuple(tuple(g) for g in groups))


# ------------------------------------------------------------ polynomials
# Polynomials are coefficient lists, lowest degree first, without trailing zeros.


def _trim(p: Sequence[Fraction]) -> list[Fraction]:
    p = [as_fraction(v) for v in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_eval(p: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_deriv(p: Sequence[Fraction]) -> list[Fraction]:
    return _trim([i * c for i, c in enumerate(p)][1:])


def poly_divmod(p: Sequence[Fraction], q: Sequence[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    p, q = _trim(p), _trim(q)
    if not q:
        raise ZeroDivisionError("division by the zero polynomial")
    quo = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    r = list(p)
    while len(r) >= len(q) and r:
        shift = len(r) - len(q)
        f = r[-1] / q[-1]
        quo[shift] = f
        for i, c in enumerate(q):
            r[i + shift] -= f * c
        r = _trim(r)
    return _trim(quo), r


def poly_gcd(p: Sequence[Fraction], q: Sequence[Fraction]) -> list[Fraction]:
    a, b = _trim(p), _trim(q)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    if not a:
        return a
    lead = a[-1]
    return [c / lead for c in a]


def squarefree_decomposition(p: Sequence[Fraction]) -> list[list[Fraction]]:
    """Yun's algorithm: monic ``f_1, f_2, ...`` with ``p = c * prod f_i^i``."""
    p = _trim(p)
    if len(p) <= 1:
        return []
    out = []
    dp = poly_deriv(p)
    a = poly_gcd(p, dp)
    b = poly_divmod(p, a)[0]
    c = poly_divmod(dp, a)[0]
    d = [x - y for x, y in itertools.zip_longest(c, poly_deriv(b), fillvalue=Fraction(0))]
    d = _trim(d)
    while len(b) > 1:
        a = poly_gcd(b, d)
        out.append([v / a[-1] for v in a])
        b = poly_divmod(b, a)[0]
        c = poly_divmod(d, a)[0]
        d = _trim([x - y for x, y in itertools.zip_longest(c, poly_deriv(b), fillvalue=Fraction(0))])
    return out


def sturm_sequence(p: Sequence[Fraction]) -> list[list[Fraction]]:
    seq = [_trim(p), poly_deriv(p)]
    while seq[-1]:
        r = poly_divmod(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-v for v in r])
    return [s for s in seq if s]


def _sign_changes(vals: Iterable[Fraction]) -> int:
    signs = [v > 0 for v in vals if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def positive_root_count(p: Sequence[Fraction]) -> int:
    """Distinct roots in ``(0, inf)`` of a polynomial with ``p(0) != 0``."""
    seq = sturm_sequence(p)
    at0 = _sign_changes(s[0] for s in seq)
    at_inf = _sign_changes(s[-1] for s in seq)
    return at0 - at_inf


def sturm_nonneg_halfline(p: Sequence) -> bool:
    """Exact test of ``p(z) >= 0`` for all ``z > 0``."""
    p = _trim(p)
    if not p:
        return True
    # powers of z do not change signs on z > 0
    k = next(i for i, c in enumerate(p) if c != 0)
    p = p[k:]
    lowest_positive = p[0] > 0
    odd = [Fraction(1)]
    for mult, f in enumerate(squarefree_decomposition(p), start=1):
        if mult % 2 == 1 and len(f) > 1:
            odd = _poly_mul(odd, f)
    if len(odd) > 1 and positive_root_count(odd) > 0:
        return False
    return lowest_positive


def _poly_mul(p: Sequence[Fraction], q: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out
