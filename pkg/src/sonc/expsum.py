"""Exponential sums, agiforms and reduced sonc-decompositions.

Two evaluation modes coexist.  Exact (toric) mode uses positive rational
points ``z = e^x`` and Fraction coefficients; it is what every identity in
the test-suite runs on.  Float (log) mode works with real ``w = log z`` and
is only used for grid search and Jacobian probes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg
from .circuits import Circuit, circuit_on
from .errors import NegativeScale, ZeroScale
from .geometry import SupportSet, affine_span_basis
from .linalg import Vector, as_fraction


def _iroot(n: int, k: int) -> int | None:
    """Exact integer k-th root of n >= 0, or None."""
    if n < 0:
        return None
    if n in (0, 1):
        return n
    r = int(round(n ** (1.0 / k)))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**k == n:
            return c
    # fall back to bisection for big integers
    lo, hi = 0, 1 << (n.bit_length() // k + 1)
    while lo <= hi:
        mid = (lo + hi) // 2
        p = mid**k
        if p == n:
            return mid
        if p < n:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


def rational_power(z: Fraction, e: Fraction) -> Fraction:
    """``z ** e`` for positive rational ``z``, exactly.

    With a non-integral exponent the base must be a perfect power; otherwise
    ValueError (the result would be irrational).
    """
    z = as_fraction(z)
    e = as_fraction(e)
    if z <= 0:
        raise ValueError("toric coordinates must be positive")
    if e.denominator == 1:
        return z ** int(e)
    k = e.denominator
    num, den = _iroot(z.numerator, k), _iroot(z.denominator, k)
    if num is None or den is None:
        raise ValueError(f"{z} is not a perfect {k}-th power; exact mode needs integral exponents")
    return Fraction(num, den) ** e.numerator


def monomial(z: Sequence[Fraction], alpha: Sequence[Fraction]) -> Fraction:
    out = Fraction(1)
    for zi, ai in zip(z, alpha):
        if ai:
            out *= rational_power(zi, ai)
    return out


def toric_point(z: Sequence) -> Vector:
    zz = tuple(as_fraction(v) for v in z)
    if any(v <= 0 for v in zz):
        raise ValueError("toric points have positive coordinates")
    return zz


@dataclass(frozen=True)
class ExponentialSum:
    """``f = sum_i a_i z^alpha_i``.  ``mode`` is ``"exact"`` or ``"float"``."""

    support: SupportSet
    coeffs: tuple
    mode: str = "exact"

    def __post_init__(self):
        if len(self.coeffs) != len(self.support):
            raise ValueError("one coefficient per support point")

    @classmethod
    def zero(cls, A: SupportSet) -> "ExponentialSum":
        return cls(A, tuple(Fraction(0) for _ in range(len(A))))

    def __add__(self, other: "ExponentialSum") -> "ExponentialSum":
        if other.support != self.support:
            raise ValueError("different supports")
        mode = "exact" if self.mode == other.mode == "exact" else "float"
        return ExponentialSum(self.support, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), mode)

    def scaled(self, s) -> "ExponentialSum":
        return ExponentialSum(self.support, tuple(s * a for a in self.coeffs), self.mode)

    def univariate_polynomial(self) -> list[Fraction]:
        """Coefficients (low to high) of ``z^-min(alpha) f(z)`` for integral 1-D supports."""
        A = self.support
        if A.n != 1 or not A.is_integral:
            raise ValueError("needs an integral univariate support")
        exps = [int(p[0]) for p in A.points]
        lo = min(exps)
        out = [Fraction(0)] * (max(exps) - lo + 1)
        for e, a in zip(exps, self.coeffs):
            out[e - lo] += a
        return out

    def to_json(self) -> dict:
        data = {"support": self.support.to_json()}
        if self.mode == "exact":
            data["coeffs"] = [str(a) for a in self.coeffs]
        else:
            data["mode"] = "float"
            data["coeffs"] = [float(a) for a in self.coeffs]
        return data

    @classmethod
    def from_json(cls, data: dict) -> "ExponentialSum":
        A = SupportSet.from_json(data["support"] if "support" in data else data)
        if data.get("mode") == "float":
            return cls(A, tuple(float(a) for a in data["coeffs"]), "float")
        return cls(A, tuple(as_fraction(a) for a in data["coeffs"]))

    @classmethod
    def load(cls, path) -> "ExponentialSum":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def evaluate(f: ExponentialSum, z: Sequence) -> Fraction | float:
    """``sum_i a_i z^alpha_i``; exact when ``f`` and ``z`` are."""
    exact = f.mode == "exact" and all(isinstance(v, (int, Fraction, str)) for v in z)
    if exact:
        zz = toric_point(z)
        return sum((a * monomial(zz, p) for a, p in zip(f.coeffs, f.support.points) if a), Fraction(0))
    w = np.log(np.asarray([float(v) for v in z]))
    return float(evaluate_log(f, w[None, :])[0])


def evaluate_log(f: ExponentialSum, W: np.ndarray) -> np.ndarray:
    """Evaluate at log-points ``W`` (shape ``(k, n)``), vectorized."""
    P = np.array([[float(v) for v in p] for p in f.support.points])
    a = np.array([float(v) for v in f.coeffs])
    return np.exp(W @ P.T) @ a


@dataclass(frozen=True)
class Agiform:
    """``t * <phi_A(x - w), c>`` with the locus given as ``z = e^w`` (exact) or ``w``."""

    support: SupportSet
    circuit: Circuit
    t: Fraction | float
    z: Vector | None = None
    w: tuple[float, ...] | None = None

    def __post_init__(self):
        if not self.circuit.simplicial:
            raise ValueError("agiforms live on simplicial circuits")
        if self.t < 0:
            raise NegativeScale(f"scale {self.t} < 0")
        if self.z is None and self.w is None:
            raise ValueError("give the locus either as z or as w")

    @property
    def log_locus(self) -> tuple[float, ...]:
        if self.w is not None:
            return tuple(self.w)
        return tuple(math.log(v) for v in self.z)


def agiform_coeffs(g: Agiform) -> ExponentialSum:
    """Coefficient of ``alpha`` is ``t * c_alpha * z^(-alpha)``.

    ``c`` is the primitive integer form of the circuit, so the Motzkin
    agiform at ``z = (1, 1)`` has coefficients ``(1, 1, 1, -3)``.
    """
    A = g.support
    if g.t < 0:
        raise NegativeScale(f"scale {g.t} < 0")
    c = tuple(Fraction(v) for v in g.circuit.integer_vector())
    if g.z is not None and not isinstance(g.t, float):
        z = toric_point(g.z)
        t = as_fraction(g.t)
        coeffs = tuple(
            t * c[i] / monomial(z, A.points[i]) if c[i] and t else Fraction(0) for i in range(len(A))
        )
        return ExponentialSum(A, coeffs)
    w = np.array(g.log_locus)
    coeffs = tuple(
        float(g.t) * float(c[i]) * math.exp(-float(np.dot(w, [float(v) for v in A.points[i]])))
        for i in range(len(A))
    )
    return ExponentialSum(A, coeffs, "float")


def singular_locus(g: Agiform) -> tuple[tuple[float, ...], list[Vector]]:
    """Log-space point ``w`` and an exact basis of ``Aff(c)``'s orthogonal complement."""
    if g.t == 0:
        raise ZeroScale("a zero agiform vanishes everywhere")
    _, dirs = affine_span_basis(g.support.subset(g.circuit.support))
    if dirs:
        perp = linalg.nullspace(dirs)
    else:
        perp = linalg.nullspace([], ncols=g.support.n)
    return g.log_locus, perp


@dataclass(frozen=True)
class SoncDecomposition:
    support: SupportSet
    agiform_terms: tuple[Agiform, ...] = ()
    monomial_terms: tuple[tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        for i, s in self.monomial_terms:
            if s < 0:
                raise NegativeScale(f"monomial {i} has coefficient {s} < 0")

    def to_json(self) -> dict:
        return {
            "terms": [
                {
                    "circuit": list(g.circuit.support),
                    "t": str(g.t),
                    "z": [str(v) for v in g.z],
                }
                for g in self.agiform_terms
            ],
            "monomials": [[i, str(s)] for i, s in self.monomial_terms],
        }

    @classmethod
    def from_json(cls, A: SupportSet, data: dict) -> "SoncDecomposition":
        terms = []
        for term in data.get("terms", []):
            c = circuit_on(A, term["circuit"])
            if c is None or not c.simplicial:
                raise ValueError(f"{term['circuit']} is not a simplicial circuit of A")
            terms.append(Agiform(A, c, as_fraction(term["t"]), toric_point(term["z"])))
        monos = tuple((int(i), as_fraction(s)) for i, s in data.get("monomials", []))
        return cls(A, tuple(terms), monos)


def assemble(dec: SoncDecomposition) -> ExponentialSum:
    f = ExponentialSum.zero(dec.support)
    for g in dec.agiform_terms:
        f = f + agiform_coeffs(g)
    if dec.monomial_terms:
        coeffs = list(f.coeffs)
        for i, s in dec.monomial_terms:
            coeffs[i] += s
        f = ExponentialSum(dec.support, tuple(coeffs), f.mode)
    return f


def sonc_support_labels(dec: SoncDecomposition) -> dict[str, list]:
    """Sonc-support split of *this* decomposition.

    ``R`` holds the circuits and monomials used with positive weight, ``S``
    the circuits in ``R`` none of whose points is a monomial of ``R``, and
    ``M`` the rest.  These describe the given decomposition only.
    """
    circuits = sorted({g.circuit.support for g in dec.agiform_terms if g.t > 0})
    monos = sorted({i for i, s in dec.monomial_terms if s > 0})
    mono_set = set(monos)
    S = [c for c in circuits if not mono_set.intersection(c)]
    R = [("circuit", c) for c in circuits] + [("monomial", i) for i in monos]
    M = [r for r in R if not (r[0] == "circuit" and r[1] in S)]
    return {"R": R, "S": [("circuit", c) for c in S], "M": M}


@dataclass
class NonnegReport:
    min_found: float
    argmin: tuple[float, ...]
    grid_min: float
    steps: int = 0
    history: list = field(default_factory=list, repr=False)

    @property
    def argmin_z(self) -> tuple[float, ...]:
        return tuple(math.exp(v) for v in self.argmin)


@dataclass(frozen=True)
class GridConfig:
    points_per_axis: int = 41
    log_range: tuple[float, float] = (-4.0, 4.0)
    descent_steps: int = 200
    step_tol: float = 1e-12


def check_nonneg_numeric(f: ExponentialSum, config: GridConfig = GridConfig()) -> NonnegReport:
    """Smallest value of ``f`` found by a log-space grid plus gradient descent.

    This is a search, not a certificate.
    """
    n = f.support.n
    if n > 3:
        raise ValueError("grid search is limited to n <= 3")
    lo, hi = config.log_range
    axis = np.linspace(lo, hi, config.points_per_axis)
    mesh = np.meshgrid(*([axis] * n), indexing="ij")
    W = np.stack([m.ravel() for m in mesh], axis=1)
    vals = evaluate_log(f, W)
    # ties go to the lexicographically smallest grid point (W is in lex order)
    k = int(np.argmin(vals))
    w = W[k].copy()
    grid_min = float(vals[k])

    P = np.array([[float(v) for v in p] for p in f.support.points])
    a = np.array([float(v) for v in f.coeffs])

    def value(x):
        with np.errstate(over="ignore", invalid="ignore"):
            return float(np.exp(P @ x) @ a)

    def grad(x):
        with np.errstate(over="ignore", invalid="ignore"):
            return P.T @ (a * np.exp(P @ x))

    fx = value(w)
    steps = 0
    for steps in range(1, config.descent_steps + 1):
        g = grad(w)
        gn = float(np.dot(g, g))
        # overflow means the search ran off towards infinity
        if gn == 0.0 or not math.isfinite(gn):
            break
        step = 1.0
        while True:
            cand = w - step * g
            fc = value(cand)
            if math.isfinite(fc) and fc <= fx - 1e-4 * step * gn:
                break
            step *= 0.5
            if step * math.sqrt(gn) < config.step_tol:
                cand = None
                break
        if cand is None:
            break
        moved = float(np.linalg.norm(cand - w))
        w, fx = cand, fc
        if moved < config.step_tol:
            break
    return NonnegReport(min(fx, grid_min), tuple(float(v) for v in w), grid_min, steps)
