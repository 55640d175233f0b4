"""Ground truth independent of the compression estimators.

* Mahler measure of a Laurent polynomial (the Fuglede-Kadison determinant over Z^d),
  by trapezoidal quadrature on the torus, or Jensen's formula in one variable.
* Determinants over finite groups from the exact regular representation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import groups
from .errors import InputError, SingularOperatorError
from .groupring import RingElement, RingMatrix


class LowPrecisionWarning(UserWarning):
    """Quadrature hit zeros of the polynomial on the torus."""


@dataclass(frozen=True)
class LaurentPolynomial:
    d: int
    support: dict

    def __post_init__(self):
        clean = {}
        for k, c in dict(self.support).items():
            k = tuple(int(x) for x in k)
            if len(k) != self.d:
                raise InputError(f"exponent {k} does not have {self.d} entries")
            c = Fraction(c)
            if c:
                clean[k] = clean.get(k, 0) + c
        object.__setattr__(self, "support", {k: c for k, c in clean.items() if c})

    @classmethod
    def from_ring_element(cls, a: RingElement):
        if a.spec.kind != "free_abelian":
            raise InputError(f"Laurent polynomials live over Z^d, not {a.spec}")
        return cls(a.spec.d, dict(a.items()))

    @classmethod
    def from_terms(cls, terms):
        """From [[exponents], num, den] triples (den optional)."""
        terms = list(terms)
        if not terms:
            raise InputError("empty polynomial")
        d = len(terms[0][0])
        sup = {}
        for t in terms:
            den = t[2] if len(t) > 2 else 1
            k = tuple(t[0])
            sup[k] = sup.get(k, 0) + Fraction(t[1], den)
        return cls(d, sup)

    def __mul__(self, other: "LaurentPolynomial"):
        if self.d != other.d:
            raise InputError("variable count mismatch")
        out: dict = {}
        for k1, c1 in self.support.items():
            for k2, c2 in other.support.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0) + c1 * c2
        return LaurentPolynomial(self.d, out)

    def is_zero(self) -> bool:
        return not self.support


def jensen_mahler(p: LaurentPolynomial) -> float:
    """|leading coefficient| * prod max(1, |root|), one variable only."""
    if p.d != 1:
        raise InputError("Jensen's formula applies to one variable")
    if p.is_zero():
        raise InputError("Mahler measure of the zero polynomial")
    lo = min(k[0] for k in p.support)
    hi = max(k[0] for k in p.support)
    coeffs = [float(p.support.get((e,), 0)) for e in range(hi, lo - 1, -1)]
    roots = np.roots(coeffs) if len(coeffs) > 1 else np.zeros(0)
    return abs(coeffs[0]) * float(np.prod(np.maximum(1.0, np.abs(roots))))


def _log_abs_on_grid(p: LaurentPolynomial, grid: int):
    """Yield chunks of |p| sampled on the uniform grid^d torus lattice."""
    exps = np.array(list(p.support.keys()), dtype=float)
    coefs = np.array([float(c) for c in p.support.values()])
    theta = 2 * np.pi * np.arange(grid) / grid
    d = p.d
    if d == 1:
        yield np.abs(np.exp(1j * np.outer(theta, exps[:, 0])) @ coefs)
        return
    rest = np.stack(np.meshgrid(*([theta] * (d - 1)), indexing="ij"), axis=-1).reshape(-1, d - 1)
    phase_rest = rest @ exps[:, 1:].T  # (grid^(d-1), terms)
    for t0 in theta:
        phase = phase_rest + t0 * exps[:, 0]
        yield np.abs(np.exp(1j * phase) @ coefs)


def mahler_measure(p: LaurentPolynomial, grid: int = 1024) -> float:
    """exp of the mean of log|p| over the torus.

    One variable with a root on the unit circle switches to Jensen's formula;
    in more variables, zero samples are dropped with a LowPrecisionWarning.
    """
    if grid < 64:
        raise InputError("grid must have at least 64 points per dimension")
    if p.is_zero():
        raise InputError("Mahler measure of the zero polynomial")
    if p.d == 1:
        lo = min(k[0] for k in p.support)
        hi = max(k[0] for k in p.support)
        if hi > lo:
            coeffs = [float(p.support.get((e,), 0)) for e in range(hi, lo - 1, -1)]
            if np.any(np.abs(np.abs(np.roots(coeffs)) - 1.0) < 1e-8):
                return jensen_mahler(p)
    # samples at rounding level relative to the coefficients count as zeros of p
    floor = 1e-13 * sum(abs(float(c)) for c in p.support.values())
    total = 0.0
    count = 0
    dropped = 0
    for chunk in _log_abs_on_grid(p, grid):
        good = chunk > floor
        dropped += int(chunk.size - np.count_nonzero(good))
        total += float(np.sum(np.log(chunk[good])))
        count += int(np.count_nonzero(good))
    if dropped:
        warnings.warn(f"{dropped} grid points hit zeros of p; result is low precision", LowPrecisionWarning)
    return math.exp(total / count)


def regular_representation(A: RingMatrix) -> np.ndarray:
    """(n q) x (n q) real matrix of A over a finite group of order q, assembled exactly then rounded once."""
    spec = A.spec
    if not spec.is_finite:
        raise InputError(f"{spec} is not finite")
    elems = groups.elements(spec)
    q = len(elems)
    inv = [groups.inverse(spec, g) for g in elems]
    R = [[Fraction(0)] * (A.cols * q) for _ in range(A.rows * q)]
    for (i, j), a in A.items():
        for gi in range(q):
            for hi, h in enumerate(elems):
                c = a.coeff(groups.compose(spec, inv[gi], h))
                if c:
                    R[i * q + gi][j * q + hi] = c
    return np.array([[float(x) for x in row] for row in R], dtype=float).reshape(A.rows * q, A.cols * q)


def finite_group_det(A: RingMatrix) -> float:
    """|det(regular representation)|^(1/q); raises if A is singular."""
    if not A.is_square:
        raise InputError("determinant of a non-square matrix")
    q = A.spec.order
    sign, logabs = np.linalg.slogdet(regular_representation(A))
    if sign == 0 or not np.isfinite(logabs):
        raise SingularOperatorError("matrix is not invertible over the group ring")
    return math.exp(logabs / q)


def finite_group_det_positive(A: RingMatrix, rtol: float = 1e-10) -> tuple[float, float]:
    """(Det of the positive part |A| restricted off its kernel, von Neumann dimension of the kernel)."""
    q = A.spec.order
    s = np.linalg.svd(regular_representation(A), compute_uv=False)
    tol = rtol * max(1.0, float(s[0]) if s.size else 0.0)
    pos = s[s > tol]
    kernel = A.cols * q - pos.size
    return math.exp(float(np.sum(np.log(pos))) / q), kernel / q
