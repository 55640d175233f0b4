"""Finite compressions of group-ring operators and their spectral densities.

A compression realizes a matrix over Q[G] as a dense real matrix indexed by
(row, g) for g in a finite window: either a Folner box X_m of G, or a finite
quotient G/G_m. Block entry [g, h] of entry (i, j) is the coefficient of
A_ij at g^-1 h. Exact rationals are rounded to float exactly once, here.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import groups
from .errors import InputError, ScheduleOverflowError, SupportCollisionError, ZeroOperatorError, NumericalError
from .groupring import RingMatrix
from .groups import FolnerSet, QuotientSpec

DEFAULT_CAP = 5000
DEFAULT_RELATIVE_THRESHOLD = 1e-10


@dataclass(frozen=True)
class Compression:
    matrix: np.ndarray = field(repr=False)
    normalization: int
    rank: int
    scheme: str
    level: int

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def to_text(self) -> str:
        buf = io.StringIO()
        np.savetxt(buf, self.matrix, fmt="%.17g")
        return buf.getvalue()


def _check_cap(dim: int, cap: int | None):
    cap = DEFAULT_CAP if cap is None else cap
    if dim > cap:
        raise ScheduleOverflowError(f"compression dimension {dim} exceeds cap {cap}")


def _float_terms(A: RingMatrix, project=None):
    out = []
    for (i, j), a in sorted(A.items()):
        terms = [(project(u) if project else u, float(c)) for u, c in a.items()]
        out.append((i, j, terms))
    return out


def compress_folner(A: RingMatrix, X: FolnerSet, *, spectral: bool = True, cap: int | None = None) -> Compression:
    """Restrict the right-convolution operator of A to l^2(X)^n."""
    if spectral and not A.is_self_adjoint():
        raise InputError("spectral compression needs a self-adjoint matrix")
    N = X.size
    _check_cap(max(A.rows, A.cols) * N, cap)
    spec = X.spec
    compose = groups.compose
    index = X.index
    elems = X.elements
    M = np.zeros((A.rows * N, A.cols * N))
    for i, j, terms in _float_terms(A):
        r0, c0 = i * N, j * N
        for u, c in terms:
            for gi, g in enumerate(elems):
                hi = index.get(compose(spec, g, u))
                if hi is not None:
                    M[r0 + gi, c0 + hi] = c
    return Compression(M, N, A.rows, "folner", X.m)


def check_quotient_faithful(A: RingMatrix, Q: QuotientSpec):
    """Raise SupportCollisionError if two support elements (or one and the identity) share an image."""
    seen = {}
    support = sorted(A.union_support() | {Q.source.identity})
    for u in support:
        img = Q.project(u)
        if img in seen:
            raise SupportCollisionError(
                f"{seen[img]} and {u} collide in the level-{Q.level} quotient {Q.target}; raise the level",
                (seen[img], u))
        seen[img] = u


def compress_quotient(A: RingMatrix, Q: QuotientSpec, *, spectral: bool = True, cap: int | None = None) -> Compression:
    """Push A forward to the finite quotient and take its regular representation."""
    if A.spec != Q.source:
        raise InputError(f"matrix over {A.spec}, quotient of {Q.source}")
    if spectral and not A.is_self_adjoint():
        raise InputError("spectral compression needs a self-adjoint matrix")
    check_quotient_faithful(A, Q)
    tgt = Q.target
    N = tgt.order
    _check_cap(max(A.rows, A.cols) * N, cap)
    elems = groups.elements(tgt)
    index = {g: k for k, g in enumerate(elems)}
    compose = groups.compose
    M = np.zeros((A.rows * N, A.cols * N))
    for i, j, terms in _float_terms(A, Q.project):
        r0, c0 = i * N, j * N
        for u, c in terms:
            for gi, g in enumerate(elems):
                M[r0 + gi, c0 + index[compose(tgt, g, u)]] = c
    return Compression(M, N, A.rows, "quotient", Q.level)


@dataclass(frozen=True)
class SpectralDensity:
    """Normalized eigenvalue counting function F(lam) = #{eig <= lam} / N."""

    eigenvalues: np.ndarray = field(repr=False)
    normalization: int
    rank: int

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float)
        if ev.size > 1 and np.any(np.diff(ev) < 0):
            raise NumericalError("eigenvalues must be sorted ascending")
        ev = ev.copy()
        ev.setflags(write=False)
        object.__setattr__(self, "eigenvalues", ev)

    def __call__(self, lam: float) -> float:
        return int(np.searchsorted(self.eigenvalues, lam, side="right")) / self.normalization

    def count_at_most(self, lam: float) -> int:
        return int(np.searchsorted(self.eigenvalues, lam, side="right"))

    @property
    def max_abs(self) -> float:
        ev = self.eigenvalues
        return float(max(abs(ev[0]), abs(ev[-1]))) if ev.size else 0.0

    def default_threshold(self, relative: float = DEFAULT_RELATIVE_THRESHOLD) -> float:
        return relative * max(1.0, self.max_abs)

    def steps(self) -> list[tuple[float, float]]:
        """(eigenvalue, F at that eigenvalue), one row per eigenvalue."""
        ev = self.eigenvalues
        counts = np.searchsorted(ev, ev, side="right")
        return [(float(lam), int(k) / self.normalization) for lam, k in zip(ev, counts)]

    def to_csv(self) -> str:
        lines = ["lambda,F_m"]
        lines += [f"{lam:.12g},{F:.12g}" for lam, F in self.steps()]
        return "\n".join(lines) + "\n"


def eigenvalues(c: Compression, cap: int | None = None) -> SpectralDensity:
    M = c.matrix
    _check_cap(c.dim, cap)
    if not np.all(np.isfinite(M)):
        raise NumericalError("compression has non-finite entries")
    if c.dim == 0:
        return SpectralDensity(np.zeros(0), c.normalization, c.rank)
    ev = np.linalg.eigvalsh(M)
    tr = float(np.trace(M))
    scale = max(1.0, float(np.max(np.abs(ev))))
    if abs(float(ev.sum()) - tr) > 1e-8 * c.dim * scale:
        raise NumericalError(f"eigenvalue sum {ev.sum()} disagrees with trace {tr}")
    return SpectralDensity(ev, c.normalization, c.rank)


def normalized_log_det_positive(s: SpectralDensity, kernel_threshold: float | None = None) -> float:
    """(1/N) sum of log(lam) over eigenvalues above the kernel threshold."""
    thr = s.default_threshold() if kernel_threshold is None else kernel_threshold
    pos = s.eigenvalues[s.eigenvalues > thr]
    if pos.size == 0:
        raise ZeroOperatorError("no eigenvalue above the kernel threshold")
    return float(np.sum(np.log(pos))) / s.normalization


def normalized_log_abs_det(s: SpectralDensity, kernel_threshold: float | None = None) -> float:
    """Same as normalized_log_det_positive but on |lam|, for self-adjoint operators of either sign."""
    thr = s.default_threshold() if kernel_threshold is None else kernel_threshold
    mags = np.abs(s.eigenvalues)
    pos = np.sort(mags[mags > thr])
    if pos.size == 0:
        raise ZeroOperatorError("no eigenvalue above the kernel threshold")
    return float(np.sum(np.log(pos))) / s.normalization


@dataclass(frozen=True)
class GapDiagnostics:
    l1_bound: float
    floor: float
    max_eigenvalue: float
    gap: bool
    within_bound: bool

    def as_dict(self) -> dict:
        return {
            "l1_bound": self.l1_bound,
            "floor": self.floor,
            "max_eigenvalue": self.max_eigenvalue,
            "gap": self.gap,
            "within_bound": self.within_bound,
        }


def gap_check(s: SpectralDensity, K_sq: float, kernel_threshold: float | None = None) -> GapDiagnostics:
    """Report whether F(lam) = F(0) for all lam < 1/K_sq (up to the kernel threshold).

    This is a diagnostic on one compression, not a certificate for the limit operator.
    """
    if not K_sq > 0:
        raise InputError("K_sq must be positive")
    thr = s.default_threshold() if kernel_threshold is None else kernel_threshold
    ev = s.eigenvalues
    above = ev[ev > thr]
    floor = float(above[0]) if above.size else math.inf
    top = float(ev[-1]) if ev.size else 0.0
    tol = 1e-9 * max(1.0, K_sq)
    return GapDiagnostics(
        l1_bound=float(K_sq),
        floor=floor,
        max_eigenvalue=top,
        gap=not bool(np.any((ev > thr) & (ev < 1.0 / K_sq))),
        within_bound=bool(s.max_abs <= K_sq + tol),
    )
