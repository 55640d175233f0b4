"""Estimators for L^2 invariants of matrices and cochain complexes over Q[G].

Every estimator evaluates finite compressions along a schedule of levels
(Folner boxes or finite quotients) and reports the whole sequence; the
headline value is the top level, with the last-two-level difference as a
convergence slope. No extrapolation is attempted.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import groups
from .complexes import ChainMap, CochainComplex, laplacian, mapping_cone, require_valid
from .errors import InputError, NotAcyclicError, ZeroOperatorError
from .groupring import RingElement, RingMatrix
from .groups import GroupSpec
from .spectral import (
    DEFAULT_CAP,
    DEFAULT_RELATIVE_THRESHOLD,
    Compression,
    GapDiagnostics,
    SpectralDensity,
    compress_folner,
    compress_quotient,
    eigenvalues,
    gap_check,
    normalized_log_abs_det,
    normalized_log_det_positive,
)

SCHEMES = ("folner", "quotient")


@dataclass(frozen=True)
class Schedule:
    scheme: str = "folner"
    levels: tuple = (10, 20, 40)
    threshold: float = DEFAULT_RELATIVE_THRESHOLD
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(int(m) for m in self.levels))
        if self.scheme not in SCHEMES:
            raise InputError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if not self.levels:
            raise InputError("schedule needs at least one level")
        if any(m < 1 for m in self.levels):
            raise InputError("levels must be positive")
        if any(b <= a for a, b in zip(self.levels, self.levels[1:])):
            raise InputError("levels must be strictly ascending")
        if not self.threshold > 0:
            raise InputError("kernel threshold must be positive")
        if self.cap < 1:
            raise InputError("dimension cap must be positive")

    @property
    def top(self) -> int:
        return self.levels[-1]

    def as_dict(self) -> dict:
        return {"scheme": self.scheme, "levels": list(self.levels),
                "threshold": self.threshold, "cap": self.cap}


def compress(A: RingMatrix, scheme: str, m: int, *, spectral: bool = True, cap: int | None = None) -> Compression:
    if scheme == "folner":
        return compress_folner(A, groups.folner_set(A.spec, m), spectral=spectral, cap=cap)
    if scheme == "quotient":
        return compress_quotient(A, groups.quotient(A.spec, m), spectral=spectral, cap=cap)
    raise InputError(f"unknown scheme {scheme!r}")


def spectral_density(A: RingMatrix, scheme: str, m: int, cap: int | None = None) -> SpectralDensity:
    c = compress(A, scheme, m, cap=cap)
    return eigenvalues(c, cap=cap)


def _rnd(x):
    if x is None:
        return None
    if isinstance(x, bool):
        return x
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.12g}")


@dataclass(frozen=True)
class LevelResult:
    m: int
    N_m: int
    dim: int
    F_at_0: float
    norm_log_det: float | None
    min_pos_eig: float | None
    gap: GapDiagnostics
    wall_ms: float = field(default=0.0, compare=False)

    def as_dict(self, timing: bool = False) -> dict:
        return {
            "m": self.m,
            "N_m": self.N_m,
            "dim": self.dim,
            "F_at_0": _rnd(self.F_at_0),
            "norm_log_det": _rnd(self.norm_log_det),
            "min_pos_eig": _rnd(self.min_pos_eig),
            "gap": {k: _rnd(v) for k, v in self.gap.as_dict().items()},
            "wall_ms": _rnd(self.wall_ms) if timing else 0,
        }


CSV_COLUMNS = ("m", "N_m", "dim", "F_at_0", "norm_log_det", "min_pos_eig", "wall_ms")


def levels_csv(levels, timing: bool = False) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for lv in levels:
        row = lv.as_dict(timing)
        lines.append(",".join("" if row[c] is None else f"{row[c]:.12g}" if isinstance(row[c], float)
                              else str(row[c]) for c in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def _evaluate_level(H: RingMatrix, scheme: str, m: int, sched: Schedule, mode: str):
    """One compression + eigensolve. mode: 'abs' (log|lam|), 'positive', or 'half' (1/2 log of positive part)."""
    t0 = time.perf_counter()
    s = spectral_density(H, scheme, m, cap=sched.cap)
    thr = s.default_threshold(sched.threshold)
    try:
        if mode == "abs":
            val = normalized_log_abs_det(s, thr)
        elif mode == "half":
            val = 0.5 * normalized_log_det_positive(s, thr)
        else:
            val = normalized_log_det_positive(s, thr)
    except ZeroOperatorError:
        val = None
    ev = s.eigenvalues
    pos = ev[ev > thr]
    K_sq = float(H.l1_bound()) or 1.0
    lv = LevelResult(
        m=m,
        N_m=s.normalization,
        dim=int(ev.size),
        F_at_0=s(thr),
        norm_log_det=val,
        min_pos_eig=float(pos[0]) if pos.size else None,
        gap=gap_check(s, K_sq, thr),
        wall_ms=(time.perf_counter() - t0) * 1e3,
    )
    return lv, s


def _run(tasks, jobs: int):
    """Evaluate thunks, in order, optionally on a thread pool."""
    if jobs <= 1 or len(tasks) <= 1:
        return [t() for t in tasks]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda t: t(), tasks))


@dataclass(frozen=True)
class DetEstimate:
    levels: tuple
    direct: bool
    schedule: Schedule

    @property
    def log_values(self) -> list:
        return [lv.norm_log_det for lv in self.levels]

    @property
    def log_det(self) -> float:
        v = self.levels[-1].norm_log_det
        if v is None:
            raise ZeroOperatorError("operator is zero at the top level")
        return v

    @property
    def value(self) -> float:
        return math.exp(self.log_det)

    @property
    def slope(self) -> float | None:
        if len(self.levels) < 2:
            return None
        a, b = self.levels[-2].norm_log_det, self.levels[-1].norm_log_det
        if a is None or b is None:
            return None
        return b - a

    def as_dict(self, timing: bool = False) -> dict:
        return {
            "kind": "det_estimate",
            "direct": self.direct,
            "schedule": self.schedule.as_dict(),
            "log_det": _rnd(self.levels[-1].norm_log_det),
            "det": _rnd(math.exp(self.levels[-1].norm_log_det)) if self.levels[-1].norm_log_det is not None else None,
            "slope": _rnd(self.slope),
            "levels": [lv.as_dict(timing) for lv in self.levels],
        }


def fk_determinant(A: RingMatrix, sched: Schedule, *, direct: bool | None = None, jobs: int = 1) -> DetEstimate:
    """Fuglede-Kadison determinant of A along a schedule.

    By default Det(A) = Det(A*A)^(1/2). When A is self-adjoint the direct route
    exp(tau log|A|) is used instead (same limit, smaller boundary error);
    pass ``direct=False`` to force the squared route.
    """
    if not A.is_square:
        raise InputError(f"determinant of a non-square {A.shape} matrix")
    self_adjoint = A.is_self_adjoint()
    if direct is None:
        direct = self_adjoint
    if direct and not self_adjoint:
        raise InputError("direct evaluation needs a self-adjoint matrix")
    H, mode = (A, "abs") if direct else (A.adjoint() @ A, "half")
    tasks = [lambda m=m: _evaluate_level(H, sched.scheme, m, sched, mode)[0] for m in sched.levels]
    return DetEstimate(tuple(_run(tasks, jobs)), direct, sched)


def l2_betti(C: CochainComplex, sched: Schedule, *, jobs: int = 1) -> tuple:
    """b_j = F(kernel threshold) of the top-level compression of Delta_j."""
    require_valid(C)
    m = sched.top

    def one(j):
        if C.ranks[j] == 0:
            return 0.0
        s = spectral_density(laplacian(C, j), sched.scheme, m, cap=sched.cap)
        return s(s.default_threshold(sched.threshold))

    return tuple(_run([lambda j=j: one(j) for j in range(len(C.ranks))], jobs))


@dataclass(frozen=True)
class DeterminantClassDiagnostic:
    finite_estimate: float
    near_zero_mass: float
    verdict: str

    def as_dict(self) -> dict:
        return {"finite_estimate": _rnd(self.finite_estimate),
                "near_zero_mass": _rnd(self.near_zero_mass), "verdict": self.verdict}


def determinant_class_diagnostic(s: SpectralDensity, kernel_threshold: float | None = None) -> DeterminantClassDiagnostic:
    """Partial log-integral over (threshold, 1] and the mass crowding the threshold.

    Inconclusive when more than one eigenvalue sits in (thr, 10 thr), or when
    nothing lies above the threshold at all.
    """
    thr = s.default_threshold() if kernel_threshold is None else kernel_threshold
    ev = s.eigenvalues
    low = ev[(ev > thr) & (ev <= 1.0)]
    partial = float(np.sum(np.log(low))) / s.normalization if low.size else 0.0
    crowd = int(np.count_nonzero((ev > thr) & (ev < 10 * thr)))
    verdict = "pass"
    if crowd > 1 or not np.any(ev > thr):
        verdict = "inconclusive"
    return DeterminantClassDiagnostic(partial, crowd / s.normalization, verdict)


@dataclass(frozen=True)
class DegreeReport:
    degree: int
    rank: int
    betti: float
    levels: tuple
    determinant_class: DeterminantClassDiagnostic | None

    @property
    def zero_operator(self) -> bool:
        return self.rank == 0 or self.levels[-1].norm_log_det is None

    @property
    def log_det(self) -> float:
        """log Det(Delta_j^+) at the top level; 0 when there is no positive part."""
        return 0.0 if self.zero_operator else self.levels[-1].norm_log_det

    @property
    def exponent(self) -> float:
        return (-1) ** self.degree * self.degree / 2

    @property
    def contribution(self) -> float:
        return self.exponent * self.log_det

    @property
    def reliable(self) -> bool:
        return self.zero_operator or self.determinant_class.verdict == "pass"

    def as_dict(self, timing: bool = False) -> dict:
        return {
            "degree": self.degree,
            "rank": self.rank,
            "betti": _rnd(self.betti),
            "log_det": _rnd(self.log_det),
            "exponent": self.exponent,
            "contribution": _rnd(self.contribution),
            "zero_operator": self.zero_operator,
            "determinant_class": self.determinant_class.as_dict() if self.determinant_class else None,
            "levels": [lv.as_dict(timing) for lv in self.levels],
        }


@dataclass(frozen=True)
class TorsionReport:
    degrees: tuple
    schedule: Schedule
    euler_characteristic: int

    @property
    def log_torsion(self) -> float:
        return sum(d.contribution for d in self.degrees)

    @property
    def betti(self) -> tuple:
        return tuple(d.betti for d in self.degrees)

    @property
    def reliable(self) -> bool:
        return all(d.reliable for d in self.degrees)

    @property
    def acyclic(self) -> bool:
        return all(d.betti == 0 for d in self.degrees)

    def as_dict(self, timing: bool = False) -> dict:
        return {
            "kind": "torsion_report",
            "schedule": self.schedule.as_dict(),
            "log_torsion": _rnd(self.log_torsion),
            "reliable": self.reliable,
            "acyclic": self.acyclic,
            "betti": [_rnd(b) for b in self.betti],
            "euler_characteristic": self.euler_characteristic,
            "degrees": [d.as_dict(timing) for d in self.degrees],
        }


def l2_torsion(C: CochainComplex, sched: Schedule, *, jobs: int = 1) -> TorsionReport:
    """log phi = sum_j (-1)^j (j/2) log Det(Delta_j^+), with per-degree Betti estimates and diagnostics.

    With nonzero L^2 cohomology this is the determinant factor relative to the
    standard bases only; the harmonic volume element is not given a scalar.
    """
    require_valid(C)
    n = len(C.ranks)
    laps = [laplacian(C, j) for j in range(n)]
    tasks = []
    for j in range(n):
        if C.ranks[j] == 0:
            continue
        for m in sched.levels:
            tasks.append(lambda j=j, m=m: (j, _evaluate_level(laps[j], sched.scheme, m, sched, "positive")))
    results = _run(tasks, jobs)

    per_degree = {j: [] for j in range(n)}
    top_density = {}
    for j, (lv, s) in results:
        per_degree[j].append(lv)
        if lv.m == sched.top:
            top_density[j] = s
    degrees = []
    for j in range(n):
        if C.ranks[j] == 0:
            degrees.append(DegreeReport(j, 0, 0.0, (), None))
            continue
        s = top_density[j]
        thr = s.default_threshold(sched.threshold)
        degrees.append(DegreeReport(
            degree=j,
            rank=C.ranks[j],
            betti=s(thr),
            levels=tuple(per_degree[j]),
            determinant_class=determinant_class_diagnostic(s, thr),
        ))
    chi = sum((-1) ** j * r for j, r in enumerate(C.ranks))
    return TorsionReport(tuple(degrees), sched, chi)


# ---------------------------------------------------------------------------
# Whitehead determinant


@dataclass(frozen=True)
class Elementary:
    """Identity plus ``coeff`` at (i, j)."""
    i: int
    j: int
    coeff: RingElement


@dataclass(frozen=True)
class Unit:
    """Identity with +-g at (i, i)."""
    i: int
    g: tuple
    sign: int = 1


@dataclass(frozen=True)
class UnitProduct:
    """An invertible matrix over Z[G] written as a product of elementary and trivial-unit factors."""

    spec: GroupSpec
    size: int
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if self.size < 1:
            raise InputError("unit product needs size >= 1")
        for f in self.factors:
            if isinstance(f, Elementary):
                if f.i == f.j or not (0 <= f.i < self.size and 0 <= f.j < self.size):
                    raise InputError(f"bad elementary factor indices ({f.i},{f.j})")
                if f.coeff.spec != self.spec or not f.coeff.is_integral():
                    raise InputError("elementary coefficients must be integral elements of the same group ring")
            elif isinstance(f, Unit):
                if not 0 <= f.i < self.size or f.sign not in (1, -1):
                    raise InputError(f"bad unit factor {f}")
                groups.check_element(self.spec, f.g)
            else:
                raise InputError(f"factor {f!r} is neither elementary nor a trivial unit")

    def factor_matrix(self, f) -> RingMatrix:
        if isinstance(f, Elementary):
            return RingMatrix.elementary(self.spec, self.size, f.i, f.j, f.coeff)
        ent = {(k, k): RingElement.one(self.spec) for k in range(self.size)}
        ent[(f.i, f.i)] = RingElement.monomial(self.spec, groups.check_element(self.spec, f.g), f.sign)
        return RingMatrix(self.spec, self.size, self.size, ent)

    def expand(self) -> RingMatrix:
        out = RingMatrix.identity(self.spec, self.size)
        for f in self.factors:
            out = out @ self.factor_matrix(f)
        return out


def whitehead_det(U: UnitProduct, sched: Schedule, *, jobs: int = 1) -> DetEstimate:
    """Det(A*A)^(1/2) of the expanded unit product; the limit is 1 for amenable or residually finite G."""
    if not isinstance(U, UnitProduct):
        raise InputError("whitehead_det takes a UnitProduct (elementary and +-g factors)")
    return fk_determinant(U.expand(), sched, direct=False, jobs=jobs)


# ---------------------------------------------------------------------------
# Mapping cone identity


@dataclass(frozen=True)
class ConeCheck:
    residual: float
    log_source: float
    log_target: float
    log_cone: float
    harmonic_correction: float | None
    exact: bool

    def as_dict(self) -> dict:
        return {k: (_rnd(v) if not isinstance(v, bool) else v) for k, v in self.__dict__.items()}


def _harmonic_basis(L: RingMatrix, thr_rel: float):
    c = compress(L, "quotient", 1)
    if c.dim == 0:
        return np.zeros((0, 0))
    w, V = np.linalg.eigh(c.matrix)
    thr = thr_rel * max(1.0, float(np.max(np.abs(w))))
    return V[:, w <= thr]


def harmonic_log_det(f: ChainMap, j: int, thr_rel: float = DEFAULT_RELATIVE_THRESHOLD) -> float:
    """log Det_tau of f^* : H^j(C) -> H^j(C') between harmonic spaces (finite groups only)."""
    spec = f.source.spec
    q = spec.order
    U = _harmonic_basis(laplacian(f.source, j), thr_rel)
    V = _harmonic_basis(laplacian(f.target, j), thr_rel)
    if U.shape[1] != V.shape[1]:
        raise NotAcyclicError(f"f^* in degree {j} maps a {U.shape[1]}-dim space to a {V.shape[1]}-dim one")
    if U.shape[1] == 0:
        return 0.0
    F = compress(f.maps[j], "quotient", 1, spectral=False).matrix
    sign, logabs = np.linalg.slogdet(V.T @ F @ U)
    if sign == 0:
        raise NotAcyclicError(f"f^* is singular in degree {j}")
    return float(logabs) / q


def mapping_cone_check(f: ChainMap, sched: Schedule | None = None, *, exact: bool = False,
                       jobs: int = 1) -> ConeCheck:
    """|log phi_C - log phi_C' - log phi_{C_f}| (plus the f^* harmonic term in exact mode).

    Exact mode needs a finite group and evaluates everything on the regular
    representation; the cone must come out acyclic.
    """
    require_valid(f.source)
    require_valid(f.target)
    cone = mapping_cone(f)
    spec = f.source.spec
    if exact:
        if not spec.is_finite:
            raise InputError("exact mode needs a finite group")
        sched = Schedule("quotient", (1,), threshold=(sched.threshold if sched else DEFAULT_RELATIVE_THRESHOLD))
    elif sched is None:
        raise InputError("a schedule is required outside exact mode")
    t_src = l2_torsion(f.source, sched, jobs=jobs)
    t_tgt = l2_torsion(f.target, sched, jobs=jobs)
    t_cone = l2_torsion(cone, sched, jobs=jobs)
    correction = None
    if exact:
        if not t_cone.acyclic:
            raise NotAcyclicError(f"cone has L^2 Betti numbers {t_cone.betti}; f is not a homotopy equivalence")
        correction = sum((-1) ** j * harmonic_log_det(f, j, sched.threshold) for j in range(len(f.source.ranks)))
    lhs = t_src.log_torsion - t_tgt.log_torsion - (correction or 0.0)
    return ConeCheck(abs(lhs - t_cone.log_torsion), t_src.log_torsion, t_tgt.log_torsion,
                     t_cone.log_torsion, correction, exact)
