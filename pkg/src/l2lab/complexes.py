"""Finite cochain complexes of free based Q[G]-modules, Laplacians and mapping cones.

Indexing is cohomological: ``differentials[j]`` maps degree j to degree j+1
and has shape ``ranks[j+1] x ranks[j]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DimensionError, InvalidComplexError, NotAChainMapError, SpecMismatchError
from .groupring import RingElement, RingMatrix
from .groups import GroupSpec


@dataclass(frozen=True)
class Violation:
    degree: int
    entry: tuple
    value: RingElement

    def __str__(self):
        return (f"d^{self.degree + 1} o d^{self.degree} != 0 at entry {self.entry}: {self.value!r}")


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violation: Violation | None = None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class CochainComplex:
    spec: GroupSpec
    ranks: tuple
    differentials: tuple

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(int(r) for r in self.ranks))
        object.__setattr__(self, "differentials", tuple(self.differentials))
        if not self.ranks:
            raise DimensionError("a complex needs at least one degree")
        if any(r < 0 for r in self.ranks):
            raise DimensionError("ranks must be nonnegative")
        if len(self.differentials) != len(self.ranks) - 1:
            raise DimensionError(
                f"{len(self.ranks)} degrees need {len(self.ranks) - 1} differentials, got {len(self.differentials)}")
        for j, d in enumerate(self.differentials):
            if d.spec != self.spec:
                raise SpecMismatchError(f"d^{j} lives over {d.spec}, complex over {self.spec}")
            if d.shape != (self.ranks[j + 1], self.ranks[j]):
                raise DimensionError(f"d^{j} has shape {d.shape}, expected {(self.ranks[j + 1], self.ranks[j])}")

    @classmethod
    def from_chain(cls, spec, ranks: Sequence[int], boundaries: Sequence[RingMatrix]):
        """Reverse a chain complex C_0 <- C_1 <- ... <- C_N (boundaries[k] : C_{k+1} -> C_k)
        into the cochain complex with degree j = N - k."""
        ranks = list(ranks)[::-1]
        return cls(spec, tuple(ranks), tuple(reversed(list(boundaries))))

    @property
    def top_degree(self) -> int:
        return len(self.ranks) - 1

    def differential(self, j: int) -> RingMatrix:
        """d^j, with zero maps outside the stored range."""
        if 0 <= j < len(self.differentials):
            return self.differentials[j]
        rows = self.ranks[j + 1] if 0 <= j + 1 < len(self.ranks) else 0
        cols = self.ranks[j] if 0 <= j < len(self.ranks) else 0
        return RingMatrix.zeros(self.spec, rows, cols)

    def rank(self, j: int) -> int:
        return self.ranks[j] if 0 <= j < len(self.ranks) else 0


def validate(C: CochainComplex) -> ValidationReport:
    """Exact check that consecutive differentials compose to zero; reports the first failure."""
    for j in range(len(C.differentials) - 1):
        prod = C.differentials[j + 1] @ C.differentials[j]
        for ij, a in sorted(prod.items()):
            return ValidationReport(False, Violation(j, ij, a))
    return ValidationReport(True)


def require_valid(C: CochainComplex) -> CochainComplex:
    report = validate(C)
    if not report.ok:
        raise InvalidComplexError(f"invalid complex: {report.violation}", report)
    return C


def laplacian(C: CochainComplex, j: int) -> RingMatrix:
    """Delta_j = (d^j)* d^j + d^{j-1} (d^{j-1})*, exactly."""
    up = C.differential(j)
    down = C.differential(j - 1)
    out = up.adjoint() @ up
    return out + down @ down.adjoint()


def laplacians(C: CochainComplex) -> tuple:
    require_valid(C)
    return tuple(laplacian(C, j) for j in range(len(C.ranks)))


def euler_characteristic(C: CochainComplex) -> int:
    return sum((-1) ** j * r for j, r in enumerate(C.ranks))


@dataclass(frozen=True)
class ChainMap:
    """f : source -> target, maps[j] of shape target.ranks[j] x source.ranks[j]."""

    source: CochainComplex
    target: CochainComplex
    maps: tuple

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))
        s, t = self.source, self.target
        if s.spec != t.spec:
            raise SpecMismatchError("chain map between complexes over different groups")
        if len(s.ranks) != len(t.ranks) or len(self.maps) != len(s.ranks):
            raise DimensionError("chain map needs one component per degree on equal-length complexes")
        for j, f in enumerate(self.maps):
            if f.shape != (t.ranks[j], s.ranks[j]):
                raise DimensionError(f"f_{j} has shape {f.shape}, expected {(t.ranks[j], s.ranks[j])}")

    @classmethod
    def identity(cls, C: CochainComplex):
        return cls(C, C, tuple(RingMatrix.identity(C.spec, r) for r in C.ranks))

    @classmethod
    def zero(cls, source: CochainComplex, target: CochainComplex):
        return cls(source, target, tuple(RingMatrix.zeros(source.spec, t, s)
                                         for s, t in zip(source.ranks, target.ranks)))

    def commutes(self) -> bool:
        s, t = self.source, self.target
        for j in range(len(s.differentials)):
            if self.maps[j + 1] @ s.differentials[j] != t.differentials[j] @ self.maps[j]:
                return False
        return True


def mapping_cone(f: ChainMap) -> CochainComplex:
    """Cone with C_f^j = target^{j-1} (+) source^j for j = 0..N+1 and differential
    [[-d', f], [0, d]]."""
    if not f.commutes():
        raise NotAChainMapError("f o d != d' o f")
    src, tgt = f.source, f.target
    spec = src.spec
    n = len(src.ranks)
    ranks = [tgt.rank(j - 1) + src.rank(j) for j in range(n + 1)]
    diffs = []
    for j in range(n):
        # from target^{j-1} + source^j  to  target^j + source^{j+1}
        fj = f.maps[j]
        grid = [
            [-tgt.differential(j - 1), fj],
            [RingMatrix.zeros(spec, src.rank(j + 1), tgt.rank(j - 1)), src.differential(j)],
        ]
        diffs.append(RingMatrix.blocks(spec, grid))
    return CochainComplex(spec, tuple(ranks), tuple(diffs))


def relative_complex(inclusion: ChainMap) -> CochainComplex:
    """C(K, L) for an inclusion L -> K, modeled as the mapping cone."""
    return mapping_cone(inclusion)


def direct_sum(C: CochainComplex, D: CochainComplex) -> CochainComplex:
    if C.spec != D.spec or len(C.ranks) != len(D.ranks):
        raise DimensionError("direct sum needs complexes of equal length over one group")
    spec = C.spec
    diffs = []
    for j in range(len(C.differentials)):
        a, b = C.differentials[j], D.differentials[j]
        diffs.append(RingMatrix.blocks(spec, [
            [a, RingMatrix.zeros(spec, a.rows, b.cols)],
            [RingMatrix.zeros(spec, b.rows, a.cols), b],
        ]))
    return CochainComplex(spec, tuple(r + s for r, s in zip(C.ranks, D.ranks)), tuple(diffs))
