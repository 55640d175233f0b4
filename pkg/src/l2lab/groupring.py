"""Exact arithmetic in Q[G]: finitely supported elements and matrices over them.

Coefficients are ``fractions.Fraction``; nothing here touches floating point.
Matrices act on column vectors, so ``(A @ B)[i, j] = sum_k A[i, k] * B[k, j]``
with the group-ring product in that order.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

from . import groups
from .errors import DimensionError, InputError, SpecMismatchError
from .groups import GroupSpec


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)) and not isinstance(c, bool):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise InputError(f"coefficient {c!r} is not an exact rational")


class RingElement:
    """Element of Q[G] stored as {group element: nonzero Fraction}."""

    __slots__ = ("spec", "_terms", "_hash")

    def __init__(self, spec: GroupSpec, terms: Mapping | Iterable = (), *, _trusted: bool = False):
        self.spec = spec
        if _trusted:
            self._terms = terms
        else:
            acc: dict = defaultdict(Fraction)
            items = terms.items() if isinstance(terms, Mapping) else terms
            for g, c in items:
                acc[groups.check_element(spec, g)] += _frac(c)
            self._terms = {g: c for g, c in acc.items() if c != 0}
        self._hash = None

    # construction helpers
    @classmethod
    def zero(cls, spec):
        return cls(spec, {}, _trusted=True)

    @classmethod
    def one(cls, spec, coeff=1):
        return cls(spec, {spec.identity: coeff})

    @classmethod
    def monomial(cls, spec, g, coeff=1):
        return cls(spec, {tuple(g): coeff})

    @classmethod
    def generator(cls, spec, i: int, power: int = 1):
        """t_i^power for the i-th coordinate direction (Z^d, Z/n, ...)."""
        g = [0] * spec.width
        g[i] = power
        return cls(spec, {tuple(g): 1})

    # mapping-like access
    @property
    def terms(self) -> Mapping:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self):
        return self._terms.keys()

    def coeff(self, g) -> Fraction:
        return self._terms.get(tuple(g), Fraction(0))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _check(self, other: "RingElement"):
        if not isinstance(other, RingElement):
            raise TypeError(f"expected RingElement, got {type(other).__name__}")
        if other.spec != self.spec:
            raise SpecMismatchError(f"group mismatch: {self.spec} vs {other.spec}")

    def _coerce(self, other):
        if isinstance(other, RingElement):
            self._check(other)
            return other
        return RingElement.one(self.spec, _frac(other))

    def __add__(self, other):
        other = self._coerce(other)
        acc = dict(self._terms)
        for g, c in other._terms.items():
            v = acc.get(g, 0) + c
            if v:
                acc[g] = v
            else:
                acc.pop(g, None)
        return RingElement(self.spec, acc, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.spec, {g: -c for g, c in self._terms.items()}, _trusted=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "RingElement":
        c = _frac(c)
        if c == 0:
            return RingElement.zero(self.spec)
        return RingElement(self.spec, {g: c * v for g, v in self._terms.items()}, _trusted=True)

    def __mul__(self, other):
        if not isinstance(other, RingElement):
            return self.scale(other)
        self._check(other)
        spec = self.spec
        compose = groups.compose
        acc: dict = {}
        for g, a in self._terms.items():
            for h, b in other._terms.items():
                k = compose(spec, g, h)
                acc[k] = acc.get(k, 0) + a * b
        return RingElement(spec, {g: c for g, c in acc.items() if c != 0}, _trusted=True)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            raise InputError("negative powers are not defined in the group ring")
        out = RingElement.one(self.spec)
        for _ in range(k):
            out = out * self
        return out

    def adjoint(self) -> "RingElement":
        """a*(g) = a(g^-1) (real coefficients)."""
        inv = groups.inverse
        spec = self.spec
        return RingElement(spec, {inv(spec, g): c for g, c in self._terms.items()}, _trusted=True)

    def trace(self) -> Fraction:
        """von Neumann trace: the coefficient of the identity."""
        return self._terms.get(self.spec.identity, Fraction(0))

    def l1_norm(self) -> Fraction:
        return sum((abs(c) for c in self._terms.values()), Fraction(0))

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._terms.values())

    def __eq__(self, other):
        if isinstance(other, RingElement):
            return self.spec == other.spec and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == RingElement.one(self.spec, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.spec, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for g in sorted(self._terms):
            c = self._terms[g]
            parts.append(f"{c}*{list(g)}" if g != self.spec.identity else str(c))
        return " + ".join(parts)


def ring_add(a: RingElement, b: RingElement) -> RingElement:
    return a + b


def ring_mul(a: RingElement, b: RingElement) -> RingElement:
    return a * b


def adjoint(a: RingElement) -> RingElement:
    return a.adjoint()


def trace_tau(a: RingElement) -> Fraction:
    return a.trace()


class RingMatrix:
    """rows x cols matrix over Q[G], stored sparsely.

    Zero-sized dimensions are allowed so that complexes may have rank-0 modules.
    """

    __slots__ = ("spec", "rows", "cols", "_entries")

    def __init__(self, spec: GroupSpec, rows: int, cols: int, entries: Mapping | None = None):
        if rows < 0 or cols < 0:
            raise DimensionError("matrix dimensions must be nonnegative")
        self.spec = spec
        self.rows = rows
        self.cols = cols
        clean = {}
        for (i, j), a in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise DimensionError(f"entry ({i},{j}) outside a {rows}x{cols} matrix")
            if not isinstance(a, RingElement):
                a = RingElement.one(spec, a)
            if a.spec != spec:
                raise SpecMismatchError(f"entry ({i},{j}) lives over {a.spec}, matrix over {spec}")
            if a:
                clean[(i, j)] = a
        self._entries = clean

    @classmethod
    def zeros(cls, spec, rows, cols):
        return cls(spec, rows, cols)

    @classmethod
    def identity(cls, spec, n, scalar=1):
        return cls(spec, n, n, {(i, i): RingElement.one(spec, scalar) for i in range(n)})

    @classmethod
    def from_rows(cls, spec, rows: list):
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise DimensionError("ragged rows")
        ent = {}
        for i, row in enumerate(rows):
            for j, a in enumerate(row):
                ent[(i, j)] = a if isinstance(a, RingElement) else RingElement.one(spec, a)
        return cls(spec, r, c, ent)

    @classmethod
    def scalar(cls, a: RingElement):
        return cls(a.spec, 1, 1, {(0, 0): a})

    @classmethod
    def elementary(cls, spec, n: int, i: int, j: int, a: RingElement):
        """Identity plus ``a`` at (i, j), i != j."""
        if i == j:
            raise InputError("elementary matrix needs i != j")
        ent = {(k, k): RingElement.one(spec) for k in range(n)}
        ent[(i, j)] = a
        return cls(spec, n, n, ent)

    @classmethod
    def blocks(cls, spec, grid: list):
        """Assemble from a 2-D list of RingMatrix blocks (row heights and column widths must agree)."""
        heights = [row[0].rows for row in grid]
        widths = [b.cols for b in grid[0]]
        ent = {}
        r0 = 0
        for bi, row in enumerate(grid):
            c0 = 0
            for bj, blk in enumerate(row):
                if blk.rows != heights[bi] or blk.cols != widths[bj]:
                    raise DimensionError("block sizes do not line up")
                for (i, j), a in blk._entries.items():
                    ent[(r0 + i, c0 + j)] = a
                c0 += widths[bj]
            r0 += heights[bi]
        return cls(spec, sum(heights), sum(widths), ent)

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def is_square(self):
        return self.rows == self.cols

    def __getitem__(self, ij) -> RingElement:
        return self._entries.get(ij) or RingElement.zero(self.spec)

    def items(self):
        return self._entries.items()

    def is_zero(self):
        return not self._entries

    def _check(self, other):
        if not isinstance(other, RingMatrix):
            raise TypeError(f"expected RingMatrix, got {type(other).__name__}")
        if other.spec != self.spec:
            raise SpecMismatchError(f"group mismatch: {self.spec} vs {other.spec}")

    def __add__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        ent = dict(self._entries)
        for ij, a in other._entries.items():
            ent[ij] = ent[ij] + a if ij in ent else a
        return RingMatrix(self.spec, self.rows, self.cols, ent)

    def __neg__(self):
        return RingMatrix(self.spec, self.rows, self.cols, {ij: -a for ij, a in self._entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return RingMatrix(self.spec, self.rows, self.cols, {ij: a.scale(c) for ij, a in self._entries.items()})

    def __matmul__(self, other):
        self._check(other)
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        by_row = defaultdict(list)
        for (k, j), b in other._entries.items():
            by_row[k].append((j, b))
        acc: dict = {}
        for (i, k), a in self._entries.items():
            for j, b in by_row.get(k, ()):
                p = a * b
                acc[(i, j)] = acc[(i, j)] + p if (i, j) in acc else p
        return RingMatrix(self.spec, self.rows, other.cols, acc)

    def adjoint(self) -> "RingMatrix":
        return RingMatrix(self.spec, self.cols, self.rows,
                          {(j, i): a.adjoint() for (i, j), a in self._entries.items()})

    def trace(self) -> Fraction:
        if not self.is_square:
            raise DimensionError(f"trace of a non-square {self.shape} matrix")
        return sum((self[(i, i)].trace() for i in range(self.rows)), Fraction(0))

    def is_self_adjoint(self) -> bool:
        return self.is_square and self == self.adjoint()

    def is_integral(self) -> bool:
        return all(a.is_integral() for a in self._entries.values())

    def l1_bound(self) -> Fraction:
        """Max column sum of entrywise l1 norms; bounds the operator norm of any self-adjoint compression."""
        cols = defaultdict(Fraction)
        for (_, j), a in self._entries.items():
            cols[j] += a.l1_norm()
        return max(cols.values(), default=Fraction(0))

    def union_support(self) -> set:
        out = set()
        for a in self._entries.values():
            out.update(a.support())
        return out

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "RingMatrix":
        rows, cols = list(rows), list(cols)
        rmap = {r: i for i, r in enumerate(rows)}
        cmap = {c: j for j, c in enumerate(cols)}
        ent = {(rmap[i], cmap[j]): a for (i, j), a in self._entries.items() if i in rmap and j in cmap}
        return RingMatrix(self.spec, len(rows), len(cols), ent)

    def __eq__(self, other):
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return self.spec == other.spec and self.shape == other.shape and self._entries == other._entries

    def __hash__(self):
        return hash((self.spec, self.shape, frozenset(self._entries.items())))

    def __repr__(self):
        return f"RingMatrix({self.rows}x{self.cols} over {self.spec}, {len(self._entries)} nonzero)"


def matrix_mul(A: RingMatrix, B: RingMatrix) -> RingMatrix:
    return A @ B


def matrix_adjoint(A: RingMatrix) -> RingMatrix:
    return A.adjoint()


def matrix_trace_tau(A: RingMatrix) -> Fraction:
    return A.trace()


# ---------------------------------------------------------------------------
# JSON forms: an element is a list of [coords, numerator, denominator]


def element_to_json(a: RingElement) -> list:
    return [[list(g), c.numerator, c.denominator] for g, c in sorted(a.items())]


def element_from_json(spec: GroupSpec, obj) -> RingElement:
    if not isinstance(obj, list):
        raise InputError(f"ring element must be a list of [coords, num, den]: {obj!r}")
    terms = []
    for term in obj:
        if not isinstance(term, list) or len(term) not in (2, 3):
            raise InputError(f"bad ring element term {term!r}")
        coords, num = term[0], term[1]
        den = term[2] if len(term) == 3 else 1
        if not isinstance(num, int) or not isinstance(den, int) or den == 0:
            raise InputError(f"bad coefficient in term {term!r}")
        terms.append((coords, Fraction(num, den)))
    return RingElement(spec, terms)


def matrix_to_json(A: RingMatrix) -> dict:
    return {
        "rows": A.rows,
        "cols": A.cols,
        "entries": [[i, j, element_to_json(a)] for (i, j), a in sorted(A.items())],
    }


def matrix_from_json(spec: GroupSpec, obj) -> RingMatrix:
    try:
        rows, cols, entries = int(obj["rows"]), int(obj["cols"]), obj.get("entries", [])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed matrix object: {exc}") from None
    ent = {}
    for e in entries:
        if not isinstance(e, list) or len(e) != 3:
            raise InputError(f"matrix entry must be [i, j, element]: {e!r}")
        i, j, el = e
        if (i, j) in ent:
            raise InputError(f"duplicate matrix entry ({i},{j})")
        ent[(i, j)] = element_from_json(spec, el)
    return RingMatrix(spec, rows, cols, ent)
