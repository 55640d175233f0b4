"""Concrete discrete groups: normal forms, word metric, Folner boxes, finite quotients.

Elements are plain tuples of ints. Supported kinds:

* ``free_abelian``   Z^d, coordinates are the vector.
* ``finite_cyclic``  Z/n, one residue.
* ``finite_abelian`` Z/n1 x ... x Z/nk given by invariant factors.
* ``heisenberg``     integer Heisenberg group, triples (a, b, c) with
  (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab').
* ``heisenberg_mod`` the same law on triples mod n (finite quotients of the above).
* ``product``        direct product, coordinates concatenated.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping

from .errors import InputError, SpecMismatchError

Element = tuple

KINDS = ("free_abelian", "finite_cyclic", "finite_abelian", "heisenberg", "heisenberg_mod", "product")


@dataclass(frozen=True)
class GroupSpec:
    kind: str
    d: int = 0
    n: int = 0
    invariant_factors: tuple = ()
    factors: tuple = ()

    def __post_init__(self):
        k = self.kind
        if k not in KINDS:
            raise InputError(f"unknown group kind {k!r}")
        if k == "free_abelian" and self.d < 1:
            raise InputError("free_abelian needs d >= 1")
        if k in ("finite_cyclic", "heisenberg_mod") and self.n < 1:
            raise InputError(f"{k} needs n >= 1")
        if k == "finite_abelian":
            if not self.invariant_factors or any(int(q) < 1 for q in self.invariant_factors):
                raise InputError("finite_abelian needs invariant factors, each >= 1")
        if k == "product":
            if not self.factors:
                raise InputError("product needs at least one factor")
            if not all(isinstance(f, GroupSpec) for f in self.factors):
                raise InputError("product factors must be GroupSpec instances")

    @property
    def width(self) -> int:
        """Number of integer coordinates in an element."""
        k = self.kind
        if k == "free_abelian":
            return self.d
        if k == "finite_cyclic":
            return 1
        if k == "finite_abelian":
            return len(self.invariant_factors)
        if k in ("heisenberg", "heisenberg_mod"):
            return 3
        return sum(f.width for f in self.factors)

    @property
    def is_finite(self) -> bool:
        if self.kind in ("free_abelian", "heisenberg"):
            return False
        if self.kind == "product":
            return all(f.is_finite for f in self.factors)
        return True

    @property
    def order(self) -> int | None:
        """Group order, or None for infinite groups."""
        k = self.kind
        if k == "finite_cyclic":
            return self.n
        if k == "finite_abelian":
            out = 1
            for q in self.invariant_factors:
                out *= q
            return out
        if k == "heisenberg_mod":
            return self.n ** 3
        if k == "product":
            out = 1
            for f in self.factors:
                o = f.order
                if o is None:
                    return None
                out *= o
            return out
        return None

    @property
    def identity(self) -> Element:
        return (0,) * self.width

    def __str__(self):
        k = self.kind
        if k == "free_abelian":
            return f"Z^{self.d}"
        if k == "finite_cyclic":
            return f"Z/{self.n}"
        if k == "finite_abelian":
            return " x ".join(f"Z/{q}" for q in self.invariant_factors)
        if k == "heisenberg":
            return "H3(Z)"
        if k == "heisenberg_mod":
            return f"H3(Z/{self.n})"
        return " x ".join(f"({f})" for f in self.factors)


def free_abelian(d: int) -> GroupSpec:
    return GroupSpec("free_abelian", d=d)


def finite_cyclic(n: int) -> GroupSpec:
    return GroupSpec("finite_cyclic", n=n)


def finite_abelian(*invariant_factors: int) -> GroupSpec:
    return GroupSpec("finite_abelian", invariant_factors=tuple(int(q) for q in invariant_factors))


def heisenberg() -> GroupSpec:
    return GroupSpec("heisenberg")


def heisenberg_mod(n: int) -> GroupSpec:
    return GroupSpec("heisenberg_mod", n=n)


def direct_product(*factors: GroupSpec) -> GroupSpec:
    return GroupSpec("product", factors=tuple(factors))


# ---------------------------------------------------------------------------
# element arithmetic


def _split(spec: GroupSpec, g: Element) -> Iterator[tuple[GroupSpec, Element]]:
    pos = 0
    for f in spec.factors:
        w = f.width
        yield f, g[pos:pos + w]
        pos += w


def check_element(spec: GroupSpec, g) -> Element:
    """Return ``g`` as a tuple in normal form, raising on a shape mismatch."""
    try:
        g = tuple(g)
    except TypeError:
        raise SpecMismatchError(f"element {g!r} is not a coordinate sequence") from None
    if len(g) != spec.width:
        raise SpecMismatchError(f"element {g} has {len(g)} coordinates, {spec} needs {spec.width}")
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in g):
        raise SpecMismatchError(f"element {g} must have integer coordinates")
    return normalize(spec, g)


def normalize(spec: GroupSpec, g: Element) -> Element:
    """Reduce residues into their canonical range. No shape checks."""
    k = spec.kind
    if k in ("free_abelian", "heisenberg"):
        return tuple(g)
    if k == "finite_cyclic":
        return (g[0] % spec.n,)
    if k == "finite_abelian":
        return tuple(x % q for x, q in zip(g, spec.invariant_factors))
    if k == "heisenberg_mod":
        n = spec.n
        return (g[0] % n, g[1] % n, g[2] % n)
    out: tuple = ()
    for f, part in _split(spec, g):
        out += normalize(f, part)
    return out


def compose(spec: GroupSpec, g: Element, h: Element) -> Element:
    """Group product g*h in normal form. Inputs are assumed normalized."""
    k = spec.kind
    if k == "free_abelian":
        return tuple(a + b for a, b in zip(g, h))
    if k == "finite_cyclic":
        return ((g[0] + h[0]) % spec.n,)
    if k == "finite_abelian":
        return tuple((a + b) % q for a, b, q in zip(g, h, spec.invariant_factors))
    if k == "heisenberg":
        return (g[0] + h[0], g[1] + h[1], g[2] + h[2] + g[0] * h[1])
    if k == "heisenberg_mod":
        n = spec.n
        return ((g[0] + h[0]) % n, (g[1] + h[1]) % n, (g[2] + h[2] + g[0] * h[1]) % n)
    out: tuple = ()
    pos = 0
    for f in spec.factors:
        w = f.width
        out += compose(f, g[pos:pos + w], h[pos:pos + w])
        pos += w
    return out


def inverse(spec: GroupSpec, g: Element) -> Element:
    k = spec.kind
    if k == "free_abelian":
        return tuple(-a for a in g)
    if k in ("finite_cyclic", "finite_abelian"):
        return normalize(spec, tuple(-a for a in g))
    if k in ("heisenberg", "heisenberg_mod"):
        a, b, c = g
        return normalize(spec, (-a, -b, a * b - c))
    out: tuple = ()
    for f, part in _split(spec, g):
        out += inverse(f, part)
    return out


def checked_compose(spec: GroupSpec, g, h) -> Element:
    return compose(spec, check_element(spec, g), check_element(spec, h))


def checked_inverse(spec: GroupSpec, g) -> Element:
    return inverse(spec, check_element(spec, g))


def generators(spec: GroupSpec) -> tuple[Element, ...]:
    """Symmetric standard generating set defining the word metric.

    The Heisenberg center (0,0,1) is deliberately not a generator.
    """
    k = spec.kind
    w = spec.width
    if k in ("heisenberg", "heisenberg_mod"):
        raw = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)]
    elif k == "product":
        raw = []
        pos = 0
        for f in spec.factors:
            for s in generators(f):
                raw.append((0,) * pos + s + (0,) * (w - pos - f.width))
            pos += f.width
    else:
        raw = []
        for i in range(w):
            for sign in (1, -1):
                e = [0] * w
                e[i] = sign
                raw.append(tuple(e))
    out = []
    ident = spec.identity
    for s in raw:
        s = normalize(spec, s)
        if s != ident and s not in out:
            out.append(s)
    return tuple(out)


def elements(spec: GroupSpec) -> list[Element]:
    """All elements of a finite group, in lexicographic coordinate order."""
    k = spec.kind
    if not spec.is_finite:
        raise InputError(f"{spec} is infinite")
    if k == "finite_cyclic":
        return [(i,) for i in range(spec.n)]
    if k == "finite_abelian":
        return list(itertools.product(*(range(q) for q in spec.invariant_factors)))
    if k == "heisenberg_mod":
        return list(itertools.product(range(spec.n), repeat=3))
    parts = [elements(f) for f in spec.factors]
    return [sum(combo, ()) for combo in itertools.product(*parts)]


# ---------------------------------------------------------------------------
# Folner exhaustion


@dataclass(frozen=True)
class FolnerSet:
    spec: GroupSpec
    m: int
    elements: tuple
    index: Mapping = field(repr=False, compare=False)

    @property
    def size(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g):
        return g in self.index


def _folner_elements(spec: GroupSpec, m: int) -> list[Element]:
    k = spec.kind
    if spec.is_finite and k != "product":
        return elements(spec)
    if k == "free_abelian":
        return list(itertools.product(range(m), repeat=spec.d))
    if k == "heisenberg":
        return list(itertools.product(range(m), range(m), range(m * m)))
    parts = [_folner_elements(f, m) for f in spec.factors]
    return [sum(combo, ()) for combo in itertools.product(*parts)]


def folner_set(spec: GroupSpec, m: int) -> FolnerSet:
    """Box Folner set X_m: {0..m-1}^d, whole group if finite, {0..m-1}^2 x {0..m^2-1} for H3."""
    if m < 1:
        raise InputError("Folner level m must be >= 1")
    elems = tuple(_folner_elements(spec, m))
    return FolnerSet(spec, m, elems, {g: i for i, g in enumerate(elems)})


def folner_size(spec: GroupSpec, m: int) -> int:
    """N_m without materializing the set."""
    k = spec.kind
    if spec.is_finite:
        return spec.order
    if k == "free_abelian":
        return m ** spec.d
    if k == "heisenberg":
        return m ** 4
    out = 1
    for f in spec.factors:
        out *= folner_size(f, m)
    return out


def _ball(spec: GroupSpec, center: Element, radius: int, gens) -> set:
    seen = {center}
    frontier = [center]
    for _ in range(radius):
        nxt = []
        for g in frontier:
            for s in gens:
                h = compose(spec, g, s)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


def boundary_fraction(spec: GroupSpec, m: int, delta: int = 1) -> Fraction:
    """#boundary / #X_m for the box X_m.

    The boundary is {g : d(g, X) < delta and d(g, complement) <= delta}; for
    delta = 1 these are the points of X adjacent to the complement.
    """
    if delta < 1:
        raise InputError("delta must be >= 1")
    X = folner_set(spec, m)
    if spec.is_finite:
        return Fraction(0)
    gens = generators(spec)
    # points at distance < delta from X
    near = set(X.elements)
    frontier = deque(X.elements)
    depth = {g: 0 for g in X.elements}
    while frontier:
        g = frontier.popleft()
        if depth[g] >= delta - 1:
            continue
        for s in gens:
            h = compose(spec, g, s)
            if h not in depth:
                depth[h] = depth[g] + 1
                near.add(h)
                frontier.append(h)
    count = 0
    for g in near:
        if any(h not in X.index for h in _ball(spec, g, delta, gens)):
            count += 1
    return Fraction(count, X.size)


# ---------------------------------------------------------------------------
# finite quotients


@dataclass(frozen=True)
class QuotientSpec:
    level: int
    source: GroupSpec
    target: GroupSpec

    def project(self, g: Element) -> Element:
        # every supported quotient is coordinatewise reduction
        return normalize(self.target, g)

    @property
    def order(self) -> int:
        return self.target.order


def _quotient_target(spec: GroupSpec, m: int) -> GroupSpec:
    k = spec.kind
    if spec.is_finite and k != "product":
        return spec
    if k == "free_abelian":
        return finite_cyclic(m) if spec.d == 1 else finite_abelian(*([m] * spec.d))
    if k == "heisenberg":
        return heisenberg_mod(m)
    if k == "product":
        return direct_product(*(_quotient_target(f, m) for f in spec.factors))
    raise InputError(f"no quotient tower for {spec}")


def quotient(spec: GroupSpec, m: int) -> QuotientSpec:
    """Level-m finite quotient: Z^d -> (Z/m)^d, H3 -> H3 mod m, finite groups fixed."""
    if m < 1:
        raise InputError("quotient level m must be >= 1")
    return QuotientSpec(m, spec, _quotient_target(spec, m))


# ---------------------------------------------------------------------------
# JSON form


def spec_to_json(spec: GroupSpec) -> dict:
    k = spec.kind
    if k == "free_abelian":
        return {"kind": k, "d": spec.d}
    if k in ("finite_cyclic", "heisenberg_mod"):
        return {"kind": k, "n": spec.n}
    if k == "finite_abelian":
        return {"kind": k, "invariant_factors": list(spec.invariant_factors)}
    if k == "heisenberg":
        return {"kind": k}
    return {"kind": k, "factors": [spec_to_json(f) for f in spec.factors]}


def spec_from_json(obj) -> GroupSpec:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InputError(f"group spec must be an object with a 'kind': {obj!r}")
    k = obj["kind"]
    try:
        if k == "free_abelian":
            return free_abelian(int(obj["d"]))
        if k == "finite_cyclic":
            return finite_cyclic(int(obj["n"]))
        if k == "heisenberg_mod":
            return heisenberg_mod(int(obj["n"]))
        if k == "finite_abelian":
            return finite_abelian(*obj["invariant_factors"])
        if k == "heisenberg":
            return heisenberg()
        if k == "product":
            return direct_product(*(spec_from_json(f) for f in obj["factors"]))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed group spec {obj!r}: {exc}") from None
    raise InputError(f"unknown group kind {k!r}")

