"""Reference complexes, chain maps and unit products used by the tests and the CLI docs.

``python -m l2lab.fixtures OUTDIR`` writes each one as a JSON input file.
"""

from __future__ import annotations

import sys
from pathlib import Path

from . import formats
from .complexes import ChainMap, CochainComplex, mapping_cone
from .groupring import RingElement, RingMatrix
from .groups import finite_cyclic, free_abelian, heisenberg
from .invariants import Elementary, UnitProduct


def _t(spec, i=0, k=1):
    return RingElement.generator(spec, i, k)


def _one(spec, c=1):
    return RingElement.one(spec, c)


def _s(a):
    return RingMatrix.scalar(a)


def circle():
    """0 -> R --(t-1)--> R -> 0 over Z[Z]."""
    Z = free_abelian(1)
    return CochainComplex(Z, (1, 1), (_s(_t(Z) - 1),))


def torus():
    """Cellular cochain complex of the 2-torus over Z[Z^2]."""
    Z2 = free_abelian(2)
    a, b = _t(Z2, 0) - 1, _t(Z2, 1) - 1
    d0 = RingMatrix.from_rows(Z2, [[a], [b]])
    d1 = RingMatrix.from_rows(Z2, [[-b, a]])
    return CochainComplex(Z2, (1, 2, 1), (d0, d1))


def zero_differentials(spec=None, ranks=(1, 1)):
    spec = spec or finite_cyclic(2)
    diffs = tuple(RingMatrix.zeros(spec, ranks[j + 1], ranks[j]) for j in range(len(ranks) - 1))
    return CochainComplex(spec, tuple(ranks), diffs)


def half_betti():
    """0 -> R --(1+t)--> R -> 0 over Z[Z/2]; both L^2 Betti numbers are 1/2."""
    Z2 = finite_cyclic(2)
    return CochainComplex(Z2, (1, 1), (_s(1 + _t(Z2)),))


def invalid_square():
    """(t-1) followed by (t-1): d o d != 0."""
    Z = free_abelian(1)
    d = _s(_t(Z) - 1)
    return CochainComplex(Z, (1, 1, 1), (d, d))


def heisenberg_line():
    """0 -> R --(x-1)--> R -> 0 over Z[H3]."""
    H = heisenberg()
    x = RingElement.monomial(H, (1, 0, 0))
    return CochainComplex(H, (1, 1), (_s(x - 1),))


def one_differential(a: RingElement):
    return CochainComplex(a.spec, (1, 1), (_s(a),))


def cone_fixtures():
    """Chain homotopy equivalences over Z/3 and Z/4 (name -> ChainMap)."""
    out = {}
    Z3, Z4 = finite_cyclic(3), finite_cyclic(4)
    t3, t4 = _t(Z3), _t(Z4)

    C = one_differential(1 - t3)
    out["identity_z3"] = ChainMap.identity(C)

    D = CochainComplex(Z4, (1,), ())
    out["mult_2_plus_t_z4"] = ChainMap(D, D, (_s(2 + t4),))

    out["unit_on_cohomology_z3"] = ChainMap(C, C, (_s(2 + t3), _s(2 + t3)))

    src = one_differential(2 + t3)
    tgt = one_differential((2 + t3) * (3 + t3 * t3))
    out["acyclic_rescale_z3"] = ChainMap(src, tgt, (_s(_one(Z3)), _s(3 + t3 * t3)))

    point = CochainComplex(Z4, (1, 0), (RingMatrix.zeros(Z4, 0, 1),))
    fat = CochainComplex(Z4, (2, 1), (RingMatrix.from_rows(Z4, [[2 + t4, _one(Z4)]]),))
    f0 = RingMatrix.from_rows(Z4, [[_one(Z4)], [-(2 + t4)]])
    out["collapse_z4"] = ChainMap(point, fat, (f0, RingMatrix.zeros(Z4, 1, 0)))

    E1 = RingMatrix.elementary(Z4, 2, 0, 1, 1 - t4)
    E2 = RingMatrix.elementary(Z4, 2, 1, 0, t4 * t4)
    E2inv = RingMatrix.elementary(Z4, 2, 1, 0, -(t4 * t4))
    d = RingMatrix.from_rows(Z4, [[1 + t4, 1 + t4], [_one(Z4, 0), 1 - t4]])
    rank2 = CochainComplex(Z4, (2, 2), (d,))
    rank2b = CochainComplex(Z4, (2, 2), (E1 @ d @ E2inv,))
    out["basis_change_z4"] = ChainMap(rank2, rank2b, (E2, E1))
    return out


def z_cone_fixture():
    """(1, t-3) from R--(t-2)-->R to R--(t-2)(t-3)-->R over Z[Z]; both sides L^2-acyclic."""
    Z = free_abelian(1)
    t = _t(Z)
    src = one_differential(t - 2)
    tgt = one_differential((t - 2) * (t - 3))
    return ChainMap(src, tgt, (_s(_one(Z)), _s(t - 3)))


def whitehead_z2():
    """E12(t1 + t2^-1) E21(1 - t1^-1) E12(2 t2) over Z[Z^2]."""
    Z2 = free_abelian(2)
    t1, t2 = _t(Z2, 0), _t(Z2, 1)
    return UnitProduct(Z2, 2, (
        Elementary(0, 1, t1 + _t(Z2, 1, -1)),
        Elementary(1, 0, 1 - _t(Z2, 0, -1)),
        Elementary(0, 1, t2 * 2),
    ))


COMPLEXES = {
    "circle": circle,
    "torus": torus,
    "zero": zero_differentials,
    "half_betti": half_betti,
    "heisenberg_line": heisenberg_line,
}


def write_all(outdir) -> list:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, build in COMPLEXES.items():
        p = outdir / f"{name}.json"
        formats.write_atomic(p, formats.dumps(formats.complex_to_file_obj(build())))
        written.append(p)
    p = outdir / "invalid.json"
    formats.write_atomic(p, formats.dumps(formats.complex_to_file_obj(invalid_square())))
    written.append(p)
    for name, f in cone_fixtures().items():
        p = outdir / f"cone_{name}.json"
        formats.write_atomic(p, formats.dumps(formats.complex_to_file_obj(mapping_cone(f))))
        written.append(p)
    Z = free_abelian(1)
    t = _t(Z)
    for name, a in {"three_plus_t": 3 + t + _t(Z, 0, -1), "t_minus_2": t - 2,
                    "lap_circle": 2 - t - _t(Z, 0, -1)}.items():
        p = outdir / f"{name}.json"
        formats.write_atomic(p, formats.dumps(formats.matrix_to_file_obj(_s(a))))
        written.append(p)
    Z4 = finite_cyclic(4)
    p = outdir / "two_plus_t_z4.json"
    formats.write_atomic(p, formats.dumps(formats.matrix_to_file_obj(_s(2 + _t(Z4)))))
    written.append(p)
    p = outdir / "whitehead_z2.json"
    formats.write_atomic(p, formats.dumps(formats.unit_product_to_file_obj(whitehead_z2())))
    written.append(p)
    return written


if __name__ == "__main__":
    for path in write_all(sys.argv[1] if len(sys.argv) > 1 else "fixtures"):
        print(path)
