import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from l2lab import fixtures, groups
from l2lab.complexes import ChainMap, euler_characteristic, mapping_cone
from l2lab.errors import InputError, NotAcyclicError, ZeroOperatorError
from l2lab.groupring import RingElement, RingMatrix
from l2lab.invariants import (Elementary, Schedule, Unit, UnitProduct, determinant_class_diagnostic, fk_determinant,
                              l2_betti, l2_torsion, mapping_cone_check, spectral_density, whitehead_det)
from l2lab.oracles import LaurentPolynomial, finite_group_det, finite_group_det_positive, mahler_measure
from l2lab.spectral import SpectralDensity
from strategies import SPECS, ring_elements

Z, Z2 = groups.free_abelian(1), groups.free_abelian(2)
t = RingElement.generator(Z, 0)
tinv = t.adjoint()
t1, t2 = RingElement.generator(Z2, 0), RingElement.generator(Z2, 1)
GOLDEN_SQ = (3 + math.sqrt(5)) / 2
SCHED_TOL = 0.02


def scalar(a):
    return RingMatrix.scalar(a)


def test_schedule_validation():
    for bad in (dict(scheme="random"), dict(levels=()), dict(levels=(20, 10)), dict(levels=(0, 1)),
                dict(threshold=0), dict(cap=0)):
        with pytest.raises(InputError):
            Schedule(**bad)
    assert Schedule().top == 40


def test_det_of_scalar_matrix():
    for spec, sched in ((Z2, Schedule("folner", (3, 6))), (groups.finite_cyclic(3), Schedule("quotient", (1, 2)))):
        est = fk_determinant(RingMatrix.identity(spec, 3, 2), sched)
        assert est.value == pytest.approx(8.0, rel=1e-14)
        assert all(v == pytest.approx(3 * math.log(2)) for v in est.log_values)


def test_det_matches_mahler_oracle():
    a = 3 + t + tinv
    oracle = mahler_measure(LaurentPolynomial.from_ring_element(a))
    assert oracle == pytest.approx(GOLDEN_SQ, rel=1e-12)
    assert fk_determinant(scalar(a), Schedule("quotient", (50, 100))).value == pytest.approx(oracle, rel=1e-10)
    est = fk_determinant(scalar(a), Schedule("folner", (50, 100, 200)))
    assert est.value == pytest.approx(oracle, rel=1e-3)
    assert est.direct


def test_det_of_non_self_adjoint():
    est = fk_determinant(scalar(t - 2), Schedule("quotient", (64,)))
    assert not est.direct
    assert est.value == pytest.approx(2.0, rel=1e-12)
    est = fk_determinant(scalar(t - 2), Schedule("folner", (100, 200)))
    assert est.value == pytest.approx(2.0, rel=1e-2)


def test_squared_route_same_limit():
    a = scalar(3 + t + tinv)
    direct = fk_determinant(a, Schedule("quotient", (40,)))
    squared = fk_determinant(a, Schedule("quotient", (40,)), direct=False)
    assert direct.direct and not squared.direct
    assert squared.value == pytest.approx(direct.value, rel=1e-12)
    with pytest.raises(InputError):
        fk_determinant(scalar(t), Schedule(), direct=True)


def test_det_rejects_non_square():
    with pytest.raises(InputError):
        fk_determinant(RingMatrix.zeros(Z, 1, 2), Schedule())


def test_det_zero_operator():
    est = fk_determinant(RingMatrix.zeros(Z, 1, 1), Schedule("folner", (5,)))
    with pytest.raises(ZeroOperatorError):
        est.log_det


def test_slope_reported():
    est = fk_determinant(scalar(3 + t + tinv), Schedule("folner", (10, 20)))
    assert est.slope == pytest.approx(est.log_values[1] - est.log_values[0])
    assert fk_determinant(scalar(3 + t + tinv), Schedule("folner", (10,))).slope is None


def test_betti_examples():
    assert l2_betti(fixtures.circle(), Schedule("folner", (20, 40))) == (0.0, 0.0)
    assert l2_betti(fixtures.zero_differentials(), Schedule("quotient", (1,))) == (1.0, 1.0)
    assert l2_betti(fixtures.half_betti(), Schedule("quotient", (1,))) == pytest.approx((0.5, 0.5), abs=1e-10)
    assert l2_betti(fixtures.torus(), Schedule("quotient", (8, 16))) == pytest.approx((1 / 256, 2 / 256, 1 / 256))
    assert l2_betti(fixtures.torus(), Schedule("folner", (10, 20))) == (0.0, 0.0, 0.0)


@pytest.mark.parametrize("name", sorted(fixtures.COMPLEXES))
def test_euler_identity(name):
    C = fixtures.COMPLEXES[name]()
    sched = Schedule("folner", (4,)) if C.spec.kind == "heisenberg" else Schedule("folner", (20,))
    b = l2_betti(C, sched)
    assert abs(sum((-1) ** j * x for j, x in enumerate(b)) - euler_characteristic(C)) <= SCHED_TOL * len(b)


def test_determinant_class_examples():
    s = spectral_density(scalar(3 + t + tinv), "folner", 50)
    d = determinant_class_diagnostic(s)
    assert d.verdict == "pass" and d.near_zero_mass == 0 and d.finite_estimate == 0
    d = determinant_class_diagnostic(spectral_density(scalar(2 - t - tinv), "quotient", 64))
    assert d.verdict == "pass" and -10 < d.finite_estimate < 0
    d = determinant_class_diagnostic(spectral_density(RingMatrix.zeros(Z, 1, 1), "folner", 5))
    assert d.verdict == "inconclusive"


def test_determinant_class_crowding():
    s = SpectralDensity(np.array([0.0, 2e-10, 5e-10, 1.0]), 4, 1)
    assert determinant_class_diagnostic(s, 1e-10).verdict == "inconclusive"


def test_torsion_circle():
    rep = l2_torsion(fixtures.circle(), Schedule("folner", (100, 200, 400)))
    assert abs(rep.log_torsion) <= 0.02
    assert rep.acyclic and rep.reliable
    assert rep.betti == (0.0, 0.0)


def test_torsion_zero_differentials():
    rep = l2_torsion(fixtures.zero_differentials(ranks=(1, 2, 1)), Schedule("quotient", (1,)))
    assert rep.log_torsion == 0
    assert rep.betti == (1.0, 2.0, 1.0)
    assert rep.reliable and not rep.acyclic


@pytest.mark.parametrize("spec,build", [
    (groups.finite_cyclic(4), lambda u: 2 + u),
    (groups.finite_cyclic(5), lambda u: 3 - u * u + 2 * u),
    (groups.heisenberg_mod(3), lambda u: 4 + u),
])
def test_torsion_one_differential_finite(spec, build):
    a = build(RingElement.generator(spec, 0))
    rep = l2_torsion(fixtures.one_differential(a), Schedule("quotient", (1,)))
    assert rep.log_torsion == pytest.approx(-math.log(finite_group_det(scalar(a))), rel=1e-10, abs=1e-12)


def test_torsion_total_is_sum_of_contributions():
    rep = l2_torsion(mapping_cone(fixtures.cone_fixtures()["basis_change_z4"]), Schedule("quotient", (1,)))
    assert rep.log_torsion == sum(d.contribution for d in rep.degrees)
    assert [d.exponent for d in rep.degrees] == [0, -0.5, 1.0]
    d = rep.as_dict()
    assert d["kind"] == "torsion_report" and len(d["degrees"]) == 3


def test_torsion_unreliable_flag():
    # an eigenvalue cluster just above the kernel threshold makes degree 0 inconclusive
    C = fixtures.one_differential(RingElement.one(Z, Fraction(3, 100000)))
    rep = l2_torsion(C, Schedule("folner", (3,)))
    assert not rep.reliable


def test_whitehead_trivial_factors():
    E = UnitProduct(Z2, 2, (Elementary(0, 1, t1 + t2),))
    assert whitehead_det(E, Schedule("quotient", (5, 10))).log_det == pytest.approx(0, abs=1e-12)
    D = UnitProduct(Z2, 2, (Unit(0, (1, 0)),))
    for sched in (Schedule("folner", (5, 10)), Schedule("quotient", (5,))):
        assert whitehead_det(D, sched).log_det == pytest.approx(0, abs=1e-12)


def test_whitehead_trend():
    est = whitehead_det(fixtures.whitehead_z2(), Schedule("folner", (5, 10, 20)))
    logs = [abs(v) for v in est.log_values]
    assert logs[0] > logs[1] > logs[2]
    assert whitehead_det(fixtures.whitehead_z2(), Schedule("quotient", (5, 10))).log_det == pytest.approx(0, abs=1e-12)


def test_unit_product_validation():
    half = RingElement(Z2, {(0, 0): Fraction(1, 2)})
    for bad in (lambda: UnitProduct(Z2, 2, (Elementary(0, 0, t1),)),
                lambda: UnitProduct(Z2, 2, (Elementary(0, 1, half),)),
                lambda: UnitProduct(Z2, 2, (Unit(0, (1, 0), 2),)),
                lambda: UnitProduct(Z2, 2, ("E12",)),
                lambda: UnitProduct(Z2, 0, ())):
        with pytest.raises(InputError):
            bad()
    with pytest.raises(InputError):
        whitehead_det(RingMatrix.identity(Z2, 2), Schedule())


def test_unit_product_expands_in_order():
    U = UnitProduct(Z, 2, (Elementary(0, 1, t), Unit(1, (2,), -1)))
    want = RingMatrix.from_rows(Z, [[RingElement.one(Z), -(t ** 3)], [RingElement.zero(Z), -(t ** 2)]])
    assert U.expand() == want


def test_multiplicativity():
    a = 3 + t1 + t1.adjoint()
    b = 5 + t1 + t1.adjoint() + t2 + t2.adjoint()
    sched = Schedule("folner", (10, 20, 40))
    lhs = fk_determinant(scalar(a * b), sched).log_det
    rhs = fk_determinant(scalar(a), sched).log_det + fk_determinant(scalar(b), sched).log_det
    assert abs(lhs - rhs) <= 2 * SCHED_TOL


@settings(max_examples=20, deadline=None)
@given(ring_elements(SPECS["Z2"], max_terms=3, radius=1), ring_elements(SPECS["Z2"], max_terms=3, radius=1))
def test_adjoint_invariance(a, b):
    A = RingMatrix.from_rows(Z2, [[a, b], [b * a, 1 + a]])
    sched = Schedule("quotient", (11,))
    try:
        x = fk_determinant(A, sched).log_det
    except ZeroOperatorError:
        return
    assert fk_determinant(A.adjoint(), sched).log_det == pytest.approx(x, abs=1e-9)


@pytest.mark.parametrize("name", ["Z/4", "Z/2xZ/3", "H3/3"])
@settings(max_examples=15, deadline=None)
@given(data=st.data())
def test_finite_group_exactness(name, data):
    spec = SPECS[name]
    a = data.draw(ring_elements(spec, max_terms=4))
    b = data.draw(ring_elements(spec, max_terms=4))
    A = RingMatrix.from_rows(spec, [[a + 5, b], [b.adjoint(), a.adjoint() - 7]])
    want, kernel = finite_group_det_positive(A)
    if kernel:
        return
    for m in (1, 3):
        assert fk_determinant(A, Schedule("quotient", (m,))).value == pytest.approx(want, rel=1e-10)


def test_jobs_do_not_change_results():
    C = fixtures.torus()
    sched = Schedule("folner", (5, 10, 15))
    assert l2_torsion(C, sched, jobs=1).as_dict() == l2_torsion(C, sched, jobs=3).as_dict()


@pytest.mark.parametrize("name", sorted(fixtures.cone_fixtures()))
def test_cone_check_exact(name):
    res = mapping_cone_check(fixtures.cone_fixtures()[name], exact=True)
    assert res.residual <= 1e-9


def test_cone_mult_by_two_plus_t():
    res = mapping_cone_check(fixtures.cone_fixtures()["mult_2_plus_t_z4"], exact=True)
    assert res.log_cone == pytest.approx(-0.25 * math.log(15), rel=1e-12)


def test_cone_check_over_z_with_schedule():
    res = mapping_cone_check(fixtures.z_cone_fixture(), Schedule("folner", (100, 200, 400)))
    assert res.residual <= SCHED_TOL
    assert res.harmonic_correction is None


def test_cone_check_rejects_non_equivalence():
    C = fixtures.one_differential(1 - RingElement.generator(groups.finite_cyclic(3), 0))
    with pytest.raises(NotAcyclicError):
        mapping_cone_check(ChainMap.zero(C, C), exact=True)
    with pytest.raises(InputError):
        mapping_cone_check(fixtures.z_cone_fixture(), exact=True)
    with pytest.raises(InputError):
        mapping_cone_check(fixtures.z_cone_fixture())
