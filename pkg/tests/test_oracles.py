import math
import warnings

import numpy as np
import pytest

from l2lab import groups
from l2lab.errors import InputError, SingularOperatorError
from l2lab.groupring import RingElement, RingMatrix
from l2lab.invariants import compress
from l2lab.oracles import (LaurentPolynomial, LowPrecisionWarning, finite_group_det, finite_group_det_positive,
                           jensen_mahler, mahler_measure, regular_representation)

GOLDEN_SQ = (3 + math.sqrt(5)) / 2
# closed form for M(1 + x + y) in terms of L(chi_-3, 2)
SMYTH = 1.3813564445184977


def poly(*terms):
    return LaurentPolynomial.from_terms(terms)


@pytest.mark.parametrize("p,want", [
    (poly([[1], 1], [[0], -2]), 2.0),
    (poly([[1], 1], [[0], -1]), 1.0),
    (poly([[2], 1], [[1], 3], [[0], 1]), GOLDEN_SQ),
    (poly([[0], 3], [[1], 1], [[-1], 1]), GOLDEN_SQ),
    (poly([[0], 5, 2]), 2.5),
])
def test_mahler_one_variable(p, want):
    assert mahler_measure(p) == pytest.approx(want, rel=1e-12)
    assert jensen_mahler(p) == pytest.approx(want, rel=1e-12)


def test_mahler_two_variables():
    p = poly([[0, 0], 1], [[1, 0], 1], [[0, 1], 1])
    assert mahler_measure(p, grid=1000) == pytest.approx(SMYTH, rel=1e-6)


def test_mahler_product_of_separate_variables():
    p = poly([[0, 0], 3], [[1, 0], 1], [[-1, 0], 1])
    q = poly([[0, 1], 1], [[0, 0], -2])
    assert mahler_measure(p * q, grid=256) == pytest.approx(2 * GOLDEN_SQ, rel=1e-12)


@pytest.mark.parametrize("p,q", [
    (poly([[1], 1], [[0], -2]), poly([[0], 3], [[1], 1], [[-1], 1])),
    (poly([[1], 2], [[0], 1], [[-2], 1]), poly([[3], 1], [[0], -5])),
    (poly([[1, 0], 1], [[0, 1], 1], [[0, 0], 3]), poly([[1, 1], 1], [[0, 0], -4])),
])
def test_mahler_multiplicative(p, q):
    grid = 4096 if p.d == 1 else 512
    assert mahler_measure(p * q, grid) == pytest.approx(mahler_measure(p, grid) * mahler_measure(q, grid), rel=1e-6)


@pytest.mark.parametrize("p", [
    poly([[0], 3], [[1], 1], [[-1], 1]),
    poly([[1], 1], [[0], -2]),
    poly([[1, 0], 1], [[0, 1], 1], [[0, 0], 3]),
])
def test_mahler_grid_refinement(p):
    assert abs(mahler_measure(p, 128) - mahler_measure(p, 256)) < 1e-8


def test_mahler_jensen_switch_on_circle_roots():
    # (t-1)(t+1) vanishes on the grid; Jensen gives the exact answer
    p = poly([[2], 1], [[0], -1])
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert mahler_measure(p) == pytest.approx(1.0, rel=1e-12)


def test_mahler_zero_samples_warn():
    p = poly([[0, 0], 1], [[1, 0], 1], [[0, 1], 1])
    with pytest.warns(LowPrecisionWarning):
        v = mahler_measure(p, grid=96)
    assert v == pytest.approx(SMYTH, rel=1e-3)


def test_mahler_errors():
    with pytest.raises(InputError):
        mahler_measure(poly([[1], 1]), grid=32)
    with pytest.raises(InputError):
        mahler_measure(LaurentPolynomial(1, {}))
    with pytest.raises(InputError):
        poly([[1], 1]) * poly([[1, 0], 1])


def test_from_ring_element():
    Z = groups.free_abelian(1)
    p = LaurentPolynomial.from_ring_element(RingElement.generator(Z, 0) - 2)
    assert p.support == {(1,): 1, (0,): -2}
    with pytest.raises(InputError):
        LaurentPolynomial.from_ring_element(RingElement.one(groups.finite_cyclic(2)))


def test_regular_representation_circulant():
    Z4 = groups.finite_cyclic(4)
    u = RingElement.generator(Z4, 0)
    R = regular_representation(RingMatrix.scalar(2 + u))
    want = 2 * np.eye(4) + np.roll(np.eye(4), 1, axis=1)
    assert np.array_equal(R, want)


def test_regular_representation_matches_compressions():
    # two independent assemblies of the same operator
    H = groups.heisenberg_mod(3)
    x, y = RingElement.monomial(H, (1, 0, 0)), RingElement.monomial(H, (0, 1, 0))
    A = RingMatrix.from_rows(H, [[2 + x, y * x], [x - y, RingElement.one(H, 3)]])
    R = regular_representation(A)
    assert np.array_equal(R, compress(A, "folner", 1, spectral=False).matrix)
    assert np.array_equal(R, compress(A, "quotient", 1, spectral=False).matrix)


def test_finite_group_det_examples():
    Z4 = groups.finite_cyclic(4)
    u = RingElement.generator(Z4, 0)
    assert finite_group_det(RingMatrix.scalar(2 + u)) == pytest.approx(15 ** 0.25, rel=1e-14)
    assert finite_group_det(RingMatrix.identity(Z4, 3)) == pytest.approx(1.0, rel=1e-15)
    assert finite_group_det(RingMatrix.scalar(RingElement.one(Z4, 3))) == pytest.approx(3.0, rel=1e-15)
    # unit u has |det| = 1
    assert finite_group_det(RingMatrix.scalar(u)) == pytest.approx(1.0, rel=1e-15)


def test_finite_group_det_singular():
    Z2 = groups.finite_cyclic(2)
    a = RingMatrix.scalar(1 + RingElement.generator(Z2, 0))
    with pytest.raises(SingularOperatorError):
        finite_group_det(a)
    det, kernel = finite_group_det_positive(a)
    assert det == pytest.approx(math.sqrt(2), rel=1e-14)
    assert kernel == 0.5


def test_finite_group_det_needs_finite_square():
    with pytest.raises(InputError):
        finite_group_det(RingMatrix.identity(groups.free_abelian(1), 1))
    with pytest.raises(InputError):
        finite_group_det(RingMatrix.zeros(groups.finite_cyclic(3), 1, 2))
