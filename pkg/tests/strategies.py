"""Hypothesis strategies for group-ring objects."""

from hypothesis import strategies as st

from l2lab import groups
from l2lab.groupring import RingElement, RingMatrix

SPECS = {
    "Z": groups.free_abelian(1),
    "Z2": groups.free_abelian(2),
    "Z/4": groups.finite_cyclic(4),
    "Z/2xZ/3": groups.finite_abelian(2, 3),
    "H3": groups.heisenberg(),
    "H3/3": groups.heisenberg_mod(3),
    "ZxZ/3": groups.direct_product(groups.free_abelian(1), groups.finite_cyclic(3)),
}


def group_elements(spec, radius=2):
    coord = st.integers(-radius, radius)
    return st.tuples(*([coord] * spec.width)).map(lambda g: groups.normalize(spec, g))


def ring_elements(spec, max_terms=4, radius=2, coeff=5):
    return st.dictionaries(group_elements(spec, radius), st.integers(-coeff, coeff),
                           max_size=max_terms).map(lambda d: RingElement(spec, d))


def ring_matrices(spec, rows, cols, **kw):
    return st.lists(ring_elements(spec, **kw), min_size=rows * cols, max_size=rows * cols).map(
        lambda els: RingMatrix(spec, rows, cols, {(i // cols, i % cols): a for i, a in enumerate(els)}))
