"""L^2 invariants (von Neumann traces, Fuglede-Kadison determinants, L^2 Betti
numbers, L^2 torsion) of finite cochain complexes over group rings of amenable
and residually finite groups, estimated on Folner boxes or finite quotients."""

from .complexes import ChainMap, CochainComplex, euler_characteristic, laplacians, mapping_cone, validate
from .groupring import RingElement, RingMatrix
from .groups import (
    GroupSpec,
    direct_product,
    finite_abelian,
    finite_cyclic,
    folner_set,
    free_abelian,
    heisenberg,
    heisenberg_mod,
    quotient,
)
from .invariants import (
    Elementary,
    Schedule,
    Unit,
    UnitProduct,
    determinant_class_diagnostic,
    fk_determinant,
    l2_betti,
    l2_torsion,
    mapping_cone_check,
    whitehead_det,
)
from .oracles import LaurentPolynomial, finite_group_det, mahler_measure

__version__ = "0.1.0"

__all__ = [
    "ChainMap", "CochainComplex", "Elementary", "GroupSpec", "LaurentPolynomial", "RingElement", "RingMatrix",
    "Schedule", "Unit", "UnitProduct", "determinant_class_diagnostic", "direct_product", "euler_characteristic",
    "finite_abelian", "finite_cyclic", "finite_group_det", "fk_determinant", "folner_set", "free_abelian",
    "heisenberg", "heisenberg_mod", "l2_betti", "l2_torsion", "laplacians", "mahler_measure", "mapping_cone",
    "mapping_cone_check", "quotient", "validate", "whitehead_det",
]
