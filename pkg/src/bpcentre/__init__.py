"""Exact p-local computer algebra for degree-zero cohomology operations.

The package computes, degree by degree and with exact arithmetic over the
p-local integers: the right unit of the Brown-Peterson Hopf algebroid on
Hazewinkel generators, matrix actions of degree-zero operations on homotopy,
elementary-matrix realizations, commutants ("the centre is the diagonals" at
truncated heights), and finite windows of the K-theory congruence lattice.
"""

from .bp_hopf import (
    EtaRTable,
    GradedPoly,
    IntegralityError,
    check_integrality,
    coefficient_of_t,
    eta_r_v,
    hazewinkel_m,
)
from .dvr_arith import (
    INFINITY,
    DvrLattice,
    commutant,
    echelon_lattice,
    integral_kernel,
    is_integral,
    lattice_membership,
    topological_generator,
    valuation,
)
from .ktheory_lattice import (
    StabilizationError,
    adams_sequence,
    compare_with_diagonal_window,
    sg_membership,
    sg_window,
)
from .monomial_order import (
    add,
    compare,
    enumerate_weight,
    in_ideal,
    unit_exp,
    weight,
)
from .op_calculus import (
    ConsistencyError,
    DegreeMatrix,
    OpFunctional,
    action_matrix,
    adams_matrix,
    counit,
    elementary_realize,
    phi_alpha_beta,
    phi_beta,
    stable_generators,
)
from .truncation_centre import (
    BlockSplit,
    block_split,
    centre_commutant,
    diagonal_window_lattice,
    iota_hat_n_window,
    projected_elementary,
)

__version__ = "0.1.0"

__all__ = [
    "BlockSplit",
    "ConsistencyError",
    "DegreeMatrix",
    "DvrLattice",
    "EtaRTable",
    "GradedPoly",
    "INFINITY",
    "IntegralityError",
    "OpFunctional",
    "StabilizationError",
    "action_matrix",
    "adams_matrix",
    "adams_sequence",
    "add",
    "block_split",
    "centre_commutant",
    "check_integrality",
    "coefficient_of_t",
    "commutant",
    "compare",
    "compare_with_diagonal_window",
    "counit",
    "diagonal_window_lattice",
    "echelon_lattice",
    "elementary_realize",
    "enumerate_weight",
    "eta_r_v",
    "hazewinkel_m",
    "in_ideal",
    "integral_kernel",
    "iota_hat_n_window",
    "is_integral",
    "lattice_membership",
    "phi_alpha_beta",
    "phi_beta",
    "projected_elementary",
    "sg_membership",
    "sg_window",
    "stable_generators",
    "topological_generator",
    "unit_exp",
    "valuation",
    "weight",
]
