"""Exact symbolic calculus for the intrinsic (Rumin) complex on Carnot groups.

The package builds stratified Lie algebras from exact structure constants,
normal-orders left-invariant differential operators, constructs the
intrinsic complex with its differential and codifferential matrices, the
hypoelliptic Hodge-Laplacian families of the five-dimensional step-3 group,
and the kernel-type/limiting-exponent bookkeeping attached to them.
Everything is computed over an exact scalar tower; there is no floating
point anywhere.
"""

from .scalars import Scalar, ScalarField, TowerInsufficient
from .liealg import (DimensionMismatch, GradingViolation, JacobiViolation,
                     NotStratified, ResourceLimit, StratifiedLieAlgebra,
                     cartan_group, free_nilpotent)
from .env import AlgebraMismatch, EnvElement, Mixed, ZeroElement
from .coords import (CoordinateRealization, NoRealization, Polynomial,
                     cartan_realization, coordinate_apply)
from .exterior import (BasisCovector, CovectorMap, DegreeOverflow, Form,
                       OperatorForm, covectors)
from .rumin import (OperatorMatrix, RuminBasis, RuminComplex, SpanMismatch,
                    StarAdjointMismatch)
from .laplacians import (EXPECTED_ORDERS, FAMILIES, UnsupportedGroup,
                         a_delta, hodge_conjugate, laplacian, order_table,
                         star_duality_sign, verify_homogeneous_order,
                         verify_self_adjoint)
from .estimates import (DegreeMismatch, ExponentRecord, HorizontalTensor,
                        KernelType, OutOfRange, cartan_pairing,
                        check_row_membership, differentiate_type,
                        folland_map, generalized_divergence,
                        kernel_type_of_inverse, paper_tensor, proof_row,
                        proof_tensor, derived_row, sobolev_dual_exponent,
                        solve_divergence_tensor, sum_space_pairs,
                        tensor_findings, theorem_table)
from .verify import run_verify

__version__ = "0.1.0"

__all__ = [
    "Scalar", "ScalarField", "TowerInsufficient",
    "StratifiedLieAlgebra", "cartan_group", "free_nilpotent",
    "JacobiViolation", "GradingViolation", "NotStratified",
    "DimensionMismatch", "ResourceLimit",
    "EnvElement", "Mixed", "ZeroElement", "AlgebraMismatch",
    "Polynomial", "CoordinateRealization", "cartan_realization",
    "coordinate_apply", "NoRealization",
    "Form", "OperatorForm", "BasisCovector", "CovectorMap", "covectors",
    "DegreeOverflow",
    "RuminComplex", "RuminBasis", "OperatorMatrix", "SpanMismatch",
    "StarAdjointMismatch",
    "laplacian", "a_delta", "order_table", "hodge_conjugate",
    "verify_self_adjoint", "verify_homogeneous_order", "star_duality_sign",
    "FAMILIES", "EXPECTED_ORDERS", "UnsupportedGroup",
    "KernelType", "ExponentRecord", "HorizontalTensor", "OutOfRange",
    "DegreeMismatch", "kernel_type_of_inverse", "differentiate_type",
    "folland_map", "sobolev_dual_exponent", "theorem_table",
    "sum_space_pairs", "paper_tensor", "proof_tensor", "proof_row",
    "derived_row", "generalized_divergence", "check_row_membership",
    "cartan_pairing", "solve_divergence_tensor", "tensor_findings",
    "run_verify",
]
