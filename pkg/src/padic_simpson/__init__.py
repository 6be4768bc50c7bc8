"""Finite-precision p-adic engine for representations of Z_p^{2g} and their Higgs data."""

from .errors import (
    CharacterAdmissibilityError,
    CommutationViolation,
    DivisionBelowPrecision,
    DomainError,
    ExpDomainError,
    InvalidFieldConfig,
    LogDomainError,
    NotNilpotentError,
    NotUnipotentError,
    PadicError,
    PrecisionError,
    PrecisionExhausted,
    RootsNotInField,
)
from .field import FieldConfig, Scalar, ZpElement, binomial_zp, padic_exp, padic_log, zp_scalar_power
from .linalg import (
    Matrix,
    Poly,
    charpoly,
    generalized_eigenspace,
    kernel_basis,
    rank,
    root_clusters,
    roots_in_principal_units,
    solve,
)
from .unipotent import commute, matrix_exp, matrix_log, unipotent_power
from .representation import (
    AbeloidModel,
    CharacterTuple,
    PadicRep,
    analytic_test_character,
    analytic_test_unipotent,
    decompose_rep,
    dsum_rep,
    dual_rep,
    hom_space,
    tensor_rep,
    validate_rep,
)
from .higgs import (
    HiggsLine,
    HiggsModel,
    NonSplit,
    UnipotentHiggs,
    char_to_higgs_line,
    higgs_hom_dim,
    higgs_line_to_char,
    higgs_tensor,
    higgs_to_rep,
    rep_to_higgs,
    split_higgs_extension,
    unipotent_higgs_to_rep,
    unipotent_rep_to_higgs,
    validate_higgs,
)
from .cohomology import build_koszul, ext1_line, koszul_cohomology_dims
