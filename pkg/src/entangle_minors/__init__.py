"""Exact-arithmetic toolkit for banded-matrix minor certification and
bounded-Schmidt-rank subspace construction in C^m (x) C^n."""

from .exact import ExactMatrix, Scalar, ShapeError, as_scalar, format_scalar
from .families import (
    FAMILY_NAMES,
    BandedFamily,
    build,
    column_pattern,
    deleted_variant,
    family_from_json,
    shift_matrix,
)
from .minors import (
    ColumnsDependentError,
    DSequence,
    MinorReport,
    MinSupport,
    RepeatedRootError,
    all_order_n_minors,
    d_closed_form,
    d_sequence_recurrence,
    d_sequence_series,
    e_minor_b_zero,
    e_minor_product_formula,
    min_support,
    series_reciprocal,
    threads_from_env,
)
from .certify import (
    Certificate,
    CertificationError,
    certify,
    certify_B,
    certify_E,
    certify_E_tilde,
    certify_G,
)
from .subspace import (
    BasisVector,
    BudgetExceededError,
    Counterexample,
    SubspaceBasis,
    TensorVector,
    Verdict,
    WitnessNotFoundError,
    antidiagonal_length,
    build_pattern_subspace,
    containment_check,
    find_rank3_witness,
    phi,
    phi_inverse,
    rank3_rank4_pair,
    rank4_subspace,
    rank_chain,
    schmidt_rank,
    vector_in_span,
    verify_min_rank,
)

__version__ = "0.1.0"

__all__ = [
    "ExactMatrix",
    "Scalar",
    "ShapeError",
    "as_scalar",
    "format_scalar",
    "FAMILY_NAMES",
    "BandedFamily",
    "build",
    "column_pattern",
    "deleted_variant",
    "family_from_json",
    "shift_matrix",
    "ColumnsDependentError",
    "DSequence",
    "MinorReport",
    "MinSupport",
    "RepeatedRootError",
    "all_order_n_minors",
    "d_closed_form",
    "d_sequence_recurrence",
    "d_sequence_series",
    "e_minor_b_zero",
    "e_minor_product_formula",
    "min_support",
    "series_reciprocal",
    "threads_from_env",
    "Certificate",
    "CertificationError",
    "certify",
    "certify_B",
    "certify_E",
    "certify_E_tilde",
    "certify_G",
    "BasisVector",
    "BudgetExceededError",
    "Counterexample",
    "SubspaceBasis",
    "TensorVector",
    "Verdict",
    "WitnessNotFoundError",
    "antidiagonal_length",
    "build_pattern_subspace",
    "containment_check",
    "find_rank3_witness",
    "phi",
    "phi_inverse",
    "rank3_rank4_pair",
    "rank4_subspace",
    "rank_chain",
    "schmidt_rank",
    "vector_in_span",
    "verify_min_rank",
]
