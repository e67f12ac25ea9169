"""Norm bounds for weighted sums of bounded operators on C^d.

The package computes the exact operator norm of a weighted sum
sum_i z_i A_i, certifies the positive-semidefinite gap that controls
it, and evaluates a catalog of closed-form upper bounds driven by
Holder-exponent choices, together with rank-one specializations that
work directly from a Gram matrix.  A seeded harness generates instance
ensembles and checks every bound against the exact value; a CLI wraps
evaluation, verification, and slack sweeps with deterministic file
output.
"""

from .bounds import (
    BoundConfig,
    BoundReport,
    HolderPair,
    bilinear_bound,
    bound_cross_total,
    bound_holder_count,
    bound_l1_cross,
    bound_l2_cross,
    bound_max_terms,
    bound_orthogonal,
    bound_power_mean,
    catalog_reports,
    diag_term,
    lhs_norm_sq,
    master_bound,
    offdiag_term,
    tightest_bound,
    vector_image_bound,
)
from .cbs import (
    OperatorFamily,
    PsdGapResult,
    as_family,
    as_weights,
    cbs_norm_check,
    cbs_operator_gap,
)
from .errors import (
    DimensionMismatch,
    InvalidExponent,
    InvalidSpec,
    NoConvergence,
    NotHermitian,
    NotOrthogonalFamily,
    ParseError,
    SchemaError,
    ZeroVector,
)
from .harness import (
    CSV_HEADER,
    KINDS,
    CheckRecord,
    InstanceSpec,
    VerificationResult,
    generate,
    slack_sweep,
    verify_instance,
    verify_spec,
    write_slack_csv,
)
from .linalg import (
    SpectralNormResult,
    adjoint,
    gram,
    hermitian_eigen_min,
    hermitian_eigenvalues,
    hermitian_eigh,
    is_psd,
    psd_sqrt,
    spectral_norm,
    spectral_norms,
)
from .problemio import (
    ProblemFile,
    emit_problem,
    format_float,
    load_problem,
    loads_problem,
    write_problem,
)
from .rng import PortableRng, derive_seed
from .vectors import (
    VectorFamily,
    as_vector_family,
    bessel_weighting,
    gram_catalog_reports,
    gram_master_bound,
    particular_bounds,
    rank_one_family,
    verify_identities,
)

__version__ = "0.1.0"

__all__ = [
    "BoundConfig",
    "BoundReport",
    "CSV_HEADER",
    "CheckRecord",
    "DimensionMismatch",
    "HolderPair",
    "InstanceSpec",
    "InvalidExponent",
    "InvalidSpec",
    "KINDS",
    "NoConvergence",
    "NotHermitian",
    "NotOrthogonalFamily",
    "OperatorFamily",
    "ParseError",
    "ProblemFile",
    "PsdGapResult",
    "SchemaError",
    "SpectralNormResult",
    "VectorFamily",
    "VerificationResult",
    "ZeroVector",
    "PortableRng",
    "adjoint",
    "as_family",
    "as_vector_family",
    "as_weights",
    "bessel_weighting",
    "bilinear_bound",
    "bound_cross_total",
    "bound_holder_count",
    "bound_l1_cross",
    "bound_l2_cross",
    "bound_max_terms",
    "bound_orthogonal",
    "bound_power_mean",
    "catalog_reports",
    "cbs_norm_check",
    "cbs_operator_gap",
    "derive_seed",
    "diag_term",
    "emit_problem",
    "format_float",
    "generate",
    "gram",
    "gram_catalog_reports",
    "gram_master_bound",
    "hermitian_eigen_min",
    "hermitian_eigenvalues",
    "hermitian_eigh",
    "is_psd",
    "lhs_norm_sq",
    "load_problem",
    "loads_problem",
    "master_bound",
    "offdiag_term",
    "particular_bounds",
    "psd_sqrt",
    "rank_one_family",
    "slack_sweep",
    "spectral_norm",
    "spectral_norms",
    "tightest_bound",
    "vector_image_bound",
    "verify_identities",
    "verify_instance",
    "verify_spec",
    "write_problem",
    "write_slack_csv",
]
