"""Weak Lefschetz verification for finite-length cokernels over K[x,y,z].

Given a graded map phi between twisted free modules with two more source
than target summands, this package computes the Hilbert function of the
cokernel, the cohomology and stability classification of the rank-2
kernel sheaf on the projective plane, the splitting type on a general
line, and the injectivity/surjectivity profile of multiplication by a
general linear form, all with exact arithmetic.
"""

from .cohomology import (
    BundleClass,
    ChernData,
    CohomologyTable,
    H0FormulaReport,
    SplittingType,
    chern_classes,
    classify,
    cohomology_table,
    computed_splitting,
    h0_formula_check,
    instability_index,
    predicted_splitting,
    splitting_on_line,
)
from .cli import (
    FuzzConfig,
    FuzzSummary,
    Instance,
    Report,
    analyze,
    ci_mode,
    fuzz,
    parse_instance,
)
from .errors import (
    ConsistencyFailure,
    DegreeError,
    GenerationFailed,
    LineDegenerate,
    NotFiniteLength,
    ParseError,
    ShapeError,
    TheoremViolation,
    WlpError,
)
from .graded import (
    GradedMap,
    HilbertFunction,
    ci_instance,
    coker_dims,
    expected_hilbert,
    free_dim,
    kernel_dims,
    phi_matrix,
    phi_rank,
    random_instance,
    scan_bounds,
)
from .lefschetz import (
    PredictedRanges,
    RankProfile,
    WlpVerdict,
    generic_profile,
    mult_rank_profile,
    theorem_ranges,
    unimodality,
    verify_theorem,
    wlp_verdict,
)
from .linalg import GF32003, RATIONALS, FieldSpec, kernel_basis, rank
from .poly import (
    BinaryForm,
    HomogPoly,
    LineParam,
    monomial_basis,
    mult_matrix,
    num_monomials,
    random_homog,
    random_line,
    restrict_to_line,
)

__version__ = "0.1.0"
