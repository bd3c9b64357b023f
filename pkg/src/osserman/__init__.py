"""Exact verification of Osserman-type properties of algebraic curvature tensors."""

__version__ = "0.1.0"

from .space import (
    DEFAULT_TOL,
    EXACT,
    FLOAT,
    PseudoEuclideanSpace,
    SamplingError,
    ScalarDomain,
    UsageError,
    derived_rng,
    inner,
    is_null,
    norm_sq,
    orthogonal_complement_basis,
    sample_vector,
    vec,
)
from .poly import Poly, Q
from .curvature import (
    CONVENTION,
    CurvatureTensor,
    SquareOperator,
    SymmetryError,
    ValidationReport,
    Violation,
    act_dimension,
)
from .polymatrix import (
    InvariantFactors,
    JordanStructure,
    classify_generic,
    elementary_divisor_pattern,
    invariant_factors,
    invariant_factors_by_minors,
    jordan_structure_exact,
    structure_signature,
)
from .spectral import (
    CharacteristicPolynomial,
    char_poly,
    eigen_clusters,
    eigen_decomposition,
    is_diagonalisable,
    jordan_structure_numeric,
    minimal_polynomial,
)
from .catalog import (
    AnticommutingStructure,
    SymmetricBilinearForm,
    build,
    clifford_tensor,
    constant_curvature,
    nilpotent_example,
    random_act,
    rank_one_generator,
    standard_structure,
)
from .checks import (
    CheckParams,
    OssermanCertificate,
    PropertyReport,
    duality_check,
    duality_principle,
    derivative_identity_check,
    eigen_continuation,
    full_report,
    is_jordan_osserman,
    is_osserman,
    is_semisimple,
    minimal_poly_test,
    reciprocity_check,
)

__all__ = [
    "DEFAULT_TOL", "EXACT", "FLOAT", "PseudoEuclideanSpace", "SamplingError", "ScalarDomain",
    "UsageError", "derived_rng", "inner", "is_null", "norm_sq", "orthogonal_complement_basis",
    "sample_vector", "vec", "CONVENTION", "CurvatureTensor", "SquareOperator", "SymmetryError",
    "ValidationReport", "Violation", "act_dimension", "InvariantFactors", "JordanStructure",
    "classify_generic", "elementary_divisor_pattern", "invariant_factors",
    "invariant_factors_by_minors", "jordan_structure_exact", "structure_signature",
    "CharacteristicPolynomial", "char_poly", "eigen_clusters", "eigen_decomposition",
    "is_diagonalisable", "jordan_structure_numeric", "minimal_polynomial", "AnticommutingStructure",
    "SymmetricBilinearForm", "build", "clifford_tensor", "constant_curvature", "nilpotent_example",
    "random_act", "rank_one_generator", "standard_structure", "CheckParams", "OssermanCertificate",
    "PropertyReport", "duality_check", "duality_principle", "derivative_identity_check",
    "eigen_continuation", "full_report", "is_jordan_osserman", "is_osserman", "is_semisimple",
    "minimal_poly_test", "reciprocity_check", "Poly", "Q",
]
