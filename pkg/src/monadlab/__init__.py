"""monadlab: exact calculus for special monads on projective space.

Build, validate and analyze three-term complexes O(-1)^v -> O^w -> O(1)^v'
on P2 and P3 in exact arithmetic (Q or F_p): Chern invariants, regularity
classification via degeneracy loci, twist-cohomology tables, admissibility
and stability checks, restriction to lines, splitting types, and seeded
jumping-line statistics over finite fields.
"""

from .cohomology import (
    AdmissibilityReport,
    CohomologyTable,
    DualVanishingReport,
    StabilityReport,
    admissibility_check,
    admissibility_violations,
    chi_line_bundle,
    cohomology_table,
    dual_vanishing_check,
    stability_report,
    twist_cohomology,
)
from .errors import (
    AlphaDegenerateError,
    MonadDecodeError,
    MonadLabError,
    NotLocallyFreeError,
    NotRepresentableError,
    ReconstructionError,
    RetryExhaustedError,
    ShapeMismatchError,
)
from .exactlin import (
    DEFAULT_PRIME,
    QQ,
    DenseMatrix,
    GF,
    LinearFormMatrix,
    MonomialBasis,
    PrimeField,
    RationalField,
    compose_check,
    field_from_name,
    forms_matrix,
    kernel_basis,
    monomial_basis,
    mult_map,
    rank,
)
from .lines_scan import (
    CodimEvidenceReport,
    ScanReport,
    TrivialSplittingReport,
    UniformityReport,
    codim_evidence,
    jumping_scan,
    sample_line,
    trivial_splitting_test,
    uniformity_evidence,
)
from .monad import (
    ChernData,
    SpecialMonad,
    ValidationBudget,
    ValidationReport,
    decode,
    direct_sum,
    dualize,
    encode,
    example_monad,
    invariants,
    random_monad,
    special_monad_exists,
    to_prime_field,
    trivial_monad,
    validate,
)
from .pencil import (
    Line,
    PencilComplex,
    SplittingType,
    dual_pencil,
    line_status,
    p1_cohomology,
    restrict,
    splitting_type,
)
from .pointwise import (
    ClassificationReport,
    DegeneracyBudget,
    DegeneracyResult,
    classify,
    degeneracy_dim,
    evaluate,
)

__version__ = "0.1.0"
