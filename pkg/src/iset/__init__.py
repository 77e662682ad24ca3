"""Exact p-adic arithmetic, Cantor-set geometry and Bell/CHSH machinery.

The library models the computable core of a fractal state-space
constraint on measurement settings: truncated p-adic numbers with their
ultrametric, the Cantor set C(p) and its digit homeomorphism, the
dyadic-rational admissibility grid for cosines of measurement
orientations, the spherical-triangle rationality decision, and the
CHSH distinction between the jointly undefined quantity A and the
experimentally estimable A'.
"""

__version__ = "0.1.0"

from .errors import BudgetError, DomainError, IsetError
from .padic import (
    PAdicInteger,
    PAdicNorm,
    PAdicRational,
    embed_rational,
    is_prime,
    padic_add,
    padic_distance,
    padic_mul,
    padic_norm,
    padic_sub,
)
from .cantor import (
    CantorConstruction,
    CantorPoint,
    Membership,
    OffSetWitness,
    PerturbationClass,
    PerturbationTag,
    cantor_distance,
    cantor_encode,
    cantor_membership,
    classify_perturbation,
    construct_iterate,
    euclidean_distance,
    hausdorff_dimension,
    hausdorff_dimension_bits,
    off_set_witness,
)
from .trig import (
    AlgebraicCosine,
    DyadicRational,
    PhaseAngle,
    SearchReport,
    TripleRecord,
    admissible_third_side,
    angular_snap_error,
    cos_phase_rationality,
    in_Q2N,
    incompatibility_search,
    is_dyadic,
    is_rational,
    snap_cosine,
    snap_phase,
    third_side,
)
from .bell import (
    AStatus,
    BellCheck,
    ChshReport,
    CorrelationRecord,
    ExperimentConfig,
    Orientation,
    PairSpec,
    bell_original_lhs,
    chsh_A,
    chsh_A_prime,
    correlation_exact,
    correlation_on_invariant_set,
    pair_on_invariant_set,
    run_chsh_experiment,
    simulate_subexperiment,
)
