"""Spectral analysis, simulation, and weak limits of homogeneous quantum walks on Z."""

from .circle import rotation_distance, winding_of_samples
from .errors import (
    DomainError,
    ResolutionError,
    SpecFormatError,
    UnitarityError,
    ZqwalkError,
)
from .laurent import LaurentPoly, laurent_from_terms
from .limit import (
    LimitMeasure,
    MomentComparison,
    VelocityProfile,
    cdf_distance,
    compare_empirical,
    group_velocities,
    limit_measure,
    limit_moments,
)
from .model import (
    CtGenerator,
    ModelWalkSpec,
    build_model_walk,
    ct_generator,
    deinterleave_channels,
    interleave_channels,
    lambda_coeffs_from_samples,
    rearrangement_check,
    shift_factorization,
)
from .simulate import (
    InitialClass,
    PositionDistribution,
    StateVector,
    apply_walk,
    classify_initial,
    evolve,
    fourier_position_distribution,
    position_distribution,
    rescaled_moment,
    truncate_amplitudes,
)
from .spectral import (
    Band,
    EigenSystem,
    are_conjugate,
    band_projections,
    ct_realizable,
    is_decomposable,
    refine_system,
    total_winding,
    track_bands,
    winding_numbers,
)
from .symbol import (
    CharPoly,
    DecayClass,
    SymbolMatrix,
    UnitarityReport,
    WalkSpec,
    adjoint,
    char_poly,
    classify_decay,
    compose,
    direct_sum,
    eval_symbol,
    symbol_power,
    truncate_symbol,
    truncation_error_bound,
    verify_cayley_hamilton,
    verify_unitary_symbol,
)
from .walks import (
    coined_lambda,
    coined_walk,
    grover_lambda,
    grover_walk_3,
    modified_coined_walk,
    modified_lambda,
    walk_corpus,
)

__version__ = "0.1.0"
