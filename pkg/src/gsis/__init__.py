"""Shift-invariant spaces of graph signals.

Builds commuting graph shifts, jointly diagonalizes them into a graph
Fourier transform, constructs bandlimited / shift-invariant / principal
shift-invariant signal spaces with their Riesz and frame bounds, relates
them to reproducing-kernel spaces, and reconstructs signals from subset or
dynamic samples — including an iterative reconstruction that expands the
generated span level by level and stops in finitely many steps.
"""

from .errors import (
    DegenerateGraphError,
    DegenerateInnerProductError,
    DiagonalizationError,
    DistinctnessError,
    GsisError,
    NonInjectiveSamplingError,
)
from .experiments import (
    ExperimentConfig,
    MetricsTable,
    ModelComparison,
    approximation_error,
    damped_cosine_signal,
    ingest_signals_csv,
    krylov_level_bases,
    run_circulant_experiment,
    run_model_comparison,
)
from .graphs import (
    SHIFT_KINDS,
    CommutativityCheck,
    Graph,
    ShiftMatrix,
    ShiftSet,
    Signal,
    build_circulant,
    build_standard_shifts,
    check_commutative,
    complete_graph,
    cycle_graph,
    frobenius_tol,
    path_graph,
    read_edge_list,
    validate_shift,
    write_edge_list,
)
from .kernels import (
    KERNEL_FAMILIES,
    RkhsMetric,
    ShiftInvariantKernel,
    evaluation_bound,
    gsis_to_rkhs_kernel,
    is_reproducing_metric,
    is_shift_invariant_kernel,
    kernel_for_metric,
    make_kernel,
    metric_for_kernel,
    rkhs_inner_product,
)
from .orthogonalize import ADDED, DEPENDENT, INVISIBLE, OrthogonalBasis
from .sampling import (
    DynamicInjectivity,
    Observation,
    ReconstructionResult,
    SamplingScheme,
    check_bandlimited_injective,
    check_dynamic_injective,
    check_injective,
    degenerate_dimension_check,
    dynamic_sampler,
    reconstruct_direct,
    reconstruct_krylov,
    subset_sampler,
)
from .spaces import (
    CanonicalGenerator,
    SignalSpace,
    UncertaintyReport,
    bandlimited_space,
    canonical_generator,
    frame_bounds,
    gsis_from_generators,
    is_shift_invariant,
    joint_eigenvalue_clusters,
    krylov_subspace,
    riesz_bounds,
    uncertainty_check,
    uniform_norm_star,
)
from .spectral import (
    SpectralDecomposition,
    apply_polynomial_filter,
    diagonalize_simultaneously,
    gft,
    graded_multi_indices,
    igft,
    is_polynomial_filter,
    lagrange_projector,
    polynomial_filter_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "ADDED",
    "DEPENDENT",
    "INVISIBLE",
    "KERNEL_FAMILIES",
    "SHIFT_KINDS",
    "CanonicalGenerator",
    "CommutativityCheck",
    "DegenerateGraphError",
    "DegenerateInnerProductError",
    "DiagonalizationError",
    "DistinctnessError",
    "DynamicInjectivity",
    "ExperimentConfig",
    "Graph",
    "GsisError",
    "MetricsTable",
    "ModelComparison",
    "NonInjectiveSamplingError",
    "Observation",
    "OrthogonalBasis",
    "ReconstructionResult",
    "RkhsMetric",
    "SamplingScheme",
    "ShiftInvariantKernel",
    "ShiftMatrix",
    "ShiftSet",
    "Signal",
    "SignalSpace",
    "SpectralDecomposition",
    "UncertaintyReport",
    "apply_polynomial_filter",
    "approximation_error",
    "bandlimited_space",
    "build_circulant",
    "build_standard_shifts",
    "canonical_generator",
    "check_bandlimited_injective",
    "check_commutative",
    "check_dynamic_injective",
    "check_injective",
    "complete_graph",
    "cycle_graph",
    "damped_cosine_signal",
    "degenerate_dimension_check",
    "diagonalize_simultaneously",
    "dynamic_sampler",
    "evaluation_bound",
    "frame_bounds",
    "frobenius_tol",
    "gft",
    "graded_multi_indices",
    "gsis_from_generators",
    "gsis_to_rkhs_kernel",
    "igft",
    "ingest_signals_csv",
    "is_polynomial_filter",
    "is_reproducing_metric",
    "is_shift_invariant",
    "is_shift_invariant_kernel",
    "kernel_for_metric",
    "krylov_level_bases",
    "krylov_subspace",
    "lagrange_projector",
    "make_kernel",
    "metric_for_kernel",
    "path_graph",
    "polynomial_filter_matrix",
    "read_edge_list",
    "reconstruct_direct",
    "reconstruct_krylov",
    "riesz_bounds",
    "rkhs_inner_product",
    "run_circulant_experiment",
    "run_model_comparison",
    "subset_sampler",
    "uncertainty_check",
    "uniform_norm_star",
    "validate_shift",
    "write_edge_list",
]
