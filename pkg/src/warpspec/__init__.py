"""Numerics for time-warped energy representations of driven quantum systems.

The package covers four layers: warp construction and validation (warp),
the modulated and warped transform pairs with their bi-orthogonal checks
(transforms), the induced spectral distribution evaluated through test
functions (distributions), and separable vs propagated solutions of the
corresponding Schrodinger problems (schrodinger). The runners and cli
modules wrap everything into reproducible experiments with CSV artifacts.
"""

from .errors import (
    BadPotential,
    CheckFailed,
    ConfigParseError,
    ConvergenceFailure,
    GridMismatch,
    GridTooCoarse,
    InsufficientRuns,
    LinearSolveFailure,
    NonMonotoneParameters,
    NonMonotoneWarp,
    NonPositiveG,
    NyquistViolation,
    RangeTooNarrow,
    ResampleOutOfRange,
    StabilityHeuristicViolated,
    UnknownFamily,
    WarpspecError,
)
from .grids import EnergyGrid, SampledSignal, SpectrumSamples, TimeGrid
from .warp import MonotonicityReport, WarpSpec, check_monotone, make_analytic_warp, make_numeric_warp
from .signals import acceptance_corpus, band_limited_noise, gaussian_signal, hermite_function, hermite_signal
from .transforms import (
    BasisFunction,
    adjoint_defect,
    apply_additive_energy_op,
    apply_multiplicative_energy_op,
    auto_resample_grid,
    biorth_pairing,
    default_direct_energy_grid,
    fourier_of_samples,
    inverse_fourier_of_spectrum,
    modulated_forward,
    modulated_inverse,
    modulated_reduction_check,
    native_energy_grid,
    resolution_roundtrip,
    warped_forward,
    warped_inverse,
    warped_reduction_check,
)
from .distributions import (
    TestFunction,
    make_test_function,
    s_density,
    s_pairing_direct,
    s_pairing_parseval,
    truncation_sequence,
)
from .schrodinger import (
    EigenPair,
    EvolutionKind,
    Hamiltonian1D,
    SpaceGrid,
    SpaceTimeField,
    additive,
    build_hamiltonian,
    combined,
    cross_orthogonality,
    eigensolve,
    multiplicative,
    propagate_crank_nicolson,
    schrodinger_residual,
    separable_solution,
)
from .acceptance import CheckResult, CriterionResult, catalog, run_battery, smeared_biorth_error
from .runners import ExperimentConfig, Report, emit_convergence_table, run

__version__ = "0.1.0"

__all__ = [
    "WarpspecError", "UnknownFamily", "NonMonotoneParameters", "NonPositiveG",
    "GridTooCoarse", "ConvergenceFailure", "GridMismatch", "NonMonotoneWarp",
    "ResampleOutOfRange", "NyquistViolation", "RangeTooNarrow", "BadPotential",
    "LinearSolveFailure", "ConfigParseError", "CheckFailed", "InsufficientRuns",
    "StabilityHeuristicViolated",
    "TimeGrid", "EnergyGrid", "SampledSignal", "SpectrumSamples",
    "WarpSpec", "MonotonicityReport", "check_monotone", "make_analytic_warp", "make_numeric_warp",
    "gaussian_signal", "hermite_signal", "hermite_function", "band_limited_noise", "acceptance_corpus",
    "native_energy_grid", "fourier_of_samples", "inverse_fourier_of_spectrum",
    "modulated_forward", "modulated_inverse", "modulated_reduction_check",
    "warped_forward", "warped_inverse", "warped_reduction_check",
    "default_direct_energy_grid", "auto_resample_grid", "resolution_roundtrip",
    "BasisFunction", "biorth_pairing", "adjoint_defect",
    "apply_additive_energy_op", "apply_multiplicative_energy_op",
    "TestFunction", "make_test_function", "s_pairing_direct", "s_pairing_parseval",
    "s_density", "truncation_sequence",
    "SpaceGrid", "SpaceTimeField", "Hamiltonian1D", "EigenPair", "EvolutionKind",
    "additive", "multiplicative", "combined", "build_hamiltonian", "eigensolve",
    "separable_solution", "schrodinger_residual", "propagate_crank_nicolson",
    "cross_orthogonality",
    "CheckResult", "CriterionResult", "catalog", "run_battery", "smeared_biorth_error",
    "ExperimentConfig", "Report", "run", "emit_convergence_table",
    "__version__",
]
