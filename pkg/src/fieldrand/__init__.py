"""Certified randomness from a two-level detector coupled to a 1+1D field.

The package evaluates, to second order in the coupling, the reduced state
of a pointlike-in-time windowed detector interacting with a massless
scalar field (free line, periodic ring, or Dirichlet cavity), scores the
measurement randomness an adversary holding the field cannot guess, and
compares against a resonant single-mode rotating-wave reference.
"""

from .atom_state import (
    DensityMatrix2,
    NonphysicalStateError,
    PerturbationBreakdownError,
    SchmidtPair,
    evolve_perturbative,
    purity,
    schmidt_pair,
)
from .kernels import (
    KernelConvergenceError,
    KernelSet,
    compute_kernels,
    cross_J_factor,
    kernel_convergence_probe,
    ordered_time_factor,
    same_sign_J_factor,
)
from .params import (
    ConfigError,
    Dirichlet,
    FieldrandError,
    FreeSpace,
    Periodic,
    PhysicalConfig,
    Scenario,
    parse_config_file,
    profile_ft,
    scenario_name,
)
from .randomness import (
    EntropyDomainError,
    MeasurementBasis,
    RandomnessReport,
    certify,
    helstrom_min_entropy,
    min_entropy_optimal,
    optimize_measurement,
)
from .rwa import (
    RatioRecord,
    ResonantSetup,
    UndefinedRatioError,
    difference_ratio,
    mode_amplitude_diagnostic,
    rabi_angle,
    resonant_scenario,
    rwa_state_exact,
    rwa_state_second_order,
)
from .sweep import (
    PRESET_NAMES,
    Row,
    SweepResult,
    SweepSpec,
    emit_csv,
    parse_sweep_file,
    preset,
    run_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DensityMatrix2",
    "Dirichlet",
    "EntropyDomainError",
    "FieldrandError",
    "FreeSpace",
    "KernelConvergenceError",
    "KernelSet",
    "MeasurementBasis",
    "NonphysicalStateError",
    "PRESET_NAMES",
    "Periodic",
    "PerturbationBreakdownError",
    "PhysicalConfig",
    "RandomnessReport",
    "RatioRecord",
    "ResonantSetup",
    "Row",
    "Scenario",
    "SchmidtPair",
    "SweepResult",
    "SweepSpec",
    "UndefinedRatioError",
    "certify",
    "compute_kernels",
    "cross_J_factor",
    "difference_ratio",
    "emit_csv",
    "evolve_perturbative",
    "helstrom_min_entropy",
    "kernel_convergence_probe",
    "min_entropy_optimal",
    "mode_amplitude_diagnostic",
    "optimize_measurement",
    "ordered_time_factor",
    "parse_config_file",
    "parse_sweep_file",
    "preset",
    "profile_ft",
    "purity",
    "rabi_angle",
    "resonant_scenario",
    "run_sweep",
    "rwa_state_exact",
    "rwa_state_second_order",
    "same_sign_J_factor",
    "scenario_name",
    "schmidt_pair",
    "__version__",
]
