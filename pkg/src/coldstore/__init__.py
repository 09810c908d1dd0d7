"""Exact finite-N simulation of collective atomic storage states.

Sparse labeled state vectors over (field Fock occupations) x (atomic level
assignments), collective transition operators with spatial phases, storage
and dark-state constructions, adiabatic control sweeps, and resonant
photon/excitation transfer — every approximation quantified against exact
finite-N references.
"""

from ._version import __version__
from .errors import (
    BudgetExceededError,
    CapacityError,
    ColdstoreError,
    ConfigError,
    FockOverflowError,
    IntegrationError,
    NotNormalizedError,
    SectorOverflowError,
    SpaceMismatchError,
    ZeroNormError,
)
from .states import (
    DROP_TOL,
    AtomConfig,
    JointLabel,
    SparseKet,
    StateSpace,
    atomic_space,
    fidelity,
    inner_product,
    level_population,
    normalize,
    photon_expectation,
)
from .geometry import (
    ConditionReport,
    ConditionThresholds,
    Geometry,
    ModeSet,
    PhaseSumReport,
    check_mode_conditions,
    continuum_phase_sum,
    lattice_phase_sum_closed,
    mode_spacing_estimate,
    phase_sum,
    phase_sum_crosscheck,
)
from .operators import (
    AngularMomentumCheck,
    CollectiveOperator,
    angular_momentum_eigencheck,
    apply_field,
    apply_population,
    apply_r1,
    apply_r2,
    apply_r3,
    apply_r_squared,
    apply_rho_ab,
    apply_rho_ac,
    apply_sigma,
    commutator_matrix_element,
    sigma_commutator_element,
)
from .storage import (
    NormalizationAudit,
    StorageSpec,
    asymptotic_coefficient,
    build_storage,
    ladder_prefactor,
    normalization_audit,
    storage_direct,
    storage_ladder,
    vacuum,
    with_field_occupation,
)
from .propagate import (
    enumerate_basis,
    enumerate_sector,
    estimate_basis_size,
    estimate_sector_size,
    operator_matrix,
    present_totals,
    rk4_propagate,
)
from .eit import (
    EitParams,
    RampSchedule,
    Trajectory,
    adiabatic_sweep,
    apply_hamiltonian,
    apply_polariton,
    control_amplitude,
    dark_state,
    excited_level_state,
    joint_space,
    mixing_angle,
    multimode_dark_state,
    null_eigenvalue_residual,
)
from .transfer import (
    BosonicState,
    SwapCheckpoint,
    SwapReport,
    associate_state,
    bosonic_to_joint,
    evolve_analytic,
    evolve_exact_atoms,
    evolve_numeric,
    exact_vs_analytic_deviation,
    expected_swap_state,
    subsystem_purity,
    swap_check,
    transfer_curve,
    transfer_space,
    write_transfer_csv,
)
from .harness import Report, run, scan, validate_config

__all__ = [
    "__version__",
    # errors
    "ColdstoreError", "SpaceMismatchError", "ZeroNormError",
    "NotNormalizedError", "CapacityError", "SectorOverflowError",
    "FockOverflowError", "IntegrationError", "BudgetExceededError",
    "ConfigError",
    # states
    "DROP_TOL", "AtomConfig", "JointLabel", "StateSpace", "SparseKet",
    "atomic_space", "inner_product", "normalize", "fidelity",
    "photon_expectation", "level_population",
    # geometry
    "Geometry", "ModeSet", "PhaseSumReport", "ConditionThresholds",
    "ConditionReport", "phase_sum", "lattice_phase_sum_closed",
    "continuum_phase_sum", "phase_sum_crosscheck", "mode_spacing_estimate",
    "check_mode_conditions",
    # operators
    "CollectiveOperator", "AngularMomentumCheck", "apply_sigma",
    "apply_rho_ab", "apply_rho_ac", "apply_population", "apply_field",
    "apply_r1", "apply_r2", "apply_r3", "apply_r_squared",
    "commutator_matrix_element", "sigma_commutator_element",
    "angular_momentum_eigencheck",
    # storage
    "StorageSpec", "NormalizationAudit", "vacuum", "with_field_occupation",
    "asymptotic_coefficient", "ladder_prefactor", "storage_direct",
    "storage_ladder", "build_storage", "normalization_audit",
    # propagate
    "enumerate_sector", "enumerate_basis", "estimate_sector_size",
    "estimate_basis_size", "present_totals", "operator_matrix",
    "rk4_propagate",
    # eit
    "EitParams", "RampSchedule", "Trajectory", "mixing_angle", "joint_space",
    "apply_hamiltonian", "excited_level_state", "apply_polariton",
    "multimode_dark_state", "dark_state", "null_eigenvalue_residual",
    "control_amplitude", "adiabatic_sweep",
    # transfer
    "BosonicState", "SwapReport", "SwapCheckpoint", "evolve_analytic",
    "evolve_numeric", "associate_state", "subsystem_purity", "swap_check",
    "expected_swap_state", "transfer_space", "bosonic_to_joint",
    "evolve_exact_atoms", "exact_vs_analytic_deviation", "transfer_curve",
    "write_transfer_csv",
    # harness
    "Report", "run", "scan", "validate_config",
]
