"""Two two-level atoms driven by propagating single-photon and coherent pulses.

Collective decay rates and dipole-dipole shifts, matched pulse shapes,
single-photon (Fock) and coherent-state dynamics, and pulse-shape
optimization, all in natural units (gamma = 1 sets the time scale).
"""

from .convention import CLS_PHASE_SIGN
from .couplings import (
    AtomPairConfig,
    CollectiveRates,
    collective_decay_rate,
    collective_lamb_shift,
    collective_rates,
    decay_rate_quadrature,
    lamb_shift_quadrature,
    rates_sweep,
)
from .errors import DegenerateChannel, DipolePairError, DomainError, NumericalError
from .pulses import (
    ANTISYMMETRIC,
    EQUAL_SUPERPOSITION,
    SYMMETRIC,
    SpatialProfile,
    TemporalEnvelope,
    antisymmetric_pulse,
    frequency_profile,
    gaussian_pulse,
    mode_normalization,
    sampled_pulse,
    square_pulse,
    superposition_profile,
    symmetric_pulse,
)
from .trajectory import StateTrajectory, per_atom_population
from .fock import (
    AmplitudeState,
    FockHierarchy,
    amplitude_solution,
    atom1_inversion_rate,
    decay_only,
    default_time_grid,
    drive_amplitudes,
    evolve_amplitudes,
    evolve_hierarchy,
    hierarchy_rhs,
    table1_expectations,
)
from .coherent import (
    CoherentDrive,
    coherent_solution,
    evolve_coherent,
    peak_population_vs_separation,
)
from .optimize import (
    OptimizationProblem,
    OptimizationResult,
    bandwidth_scan,
    evaluate_peak,
    optimize,
)

__version__ = "0.1.0"

__all__ = [
    "AmplitudeState", "AtomPairConfig", "ANTISYMMETRIC", "CLS_PHASE_SIGN",
    "CoherentDrive", "CollectiveRates", "DegenerateChannel", "DipolePairError",
    "DomainError", "EQUAL_SUPERPOSITION", "FockHierarchy", "NumericalError",
    "OptimizationProblem", "OptimizationResult", "SpatialProfile",
    "StateTrajectory", "SYMMETRIC", "TemporalEnvelope",
    "amplitude_solution", "antisymmetric_pulse", "atom1_inversion_rate",
    "bandwidth_scan", "coherent_solution", "collective_decay_rate",
    "collective_lamb_shift", "collective_rates", "decay_only",
    "decay_rate_quadrature", "default_time_grid", "drive_amplitudes",
    "evaluate_peak", "evolve_amplitudes", "evolve_coherent",
    "evolve_hierarchy", "frequency_profile", "gaussian_pulse",
    "hierarchy_rhs", "lamb_shift_quadrature", "mode_normalization",
    "optimize", "per_atom_population", "rates_sweep", "sampled_pulse",
    "square_pulse", "superposition_profile", "symmetric_pulse",
    "table1_expectations",
]
