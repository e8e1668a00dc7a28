"""Kuramoto dynamics on static signed networks and with adaptive
coupling: simulation, closed-form stability spectra, and basin
machinery."""

from .model import (
    BandNetworkSpec,
    BlockNetworkSpec,
    ConfigurationClass,
    ModelParams,
    OrderParameters,
    PhaseLockedSolution,
    build_band_network,
    build_block_network,
    canonicalize,
    circular_diameter,
    classify_configuration,
    induced_coupling,
    mixed_cluster_angle,
    order_parameter,
    phase_diameter,
    phase_locked_solution,
)
from .dynamics import (
    BACKEND,
    IntegrationError,
    IntegratorConfig,
    SyncVerdict,
    SystemState,
    Trajectory,
    detect_sync,
    integrate,
    rhs_adaptive,
    rhs_static,
)
from .spectral import (
    AdmissiblePRange,
    Spectrum,
    StabilityVerdict,
    admissible_p,
    antipodal_matrix,
    antipodal_spectrum,
    complete_sync_spectrum,
    full_mode_sum,
    jacobian_at,
    mode_coupling_sum,
    numeric_spectrum,
    rotating_wave_eigenvalues,
    rotating_wave_state,
    stability_verdict,
)
from .basins import (
    CheckReport,
    CriticalDiameterResult,
    KappaEnvelope,
    SweepTable,
    asymptotic_coupling_envelope,
    check_invariance,
    check_sync_conditions,
    contraction_gauge,
    coupling_separation_threshold,
    critical_diameter,
    diameter_decay_bound,
    membership,
    nonneg_coupling_time,
    sweep_critical_diameter,
    verify_adaptive_theorem,
    verify_sync_theorem,
)

__version__ = "0.1.0"
