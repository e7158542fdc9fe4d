"""Time-bin interference of sequential photons from a dephasing emitter.

Closed-form coincidence fringes and visibility for two photons emitted a
delay T apart, split on a beamsplitter and analyzed by two unbalanced
interferometers, plus Monte Carlo and quadrature oracles that verify the
closed forms from the underlying stochastic phase model.
"""

from ._version import __version__
from .analytic import (
    CoincidenceResult,
    EmptyWindowError,
    UnreachableTargetError,
    VisibilityResult,
    chsh_threshold_purcell,
    coincidence_probability,
    delay_tolerance_window,
    detection_density,
    jitter_sensitivity,
    max_visibility,
    visibility,
    visibility_at,
)
from .config import ConfigError, RunConfig, load_config_file, parse_config_text
from .model import (
    BELL_THRESHOLD,
    C_MM_PER_PS,
    C_NM_PER_PS,
    CarrierSpec,
    DerivedRates,
    EmitterParams,
    Interferometer,
    OpticsConfig,
    ParameterError,
    derive_rates,
    validate_config,
)
from .oracle import (
    GridTooCoarseError,
    OracleReport,
    PhaseTrajectory,
    TimeGrid,
    correlator_check,
    default_correlator_lags,
    check_grid,
    default_grid,
    extract_visibility_from_fringe,
    fitted_decay_rate,
    mc_coincidence,
    quadrature_coincidence,
    sample_phase_trajectory,
)
from .sweeps import (
    KINDS,
    SweepResult,
    SweepSpec,
    run_sweep,
    sweep_delay,
    sweep_jitter,
    sweep_map2d,
    sweep_purcell,
)

__all__ = [
    "__version__",
    "BELL_THRESHOLD",
    "C_MM_PER_PS",
    "C_NM_PER_PS",
    "CarrierSpec",
    "CoincidenceResult",
    "ConfigError",
    "DerivedRates",
    "EmitterParams",
    "EmptyWindowError",
    "GridTooCoarseError",
    "Interferometer",
    "OpticsConfig",
    "OracleReport",
    "ParameterError",
    "PhaseTrajectory",
    "RunConfig",
    "KINDS",
    "SweepResult",
    "SweepSpec",
    "TimeGrid",
    "UnreachableTargetError",
    "VisibilityResult",
    "chsh_threshold_purcell",
    "coincidence_probability",
    "correlator_check",
    "default_correlator_lags",
    "check_grid",
    "default_grid",
    "delay_tolerance_window",
    "derive_rates",
    "detection_density",
    "extract_visibility_from_fringe",
    "fitted_decay_rate",
    "jitter_sensitivity",
    "load_config_file",
    "max_visibility",
    "mc_coincidence",
    "parse_config_text",
    "quadrature_coincidence",
    "run_sweep",
    "sample_phase_trajectory",
    "sweep_delay",
    "sweep_jitter",
    "sweep_map2d",
    "sweep_purcell",
    "validate_config",
    "visibility",
    "visibility_at",
]
