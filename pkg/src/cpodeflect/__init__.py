"""Slow-light probe deflection in a coherently driven two-level medium.

The package is organized bottom-up:

    bloch        driven two-level response: time integration, closed forms,
                 Floquet sideband solve, probe spectra and dip metrics
    medium       macroscopic coefficients, the bright-soliton control profile
                 and the (linearized) probe potential it dresses
    propagation  split-step beam propagation and the deflection experiment
    weinorman    operator-factorized packet evolution and the analytic
                 deflection law
    config       typed INI configuration
    runner       scenarios with embedded cross-checks and deterministic output
    cli          the ``cpodeflect`` command
"""

from .bloch import (
    AtomParams,
    BlochState,
    DipMetrics,
    DriveFields,
    PerturbativeDriveWarning,
    SpectrumTable,
    SteadyResponse,
    closed_form_residual,
    dip_metrics,
    first_order_closed,
    floquet_steady_solve,
    integrate_bloch,
    probe_spectrum,
    steady_state_zeroth,
)
from .errors import (
    BoundaryContaminationError,
    ConfigurationError,
    CpoError,
    InvalidEvolutionError,
    InvalidRegimeError,
    NoDipError,
    NumericalDivergenceError,
    ParameterError,
    SingularDenominatorError,
    SingularResponseError,
    UndefinedCentroidError,
    UnderResolvedError,
)
from .medium import (
    FarDetuningWarning,
    LinearPotential,
    MediumCoefficients,
    couplings_from_alphas,
    derive_coefficients,
    linearized_potential,
    probe_potential,
    soliton_fd_residual,
    soliton_profile,
)
from .propagation import (
    BeamDiagnostics,
    ComplexField1D,
    DeflectionRecord,
    DeflectionSetup,
    TransverseGrid,
    beam_diagnostics,
    classify_direction,
    deflection_experiment,
    make_gaussian,
    propagate_control,
    propagate_probe,
)
from .weinorman import (
    GaussianPacket,
    WeiNormanCoeffs,
    evolve_gaussian_analytic,
    trajectory_endpoint,
    wn_closed_coefficients,
    wn_integrate_odes,
)
from .config import ScenarioConfig, load_config, parse_config
from .runner import Check, RunReport, run_scenario

__version__ = "0.1.0"

__all__ = [
    "AtomParams", "BlochState", "DipMetrics", "DriveFields",
    "PerturbativeDriveWarning", "SpectrumTable", "SteadyResponse",
    "closed_form_residual", "dip_metrics", "first_order_closed",
    "floquet_steady_solve", "integrate_bloch", "probe_spectrum",
    "steady_state_zeroth",
    "BoundaryContaminationError", "ConfigurationError", "CpoError",
    "InvalidEvolutionError", "InvalidRegimeError", "NoDipError",
    "NumericalDivergenceError", "ParameterError", "SingularDenominatorError",
    "SingularResponseError", "UndefinedCentroidError", "UnderResolvedError",
    "FarDetuningWarning", "LinearPotential", "MediumCoefficients",
    "couplings_from_alphas", "derive_coefficients", "linearized_potential",
    "probe_potential", "soliton_fd_residual", "soliton_profile",
    "BeamDiagnostics", "ComplexField1D", "DeflectionRecord", "DeflectionSetup",
    "TransverseGrid", "beam_diagnostics", "classify_direction",
    "deflection_experiment", "make_gaussian", "propagate_control",
    "propagate_probe",
    "GaussianPacket", "WeiNormanCoeffs", "evolve_gaussian_analytic",
    "trajectory_endpoint", "wn_closed_coefficients", "wn_integrate_odes",
    "ScenarioConfig", "load_config", "parse_config",
    "Check", "RunReport", "run_scenario",
    "__version__",
]
