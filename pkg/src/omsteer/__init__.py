"""Steady-state entanglement and EPR-steering maps for a squeezed-driven
two-cavity optomechanical model."""

from .errors import NumericalError, UnphysicalInputError, ValidationError
from .measures import (
    NonlocalityReport,
    TwoModeCM,
    log_negativity,
    physicality_margin,
    quadrature_variances,
    reduce_two_mode,
    solve_lyapunov,
    steering,
    two_mode_report,
)
from .model import (
    PhysicalParams,
    SqueezedField,
    SteadyState,
    SystemParams,
    build_diffusion,
    build_drift,
    convert_physical,
    physical_to_dimensionless,
    solve_steady_state,
    squeezed_moments,
)
from .stability import (
    StabilityReport,
    characteristic_polynomial,
    is_stable,
    max_real_eigenvalue,
    routh_hurwitz_stable,
)
from .sweep import (
    MEASURES,
    PRESET_NAMES,
    Axis,
    PointRecord,
    SweepResult,
    SweepSpec,
    evaluate_point,
    preset,
    run_sweep,
    theta_reflection_probe,
)

__version__ = "0.1.0"

__all__ = [
    "Axis", "MEASURES", "NonlocalityReport", "NumericalError",
    "PhysicalParams", "PointRecord", "PRESET_NAMES", "SqueezedField",
    "StabilityReport", "SteadyState", "SweepResult", "SweepSpec",
    "SystemParams", "TwoModeCM", "UnphysicalInputError", "ValidationError",
    "build_diffusion", "build_drift", "characteristic_polynomial",
    "convert_physical", "evaluate_point", "is_stable", "log_negativity",
    "max_real_eigenvalue", "physical_to_dimensionless", "physicality_margin",
    "preset", "quadrature_variances", "reduce_two_mode", "routh_hurwitz_stable",
    "run_sweep", "solve_lyapunov", "solve_steady_state", "squeezed_moments",
    "steering", "theta_reflection_probe", "two_mode_report",
]
