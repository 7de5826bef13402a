"""Optical Bloch equations for a driven, damped two-level system."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    GROUND,
    BlochVector,
    DensityMatrix,
    DriveParams,
    RelaxationParams,
    SystemParams,
    ThermalParams,
    bloch_from_density,
    density_from_bloch,
    interference,
    purity,
    thermal_population_difference,
    validate_physicality,
)
from .analytic import (  # noqa: E402
    DampingRegime,
    classify_regime,
    equilibrium_state,
    evaluate,
    optimal_rabi,
    solve,
    solve_coefficients,
)

__all__ = [
    "GROUND",
    "BlochVector",
    "DensityMatrix",
    "DriveParams",
    "RelaxationParams",
    "SystemParams",
    "ThermalParams",
    "bloch_from_density",
    "density_from_bloch",
    "interference",
    "purity",
    "thermal_population_difference",
    "validate_physicality",
    "DampingRegime",
    "classify_regime",
    "equilibrium_state",
    "evaluate",
    "optimal_rabi",
    "solve",
    "solve_coefficients",
]
