"""Complex-mass particle in a complex Morse potential on the extended complex phase plane."""

from .closed_form import (
    EnergySpectrum,
    NormalizationStatus,
    Solution,
    SolutionCoefficients,
    beta3_forward,
    coefficients,
    normalization,
    probability_density,
    solve,
    spectrum,
    time_envelope,
    voi_constraint,
    wavefunction,
)
from .core import (
    ComplexBeta3,
    DegenerateDenominator,
    ModelError,
    NotNormalizable,
    PhasePoint,
    SystemParameters,
    potential_split,
    rotate,
)
from .units import UnitSystem, kinetic_constant

__version__ = "0.1.0"

__all__ = [
    "ComplexBeta3",
    "DegenerateDenominator",
    "EnergySpectrum",
    "ModelError",
    "NormalizationStatus",
    "NotNormalizable",
    "PhasePoint",
    "Solution",
    "SolutionCoefficients",
    "SystemParameters",
    "UnitSystem",
    "beta3_forward",
    "coefficients",
    "kinetic_constant",
    "normalization",
    "potential_split",
    "probability_density",
    "rotate",
    "solve",
    "spectrum",
    "time_envelope",
    "voi_constraint",
    "wavefunction",
]
