"""Physical constants and the two unit systems used by the solvers.

``dimensionless``
    hbar = 1.  Masses, inverse lengths and energies are plain numbers.
``spectroscopic``
    Energies in cm^-1, lengths in Angstrom, inverse lengths in 1/Angstrom,
    masses in amu (the mass "0.5039" of the H2 worked example is read as amu).

The two are tied together by taking 1 amu and 1 Angstrom as the mass and
length units of the dimensionless system, so one dimensionless energy unit
is hbar^2 / (amu * Angstrom^2) = 2 K cm^-1.
"""

from __future__ import annotations

import enum
import math

# CODATA 2018
HBAR_SI = 1.054571817e-34  # J s
PLANCK_SI = 6.62607015e-34  # J s (exact)
LIGHT_SPEED_SI = 299792458.0  # m / s (exact)
AMU_SI = 1.66053906660e-27  # kg
ANGSTROM_SI = 1e-10  # m

# 1 cm^-1 expressed in joules
WAVENUMBER_SI = PLANCK_SI * LIGHT_SPEED_SI * 100.0

# hbar^2 (1/Angstrom)^2 / (2 amu), in cm^-1
KINETIC_CONSTANT_CM = HBAR_SI**2 / (2.0 * AMU_SI * ANGSTROM_SI**2) / WAVENUMBER_SI

# hbar in units where hbar^2 / 2 == KINETIC_CONSTANT_CM (amu, Angstrom, cm^-1)
HBAR_SPECTROSCOPIC = math.sqrt(2.0 * KINETIC_CONSTANT_CM)

# one dimensionless energy unit in cm^-1
ENERGY_UNIT_CM = 2.0 * KINETIC_CONSTANT_CM


class UnitSystem(str, enum.Enum):
    DIMENSIONLESS = "dimensionless"
    SPECTROSCOPIC = "spectroscopic"

    @property
    def hbar(self) -> float:
        if self is UnitSystem.DIMENSIONLESS:
            return 1.0
        return HBAR_SPECTROSCOPIC


def kinetic_constant(system: UnitSystem | str) -> float:
    """Return hbar^2/2 in the units of ``system``.

    hbar^2/(2m) for a mass ``m`` is then ``kinetic_constant(system) / m``;
    see :func:`kinetic_prefactor`.
    """
    system = UnitSystem(system)
    if system is UnitSystem.DIMENSIONLESS:
        return 0.5
    return KINETIC_CONSTANT_CM


def kinetic_prefactor(system: UnitSystem | str, mass: float) -> float:
    """hbar^2 / (2 * mass) in the energy units of ``system``."""
    return kinetic_constant(system) / mass


def energy_to_spectroscopic(value: float) -> float:
    return value * ENERGY_UNIT_CM


def energy_to_dimensionless(value: float) -> float:
    return value / ENERGY_UNIT_CM
