"""Parameter record, phase-plane coordinates and the complex Morse potential."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .units import ENERGY_UNIT_CM, UnitSystem

# H2 worked example (cm^-1, 1/Angstrom, amu)
H2_V_OR = 38266.0
H2_A_R = 1.868
H2_M_R = 0.5039


class ModelError(ValueError):
    """Base class for parameter combinations outside the solvable family."""


class DegenerateDenominator(ModelError):
    """m_r (a_r^2 - a_i^2) + 2 m_i a_r a_i vanishes (critical manifold)."""


class ComplexBeta3(ModelError):
    """The well-depth amplitude beta3 is not real."""


class NotNormalizable(ModelError):
    """alpha1 > 0 and beta1 > 0 do not both hold."""


@dataclass(frozen=True)
class SystemParameters:
    """Complex mass m_r + i m_i, complex Morse range a_r + i a_i, real depth v_or.

    ``hbar`` must match ``units``; use :meth:`create` or :meth:`h2` rather
    than passing it by hand.
    """

    m_r: float
    m_i: float
    a_r: float
    a_i: float
    v_or: float
    hbar: float = 1.0
    units: UnitSystem = UnitSystem.DIMENSIONLESS

    def __post_init__(self):
        for name in ("m_r", "m_i", "a_r", "a_i", "v_or", "hbar"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.m_r <= 0:
            raise ValueError(f"m_r must be positive, got {self.m_r}")
        if self.a_r <= 0:
            raise ValueError(f"a_r must be positive, got {self.a_r}")
        if self.v_or < 0:
            raise ValueError(f"v_or must be non-negative, got {self.v_or}")
        if self.hbar <= 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        object.__setattr__(self, "units", UnitSystem(self.units))

    @classmethod
    def create(cls, m_r, m_i, a_r, a_i, v_or, units=UnitSystem.DIMENSIONLESS):
        units = UnitSystem(units)
        return cls(
            float(m_r), float(m_i), float(a_r), float(a_i), float(v_or),
            hbar=units.hbar, units=units,
        )

    @classmethod
    def h2(cls, m_i=H2_M_R, a_i=H2_A_R):
        """H2 in spectroscopic units; defaults put m_i = m_r and a_i = a_r."""
        return cls.create(H2_M_R, m_i, H2_A_R, a_i, H2_V_OR, UnitSystem.SPECTROSCOPIC)

    def replace(self, **changes) -> SystemParameters:
        return dataclasses.replace(self, **changes)

    @property
    def mass(self) -> complex:
        return complex(self.m_r, self.m_i)

    @property
    def morse(self) -> complex:
        return complex(self.a_r, self.a_i)

    @property
    def mod_m_sq(self) -> float:
        return self.m_r**2 + self.m_i**2

    @property
    def prefactor(self) -> float:
        """hbar^2 / (2 |m|^2)."""
        return self.hbar**2 / (2.0 * self.mod_m_sq)

    @property
    def denominator(self) -> float:
        """D = m_r (a_r^2 - a_i^2) + 2 m_i a_r a_i."""
        return self.m_r * (self.a_r**2 - self.a_i**2) + 2.0 * self.m_i * self.a_r * self.a_i

    @property
    def denominator_scale(self) -> float:
        """Magnitude of the terms summed in :attr:`denominator`."""
        return self.m_r * (self.a_r**2 + self.a_i**2) + 2.0 * abs(self.m_i * self.a_r * self.a_i)

    def to_units(self, units: UnitSystem | str) -> SystemParameters:
        """Re-express in another unit system (amu and Angstrom are shared)."""
        units = UnitSystem(units)
        if units is self.units:
            return self
        if units is UnitSystem.SPECTROSCOPIC:
            v_or = self.v_or * ENERGY_UNIT_CM
        else:
            v_or = self.v_or / ENERGY_UNIT_CM
        return dataclasses.replace(self, v_or=v_or, hbar=units.hbar, units=units)


@dataclass(frozen=True)
class PhasePoint:
    """(x1, p2): the point x1 + i p2 of the complexified coordinate.

    Components may be numpy arrays of a common shape.
    """

    x1: float
    p2: float

    @property
    def z(self):
        return self.x1 + 1j * np.asarray(self.p2)


@dataclass(frozen=True)
class RotatedCoordinates:
    X: float
    Y: float


@dataclass(frozen=True)
class PotentialSplit:
    v_r: float
    v_i: float


def rotate(params: SystemParameters, point: PhasePoint) -> RotatedCoordinates:
    """X + iY = (a_r + i a_i)(x1 + i p2)."""
    x1, p2 = point.x1, point.p2
    return RotatedCoordinates(
        X=params.a_r * x1 - params.a_i * p2,
        Y=params.a_i * x1 + params.a_r * p2,
    )


def morse_brackets(rot: RotatedCoordinates):
    """Real and imaginary parts of e^{-2(X+iY)} - 2 e^{-(X+iY)}, sign-flipped imaginary.

    Returns (c, s) with c = e^{-2X}cos2Y - 2e^{-X}cosY and
    s = e^{-2X}sin2Y - 2e^{-X}sinY, so the complex value is c - i s.
    """
    e1 = np.exp(-rot.X)
    e2 = e1 * e1
    c = e2 * np.cos(2.0 * rot.Y) - 2.0 * e1 * np.cos(rot.Y)
    s = e2 * np.sin(2.0 * rot.Y) - 2.0 * e1 * np.sin(rot.Y)
    return c, s


def potential_split(params: SystemParameters, v_oi: float, point: PhasePoint) -> PotentialSplit:
    c, s = morse_brackets(rotate(params, point))
    return PotentialSplit(
        v_r=params.v_or * c + v_oi * s,
        v_i=v_oi * c - params.v_or * s,
    )


def morse_complex(params: SystemParameters, v_oi: float, z):
    """Direct complex evaluation V0 (e^{-2az} - 2 e^{-az}) with V0 = v_or + i v_oi."""
    az = params.morse * np.asarray(z)
    return complex(params.v_or, v_oi) * (np.exp(-2.0 * az) - 2.0 * np.exp(-az))


__all__ = [
    "ComplexBeta3",
    "DegenerateDenominator",
    "H2_A_R",
    "H2_M_R",
    "H2_V_OR",
    "ModelError",
    "NotNormalizable",
    "PhasePoint",
    "PotentialSplit",
    "RotatedCoordinates",
    "SystemParameters",
    "morse_brackets",
    "morse_complex",
    "potential_split",
    "rotate",
]
