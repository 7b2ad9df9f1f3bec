"""Closed-form ground state: ansatz coefficients, eigenvalue, normalization.

The phase of the ground state is

    g(z) = (beta1 + i alpha1) z + beta3 exp(-a z),   z = x1 + i p2,

so that psi = exp(i g) = N exp[(1/2 + i beta3) a z + i beta3 exp(-a z)] once
alpha1 = beta3 a_i - a_r/2 and beta1 = beta3 a_r + a_i/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    ComplexBeta3,
    DegenerateDenominator,
    NotNormalizable,
    PhasePoint,
    SystemParameters,
    rotate,
)

# |D| <= DEGENERATE_TOL * (scale of D) counts as D == 0
DEGENERATE_TOL = 1e-12

ALPHA1_NONPOSITIVE = "alpha1_nonpositive"
BETA1_NONPOSITIVE = "beta1_nonpositive"


@dataclass(frozen=True)
class SolutionCoefficients:
    alpha1: float
    beta1: float
    beta3: float


@dataclass(frozen=True)
class EnergySpectrum:
    e_r: float
    e_i: float

    @property
    def value(self) -> complex:
        return complex(self.e_r, self.e_i)


@dataclass(frozen=True)
class NormalizationStatus:
    normalizable: bool
    constant_n: float | None = None
    violated_constraints: tuple[str, ...] = field(default_factory=tuple)


def is_degenerate(params: SystemParameters, tol: float = DEGENERATE_TOL) -> bool:
    return abs(params.denominator) <= tol * params.denominator_scale


def beta3_radicand(params: SystemParameters) -> float:
    """2 |m|^2 v_or / (hbar^2 D); raises on D == 0."""
    if is_degenerate(params):
        raise DegenerateDenominator(f"D = {params.denominator!r} vanishes for {params}")
    return 2.0 * params.mod_m_sq * params.v_or / (params.hbar**2 * params.denominator)


def beta3_forward(params: SystemParameters) -> float:
    """Non-negative beta3 fixed by the real well depth."""
    radicand = beta3_radicand(params)
    if radicand < 0:
        raise ComplexBeta3(f"beta3^2 = {radicand!r} < 0")
    return math.sqrt(radicand)


def voi_constraint(params: SystemParameters) -> float:
    """Imaginary well depth implied by v_or and the mass/range parameters."""
    if is_degenerate(params):
        raise DegenerateDenominator(f"D = {params.denominator!r} vanishes for {params}")
    m_r, m_i, a_r, a_i = params.m_r, params.m_i, params.a_r, params.a_i
    numerator = 2.0 * m_r * a_r * a_i - m_i * (a_r**2 - a_i**2)
    return params.v_or * numerator / params.denominator


def coefficients(params: SystemParameters, beta3: float) -> SolutionCoefficients:
    return SolutionCoefficients(
        alpha1=beta3 * params.a_i - params.a_r / 2.0,
        beta1=beta3 * params.a_r + params.a_i / 2.0,
        beta3=beta3,
    )


def spectrum(params: SystemParameters, coeffs: SolutionCoefficients) -> EnergySpectrum:
    """E_r + i E_i written in beta3 and the Morse range parameters."""
    m_r, m_i, a_r, a_i = params.m_r, params.m_i, params.a_r, params.a_i
    b3 = coeffs.beta3
    diff = a_r**2 - a_i**2
    cross = 2.0 * a_r * a_i
    shifted = b3**2 - 0.25
    u = diff * shifted + b3 * cross
    v = cross * shifted - b3 * diff
    k = params.prefactor
    return EnergySpectrum(e_r=k * (m_r * u + m_i * v), e_i=k * (m_r * v - m_i * u))


def spectrum_from_alpha_beta(params: SystemParameters, coeffs: SolutionCoefficients) -> EnergySpectrum:
    """Same eigenvalue written in (alpha1, beta1); hbar^2 (beta1 + i alpha1)^2 / 2m."""
    a1, b1 = coeffs.alpha1, coeffs.beta1
    k = params.prefactor
    sq = b1**2 - a1**2
    cross = 2.0 * a1 * b1
    return EnergySpectrum(
        e_r=k * (params.m_r * sq + params.m_i * cross),
        e_i=k * (params.m_r * cross - params.m_i * sq),
    )


def normalization(coeffs: SolutionCoefficients) -> NormalizationStatus:
    violated = []
    if not coeffs.alpha1 > 0:
        violated.append(ALPHA1_NONPOSITIVE)
    if not coeffs.beta1 > 0:
        violated.append(BETA1_NONPOSITIVE)
    if violated:
        return NormalizationStatus(False, None, tuple(violated))
    return NormalizationStatus(True, math.sqrt(coeffs.alpha1 * coeffs.beta1), ())


def _require_normalizable(coeffs):
    status = normalization(coeffs)
    if not status.normalizable:
        raise NotNormalizable(f"{coeffs} violates {', '.join(status.violated_constraints)}")
    return status


def peak_probability_density(coeffs: SolutionCoefficients) -> float:
    """alpha1 * beta1, the density at the phase-plane origin (may be negative)."""
    return coeffs.alpha1 * coeffs.beta1


def probability_density(coeffs: SolutionCoefficients, point: PhasePoint):
    """alpha1 beta1 exp(-2 (alpha1 |x1| + beta1 |p2|)).

    This is the separable density the normalization constant is built from.
    It leaves out the beta3 e^{-X} sin Y part of the true modulus; see
    :func:`exact_modulus` for that.
    """
    _require_normalizable(coeffs)
    a1, b1 = coeffs.alpha1, coeffs.beta1
    return a1 * b1 * np.exp(-2.0 * (a1 * np.abs(point.x1) + b1 * np.abs(point.p2)))


def phase_functions(params: SystemParameters, coeffs: SolutionCoefficients, point: PhasePoint):
    """(g_r, g_i) on the phase plane."""
    rot = rotate(params, point)
    tail = coeffs.beta3 * np.exp(-rot.X)
    g_r = coeffs.beta1 * point.x1 - coeffs.alpha1 * point.p2 + tail * np.cos(rot.Y)
    g_i = coeffs.alpha1 * point.x1 + coeffs.beta1 * point.p2 - tail * np.sin(rot.Y)
    return g_r, g_i


def exact_modulus(params: SystemParameters, coeffs: SolutionCoefficients, point: PhasePoint):
    """N^2 exp(-2 g_i): the squared modulus of the normalized eigenfunction itself."""
    status = _require_normalizable(coeffs)
    _, g_i = phase_functions(params, coeffs, point)
    return status.constant_n**2 * np.exp(-2.0 * g_i)


def wavefunction(params: SystemParameters, coeffs: SolutionCoefficients, n: float, point: PhasePoint):
    """(psi_r, psi_i) = N e^{-g_i} (cos g_r, sin g_r)."""
    _require_normalizable(coeffs)
    g_r, g_i = phase_functions(params, coeffs, point)
    envelope = n * np.exp(-g_i)
    return envelope * np.cos(g_r), envelope * np.sin(g_r)


def wavefunction_complex(params: SystemParameters, beta3: float, n: float, z):
    """N exp[(1/2 + i beta3) a z + i beta3 exp(-a z)], evaluated in complex arithmetic."""
    az = params.morse * np.asarray(z)
    return n * np.exp((0.5 + 1j * beta3) * az + 1j * beta3 * np.exp(-az))


def time_envelope(spec: EnergySpectrum, hbar: float, t: float):
    """(amplitude, phase) = (exp(-E_i t / hbar), E_r t / hbar)."""
    return math.exp(-spec.e_i * t / hbar), spec.e_r * t / hbar


def temporal_behaviour(spec: EnergySpectrum, eps: float = 1e-9) -> str:
    """'stable', 'damped' or 'amplified' according to the sign of E_i."""
    if abs(spec.e_i) <= eps * max(1.0, abs(spec.e_r)):
        return "stable"
    return "damped" if spec.e_i > 0 else "amplified"


@dataclass(frozen=True)
class Solution:
    params: SystemParameters
    v_oi: float
    coeffs: SolutionCoefficients
    spectrum: EnergySpectrum
    norm: NormalizationStatus

    @property
    def beta3(self) -> float:
        return self.coeffs.beta3

    @property
    def ppd(self) -> float:
        return peak_probability_density(self.coeffs)


def solve(params: SystemParameters, beta3: float | None = None) -> Solution:
    """Full closed-form solution; ``beta3`` defaults to :func:`beta3_forward`."""
    if beta3 is None:
        beta3 = beta3_forward(params)
    coeffs = coefficients(params, beta3)
    return Solution(
        params=params,
        v_oi=voi_constraint(params),
        coeffs=coeffs,
        spectrum=spectrum(params, coeffs),
        norm=normalization(coeffs),
    )
