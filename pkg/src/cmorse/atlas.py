"""Parameter-plane exploration over (m_i, a_i).

Region labels separate the allowed region from the negative-peak-density
and non-normalizable ones, plus two labels for the places where beta3 stops
existing.  Matter classes follow a five-way taxonomy with an explicit
precedence, plus a catch-all.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from scipy import optimize

from .closed_form import (
    DEGENERATE_TOL,
    EnergySpectrum,
    NormalizationStatus,
    beta3_radicand,
    coefficients,
    is_degenerate,
    normalization,
    spectrum,
)
from .core import SystemParameters
from .ros import DegenerateQuadratic, ZeroImaginaryMorse, ros_coefficients, ros_roots, ros_select


class RegionLabel(str, enum.Enum):
    NORMALIZABLE_POSITIVE = "NormalizablePositive"
    NEGATIVE_PPD = "NegativePPD"
    POSITIVE_NON_NORMALIZABLE = "PositiveNonNormalizable"
    COMPLEX_BETA3 = "ComplexBeta3"
    DEGENERATE_CRITICAL = "DegenerateCritical"


class MatterClass(str, enum.Enum):
    REAL_EIGENSPECTRAL = "RealEigenspectral"
    QUASI_STABLE = "QuasiStable"
    PURELY_COMPLEX = "PurelyComplex"
    NON_PHYSICAL = "NonPhysical"
    DETERMINISTIC = "Deterministic"
    GENERAL_COMPLEX = "GeneralComplex"


class Mode(str, enum.Enum):
    GENERAL = "general"
    ROS = "ros"


@dataclass(frozen=True)
class Thresholds:
    eta0: float = 0.05  # |E_i| <= eta0 |E_r| counts as quasi-stable
    eps: float = 1e-9  # |E_i| <= eps max(1, |E_r|) counts as E_i == 0
    tol: float = DEGENERATE_TOL  # relative band around D == 0

    def __post_init__(self):
        for name in ("eta0", "eps", "tol"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(f"{name} must be a finite non-negative number, got {value!r}")


def region_from_coefficients(alpha1: float, beta1: float) -> RegionLabel:
    if alpha1 > 0 and beta1 > 0:
        return RegionLabel.NORMALIZABLE_POSITIVE
    if alpha1 < 0 and beta1 < 0:
        return RegionLabel.POSITIVE_NON_NORMALIZABLE
    # opposite signs, or a coefficient sitting exactly on zero
    return RegionLabel.NEGATIVE_PPD


def classify_region(params: SystemParameters, tol: float = DEGENERATE_TOL) -> RegionLabel:
    if is_degenerate(params, tol):
        return RegionLabel.DEGENERATE_CRITICAL
    radicand = beta3_radicand(params)
    if radicand < 0:
        return RegionLabel.COMPLEX_BETA3
    co = coefficients(params, math.sqrt(radicand))
    return region_from_coefficients(co.alpha1, co.beta1)


def classify_matter(
    params: SystemParameters,
    spec: EnergySpectrum | None,
    norm_status: NormalizationStatus | None,
    thresholds: Thresholds = Thresholds(),
) -> MatterClass:
    """First matching rule wins:

    NonPhysical (not normalizable), Deterministic (E_i = 0 and a_r != a_i),
    RealEigenspectral (E_i = 0), PurelyComplex (E_r < 0 and E_i < 0),
    QuasiStable (0 < E_i <= eta0 |E_r|), GeneralComplex otherwise.
    """
    if spec is None or norm_status is None or not norm_status.normalizable:
        return MatterClass.NON_PHYSICAL
    e_r, e_i = spec.e_r, spec.e_i
    if abs(e_i) <= thresholds.eps * max(1.0, abs(e_r)):
        if params.a_r != params.a_i:
            return MatterClass.DETERMINISTIC
        return MatterClass.REAL_EIGENSPECTRAL
    if e_r < 0 and e_i < 0:
        return MatterClass.PURELY_COMPLEX
    if 0 < e_i <= thresholds.eta0 * abs(e_r):
        return MatterClass.QUASI_STABLE
    return MatterClass.GENERAL_COMPLEX


@dataclass(frozen=True)
class SweepRow:
    m_i: float
    a_i: float
    beta3: float
    alpha1: float
    beta1: float
    ppd: float
    e_r: float
    e_i: float
    region: RegionLabel
    matter: MatterClass

    FIELDS = ("m_i", "a_i", "beta3", "alpha1", "beta1", "ppd", "E_r", "E_i", "region", "matter")

    def values(self):
        return (self.m_i, self.a_i, self.beta3, self.alpha1, self.beta1, self.ppd,
                self.e_r, self.e_i, self.region.value, self.matter.value)


_NAN = math.nan


def _row(params, beta3, region, thresholds):
    if beta3 is None:
        return SweepRow(params.m_i, params.a_i, _NAN, _NAN, _NAN, _NAN, _NAN, _NAN,
                        region, MatterClass.NON_PHYSICAL)
    co = coefficients(params, beta3)
    spec = spectrum(params, co)
    status = normalization(co)
    if region is not RegionLabel.NORMALIZABLE_POSITIVE:
        # the region verdict is final, including the rounding margin used for root selection
        status = NormalizationStatus(False, None, status.violated_constraints)
    matter = classify_matter(params, spec, status, thresholds)
    return SweepRow(params.m_i, params.a_i, beta3, co.alpha1, co.beta1, co.alpha1 * co.beta1,
                    spec.e_r, spec.e_i, region, matter)


def ros_beta3(params: SystemParameters):
    """(beta3, region) in the real-spectrum branch.

    The selected root when there is one; otherwise the non-negative root,
    labelled by the signs of its alpha1, beta1.  A degenerate quadratic
    (a_i == 0 or A == 0) is labelled DegenerateCritical with no beta3.
    """
    try:
        roots = ros_roots(ros_coefficients(params))
    except (ZeroImaginaryMorse, DegenerateQuadratic):
        return None, RegionLabel.DEGENERATE_CRITICAL
    sol = ros_select(params, roots)
    if sol.selected is not None:
        return sol.selected, RegionLabel.NORMALIZABLE_POSITIVE
    beta3 = max(roots)
    co = coefficients(params, beta3)
    region = region_from_coefficients(co.alpha1, co.beta1)
    if region is RegionLabel.NORMALIZABLE_POSITIVE:
        # inside the rounding margin of the strict inequalities
        region = RegionLabel.NEGATIVE_PPD
    return beta3, region


def evaluate(params: SystemParameters, mode: Mode | str = Mode.GENERAL,
             thresholds: Thresholds = Thresholds()) -> SweepRow:
    """One row of a parameter sweep."""
    mode = Mode(mode)
    if mode is Mode.ROS:
        beta3, region = ros_beta3(params)
        return _row(params, beta3, region, thresholds)
    region = classify_region(params, thresholds.tol)
    if region in (RegionLabel.DEGENERATE_CRITICAL, RegionLabel.COMPLEX_BETA3):
        return _row(params, None, region, thresholds)
    return _row(params, math.sqrt(beta3_radicand(params)), region, thresholds)


@dataclass(frozen=True)
class AxisSpec:
    axis: str
    min: float
    max: float
    count: int

    def __post_init__(self):
        if self.axis not in ("m_i", "a_i"):
            raise ValueError(f"axis must be 'm_i' or 'a_i', got {self.axis!r}")
        if self.count < 2:
            raise ValueError("count must be at least 2")
        if not self.min < self.max:
            raise ValueError("min must be smaller than max")

    def values(self):
        step = (self.max - self.min) / (self.count - 1)
        # exact endpoints; interior points by index to avoid accumulated drift
        return [self.min + i * step if i < self.count - 1 else self.max for i in range(self.count)]


def sweep(params_base: SystemParameters, axis_spec: AxisSpec, fixed_overrides=None, *,
          mode: Mode | str = Mode.GENERAL, thresholds: Thresholds = Thresholds(),
          second_axis: AxisSpec | None = None) -> list[SweepRow]:
    """Rows in ascending order of ``axis_spec`` (outer) and ``second_axis`` (inner)."""
    base = params_base.replace(**(fixed_overrides or {}))
    rows = []
    for value in axis_spec.values():
        p = base.replace(**{axis_spec.axis: value})
        if second_axis is None:
            rows.append(evaluate(p, mode, thresholds))
            continue
        for inner in second_axis.values():
            rows.append(evaluate(p.replace(**{second_axis.axis: inner}), mode, thresholds))
    return rows


class NoSignChange(ValueError):
    """The denominator has the same sign at both ends of the bracket."""


@dataclass(frozen=True)
class CriticalValue:
    axis: str
    value: float
    kind: str = "denominator_root"
    bracket: tuple[float, float] = field(default=(math.nan, math.nan))


def critical_a_i_roots(params: SystemParameters) -> tuple[float, float]:
    """Both roots of D(a_i) = -m_r a_i^2 + 2 m_i a_r a_i + m_r a_r^2 (ascending)."""
    root = math.sqrt(params.mod_m_sq)
    return (params.a_r * (params.m_i - root) / params.m_r,
            params.a_r * (params.m_i + root) / params.m_r)


def critical_m_i(params: SystemParameters) -> float:
    """Root of D(m_i), linear in m_i; needs a_i != 0."""
    if params.a_i == 0:
        raise NoSignChange("D does not depend on m_i when a_i = 0")
    return -params.m_r * (params.a_r**2 - params.a_i**2) / (2.0 * params.a_r * params.a_i)


def default_bracket(params: SystemParameters, axis: str) -> tuple[float, float]:
    if axis == "a_i":
        # D(0) = m_r a_r^2 > 0 and the positive root sits below this bound
        return 0.0, 2.0 * params.a_r * (abs(params.m_i) + math.sqrt(params.mod_m_sq)) / params.m_r + params.a_r
    if axis == "m_i":
        span = params.m_r * (params.a_r**2 + params.a_i**2) / (2.0 * params.a_r * max(abs(params.a_i), 1e-300))
        return -2.0 * span - params.m_r, 2.0 * span + params.m_r
    raise ValueError(f"axis must be 'm_i' or 'a_i', got {axis!r}")


def find_critical(params_base: SystemParameters, axis: str, lo: float | None = None,
                  hi: float | None = None, xtol: float = 1e-9, max_iter: int = 400) -> CriticalValue:
    """Bisection on D along ``axis`` to an interval narrower than ``xtol``.

    ``bracket`` is the search interval across which D was seen to change sign.
    """
    if lo is None or hi is None:
        dlo, dhi = default_bracket(params_base, axis)
        lo = dlo if lo is None else lo
        hi = dhi if hi is None else hi

    def d(value):
        return params_base.replace(**{axis: value}).denominator

    f_lo, f_hi = d(lo), d(hi)
    if f_lo == 0:
        return CriticalValue(axis, lo, bracket=(lo, lo))
    if f_hi == 0:
        return CriticalValue(axis, hi, bracket=(hi, hi))
    if (f_lo > 0) == (f_hi > 0):
        raise NoSignChange(f"D has the same sign at {axis}={lo} and {axis}={hi}")
    root = optimize.bisect(d, lo, hi, xtol=xtol, maxiter=max_iter)
    return CriticalValue(axis, root, bracket=(lo, hi))
