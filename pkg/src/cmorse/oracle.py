"""Brute-force checks of the closed forms.

Nothing in here reuses the eigenvalue or coefficient formulas: derivatives
come from finite differences of the analytic phase, potentials from the
split real/imaginary form, and norms from Gauss-Legendre quadrature.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .closed_form import (
    NotNormalizable,
    SolutionCoefficients,
    normalization,
    phase_functions,
)
from .core import ModelError, PhasePoint, SystemParameters, morse_brackets, rotate


def _phase_x1_derivatives(params, coeffs, point, h):
    """g', g'' along x1 by second-order central differences (p2 held fixed)."""
    x1, p2 = np.asarray(point.x1, dtype=float), np.asarray(point.p2, dtype=float)
    gp_r, gp_i = phase_functions(params, coeffs, PhasePoint(x1 + h, p2))
    g0_r, g0_i = phase_functions(params, coeffs, PhasePoint(x1, p2))
    gm_r, gm_i = phase_functions(params, coeffs, PhasePoint(x1 - h, p2))
    d1 = ((gp_r - gm_r) / (2 * h), (gp_i - gm_i) / (2 * h))
    d2 = ((gp_r - 2 * g0_r + gm_r) / h**2, (gp_i - 2 * g0_i + gm_i) / h**2)
    return d1, d2


def pde_terms(params, v_oi, coeffs, spec, point, h, *, v_or=None):
    """Signed left-minus-right of both coupled phase equations and their common scale.

    First equation:  k[m_r(-g_r'' + 2 g_r' g_i') + m_i(g_i'^2 - g_r'^2 - g_i'')] = E_i - V_i
    Second equation: k[m_r(g_i'^2 - g_r'^2 - g_i'') - m_i(-g_r'' + 2 g_r' g_i')] = V_r - E_r

    with k = hbar^2 / 2|m|^2.  ``v_or`` overrides the real well depth used for
    the potential (defaults to ``params.v_or``).
    """
    if v_or is None:
        v_or = params.v_or
    (r1, i1), (r2, i2) = _phase_x1_derivatives(params, coeffs, point, h)
    k = params.prefactor
    cross = -r2 + 2.0 * r1 * i1
    square = i1 * i1 - r1 * r1 - i2
    rot = rotate(params, point)
    c, s = morse_brackets(rot)
    v_r = v_or * c + v_oi * s
    v_i = v_oi * c - v_or * s
    diff_a = k * (params.m_r * cross + params.m_i * square) - (spec.e_i - v_i)
    diff_b = k * (params.m_r * square - params.m_i * cross) - (v_r - spec.e_r)

    e1 = np.exp(-rot.X)
    kinetic = k * (params.m_r + abs(params.m_i)) * (r1 * r1 + i1 * i1 + np.abs(r2) + np.abs(i2))
    potential = math.hypot(v_or, v_oi) * (e1 * e1 + 2.0 * e1)
    scale = kinetic + potential + abs(spec.e_r) + abs(spec.e_i)
    return diff_a, diff_b, scale


def pde_residual(params, v_oi, coeffs, spec, point, h, *, scaled=False, v_or=None):
    """Absolute (or scale-relative) residuals of the two coupled phase equations."""
    if not h > 0:
        raise ValueError("h must be positive")
    diff_a, diff_b, scale = pde_terms(params, v_oi, coeffs, spec, point, h, v_or=v_or)
    if scaled:
        return np.abs(diff_a) / scale, np.abs(diff_b) / scale
    return np.abs(diff_a), np.abs(diff_b)


def _phases(params, coeffs, x1, p2, corrupt):
    g_r, g_i = phase_functions(params, coeffs, PhasePoint(x1, p2))
    if corrupt:
        swapped = SolutionCoefficients(coeffs.beta1, coeffs.alpha1, coeffs.beta3)
        _, g_i = phase_functions(params, swapped, PhasePoint(x1, p2))
    return g_r, g_i


def _psi(params, coeffs, n, x1, p2, corrupt, g_i_ref=0.0):
    """Eigenfunction divided by exp(-g_i_ref); the rescaling keeps far grid corners finite."""
    g_r, g_i = _phases(params, coeffs, x1, p2, corrupt)
    envelope = n * np.exp(-(g_i - g_i_ref))
    return envelope * np.cos(g_r), envelope * np.sin(g_r)


# first-derivative central stencil, eighth order: offsets 1..4 (antisymmetric).
# On the default grid |g'| h reaches ~0.3, where lower orders leave >1e-6 error.
_STENCIL = ((1, 4.0 / 5.0), (2, -1.0 / 5.0), (3, 4.0 / 105.0), (4, -1.0 / 280.0))


def _central(f, x1, p2, h, along):
    """Eighth-order central difference of f(x1, p2) along one coordinate."""
    def shifted(step):
        if along == 0:
            return f(x1 + step, p2)
        return f(x1, p2 + step)

    acc = None
    for k, w in _STENCIL:
        fp, fm = shifted(k * h), shifted(-k * h)
        term = tuple(w * (a - b) for a, b in zip(fp, fm))
        acc = term if acc is None else tuple(x + y for x, y in zip(acc, term))
    return tuple(x / h for x in acc)


def cr_residual(params, coeffs, n, point, h, *, swap_imaginary=False):
    """Cauchy-Riemann mismatches of the eigenfunction, relative to its gradient size.

    Both mismatches and the scale carry the same factor exp(-g_i), so the
    eigenfunction is evaluated relative to its value at ``point``.

    Returns (|d psi_r/dx1 - d psi_i/dp2|, |d psi_r/dp2 + d psi_i/dx1|), each
    divided by the sum of the four partial-derivative magnitudes.
    ``swap_imaginary`` exchanges alpha1 and beta1 inside g_i only, which breaks
    analyticity and serves as a negative control.
    """
    if not h > 0:
        raise ValueError("h must be positive")
    x1, p2 = np.asarray(point.x1, dtype=float), np.asarray(point.p2, dtype=float)
    _, g_i_ref = _phases(params, coeffs, x1, p2, swap_imaginary)

    def f(a, b):
        return _psi(params, coeffs, n, a, b, swap_imaginary, g_i_ref)

    dr_dx, di_dx = _central(f, x1, p2, h, 0)
    dr_dp, di_dp = _central(f, x1, p2, h, 1)
    scale = np.abs(dr_dx) + np.abs(di_dx) + np.abs(dr_dp) + np.abs(di_dp)
    scale = np.where(scale > 0, scale, 1.0)
    return np.abs(dr_dx - di_dp) / scale, np.abs(dr_dp + di_dx) / scale


@dataclass(frozen=True)
class CoefficientResiduals:
    """Left-minus-right of the six coefficient-matching relations."""

    e_r: float
    e_i: float
    v_or_linear: float
    v_oi_linear: float
    v_oi_quadratic: float
    v_or_quadratic: float
    scales: tuple[float, ...] = field(default=(), repr=False)

    def as_tuple(self):
        return (self.e_r, self.e_i, self.v_or_linear, self.v_oi_linear,
                self.v_oi_quadratic, self.v_or_quadratic)

    def scaled(self):
        return tuple(abs(r) / s if s else abs(r) for r, s in zip(self.as_tuple(), self.scales))


def coefficient_residuals(params, v_oi, coeffs, spec) -> CoefficientResiduals:
    m_r, m_i, a_r, a_i = params.m_r, params.m_i, params.a_r, params.a_i
    a1, b1, b3 = coeffs.alpha1, coeffs.beta1, coeffs.beta3
    hb2, msq = params.hbar**2, params.mod_m_sq
    k = hb2 / (2 * msq)

    sq, cr = b1 * b1 - a1 * a1, 2 * a1 * b1
    e_r = k * (m_r * sq + m_i * cr)
    e_i = k * (m_r * cr - m_i * sq)

    p = 2 * b1 * a_r - 2 * a1 * a_i - 2 * a_r * a_i
    q = (a_r**2 - a_i**2) + 2 * a1 * a_r + 2 * b1 * a_i
    lin = -hb2 * b3 / (4 * msq)
    v_or_lin = lin * (m_r * p + m_i * q)
    v_oi_lin = lin * (m_r * q - m_i * p)

    quad = hb2 * b3 * b3 / (2 * msq)
    v_oi_quad = quad * (m_r * 2 * a_r * a_i - m_i * (a_r**2 - a_i**2))
    v_or_quad = quad * (m_r * (a_r**2 - a_i**2) + m_i * 2 * a_r * a_i)

    pairs = [
        (spec.e_r, e_r), (spec.e_i, e_i),
        (params.v_or, v_or_lin), (v_oi, v_oi_lin),
        (v_oi, v_oi_quad), (params.v_or, v_or_quad),
    ]
    diffs = [lhs - rhs for lhs, rhs in pairs]
    scales = tuple(max(abs(lhs), abs(rhs)) for lhs, rhs in pairs)
    return CoefficientResiduals(*diffs, scales=scales)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(48)


def quadrature_1d(rate: float, panels: int = 8, cutoff: float = 40.0) -> float:
    """Integral of exp(-2 rate |x|) over the real line.

    Composite Gauss-Legendre on [0, L] with L = cutoff / (2 rate), plus the
    exact tail beyond L.
    """
    if not rate > 0:
        raise NotNormalizable(f"decay rate {rate} is not positive")
    length = cutoff / (2.0 * rate)
    edges = np.linspace(0.0, length, panels + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        x = 0.5 * (hi - lo) * _GL_NODES + 0.5 * (hi + lo)
        total += 0.5 * (hi - lo) * np.dot(_GL_WEIGHTS, np.exp(-2.0 * rate * x))
    tail = math.exp(-cutoff) / (2.0 * rate)
    return 2.0 * (total + tail)


def quadrature_norm(coeffs: SolutionCoefficients) -> float:
    """N^2 times the double integral of exp(-2(alpha1|x1| + beta1|p2|))."""
    status = normalization(coeffs)
    if not status.normalizable:
        raise NotNormalizable(f"{coeffs} violates {', '.join(status.violated_constraints)}")
    n_sq = status.constant_n**2
    return n_sq * quadrature_1d(coeffs.alpha1) * quadrature_1d(coeffs.beta1)


def phase_grid(params: SystemParameters, count: int = 21, lo: float = -2.0, hi: float = 4.0):
    """count x count grid on [lo/a_r, hi/a_r]^2, flattened row-major (x1 slowest)."""
    axis = np.linspace(lo / params.a_r, hi / params.a_r, count)
    x1, p2 = np.meshgrid(axis, axis, indexing="ij")
    return PhasePoint(x1.ravel(), p2.ravel())


@dataclass
class ResidualReport:
    eq10a_residual: float
    eq10b_residual: float
    cr_residual_pair: tuple[float, float]
    max_abs: float
    grid_spec: dict
    eq10a_scaled: float = 0.0
    eq10b_scaled: float = 0.0

    def to_dict(self):
        d = asdict(self)
        d["cr_residual_pair"] = list(self.cr_residual_pair)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def residual_report(params, v_oi, coeffs, spec, *, count=21, lo=-2.0, hi=4.0, h=None,
                    v_or=None) -> ResidualReport:
    """Maximum residuals over the default phase grid."""
    if h is None:
        h = 1e-4 / params.a_r
    pts = phase_grid(params, count, lo, hi)
    ra, rb = pde_residual(params, v_oi, coeffs, spec, pts, h, v_or=v_or)
    sa, sb = pde_residual(params, v_oi, coeffs, spec, pts, h, scaled=True, v_or=v_or)
    n = normalization(coeffs).constant_n
    if n is None:
        cr = (math.nan, math.nan)
    else:
        c1, c2 = cr_residual(params, coeffs, n, pts, h)
        cr = (float(np.max(c1)), float(np.max(c2)))
    grid = {
        "x1_range": [lo / params.a_r, hi / params.a_r],
        "p2_range": [lo / params.a_r, hi / params.a_r],
        "steps": [count, count],
        "h": h,
    }
    ea, eb = float(np.max(ra)), float(np.max(rb))
    return ResidualReport(ea, eb, cr, max(ea, eb), grid, float(np.max(sa)), float(np.max(sb)))


# keeps |g'| h small on the default grid; beta3 blows up near the critical manifold
MAX_RANDOM_BETA3 = 10.0


def random_valid_params(rng: np.random.Generator, max_tries: int = 1000) -> SystemParameters:
    """Dimensionless parameters with real beta3 and a normalizable ground state."""
    from .closed_form import beta3_forward, coefficients

    for _ in range(max_tries):
        a_r = rng.uniform(0.5, 2.0)
        params = SystemParameters.create(
            m_r=rng.uniform(0.5, 2.0),
            m_i=rng.uniform(-1.0, 2.0),
            a_r=a_r,
            a_i=a_r * rng.uniform(0.25, 1.0),
            v_or=rng.uniform(0.5, 5.0),
        )
        try:
            b3 = beta3_forward(params)
        except ModelError:
            continue
        if b3 <= MAX_RANDOM_BETA3 and normalization(coefficients(params, b3)).normalizable:
            return params
    raise RuntimeError("no valid parameter set found")


def random_normalizable_coefficients(rng: np.random.Generator) -> SolutionCoefficients:
    return SolutionCoefficients(rng.uniform(0.05, 20.0), rng.uniform(0.05, 20.0), rng.uniform(0, 5))
