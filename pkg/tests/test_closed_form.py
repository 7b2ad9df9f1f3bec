import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from cmorse import closed_form as cf
from cmorse.core import ComplexBeta3, DegenerateDenominator, NotNormalizable, PhasePoint, SystemParameters
from cmorse.oracle import coefficient_residuals, quadrature_norm


def p(m_r, m_i, a_r, a_i, v_or):
    return SystemParameters.create(m_r, m_i, a_r, a_i, v_or)


@pytest.mark.parametrize("params,expected", [
    (p(1, 1, 1, 1, 2), 2.0),
    (p(1, 0, 1, 0, 0.5), 1.0),
    (p(1, 1, 1, 1, 0), 0.0),
])
def test_beta3_forward_examples(params, expected):
    b3 = cf.beta3_forward(params)
    assert b3 == pytest.approx(expected, rel=1e-15)
    # the depth relation read backwards reproduces v_or
    res = coefficient_residuals(params, cf.voi_constraint(params), cf.coefficients(params, b3),
                                cf.spectrum(params, cf.coefficients(params, b3)))
    assert abs(res.v_or_quadratic) <= 1e-12 * max(1.0, params.v_or)


def test_beta3_errors(h2):
    with pytest.raises(ComplexBeta3):
        cf.beta3_forward(h2.replace(a_i=-1.0))
    with pytest.raises(DegenerateDenominator):
        cf.beta3_forward(p(1, 0, 1, 1, 1))  # D = m_r (a_r^2 - a_i^2) = 0


@pytest.mark.parametrize("params,expected", [
    (p(0.7, 0.7, 1.3, 1.3, 5.0), 5.0),
    (p(1, 0, 1, 0, 3.0), 0.0),
    (p(1, 1, 1, 1, 2), 2.0),
])
def test_voi_constraint_examples(params, expected):
    assert cf.voi_constraint(params) == pytest.approx(expected, rel=1e-14, abs=1e-15)


def test_coefficient_examples(h2):
    co = cf.coefficients(p(1, 1, 1, 1, 2), 2.0)
    assert (co.alpha1, co.beta1) == (1.5, 2.5)
    assert cf.coefficients(p(1, 0, 1.7, 0, 1), 3.3).alpha1 == -0.85
    b3 = cf.beta3_forward(h2)
    # hand derivation: beta3^2 = 2 m_r V_or / (hbar^2 a_r^2) when m_i = m_r, a_i = a_r
    k = 16.857629
    assert b3 == pytest.approx(math.sqrt(0.5039 * 38266 / (k * 1.868**2)), rel=1e-6)
    co = cf.coefficients(h2, b3)
    assert co.alpha1 == pytest.approx(32.8865, abs=1e-3)
    assert co.beta1 == pytest.approx(34.7545, abs=1e-3)


def test_golden_spectrum(golden):
    spec = cf.spectrum(golden, cf.coefficients(golden, 2.0))
    assert spec.e_r == pytest.approx(2.875, rel=1e-15)
    assert spec.e_i == pytest.approx(0.875, rel=1e-15)
    assert spec.value == complex(spec.e_r, spec.e_i)


def test_real_limit_half_beta3():
    # (beta1 + i alpha1) = (a/2)(1 - i) squares to -i a^2/2, so only E_r vanishes
    a_r, m_r = 1.4, 0.8
    params = p(m_r, 0, a_r, 0, 1.0)
    spec = cf.spectrum(params, cf.coefficients(params, 0.5))
    assert spec.e_r == pytest.approx(0.0, abs=1e-15)
    assert spec.e_i == pytest.approx(-a_r**2 / (4 * m_r), rel=1e-14)


mass = st.floats(0.2, 3.0)


@given(mass, st.floats(-2, 2), mass, st.floats(-3, 3), st.floats(-5, 30))
def test_two_spectrum_forms_agree(m_r, m_i, a_r, a_i, beta3):
    params = p(m_r, m_i, a_r, a_i, 1.0)
    co = cf.coefficients(params, beta3)
    one, two = cf.spectrum(params, co), cf.spectrum_from_alpha_beta(params, co)
    scale = params.prefactor * (m_r + abs(m_i)) * (co.alpha1**2 + co.beta1**2)
    assert abs(one.e_r - two.e_r) <= 1e-12 * scale
    assert abs(one.e_i - two.e_i) <= 1e-12 * scale


@given(mass, st.floats(-2, 2), mass, st.floats(-3, 3), st.floats(0.01, 50))
def test_coefficient_closure(m_r, m_i, a_r, a_i, v_or):
    params = p(m_r, m_i, a_r, a_i, v_or)
    assume(not cf.is_degenerate(params, 1e-6))
    assume(cf.beta3_radicand(params) >= 0)
    sol = cf.solve(params)
    res = coefficient_residuals(params, sol.v_oi, sol.coeffs, sol.spectrum)
    scaled = res.scaled()
    # energy relations and the quadratic depth relations close exactly
    assert max(scaled[0], scaled[1], scaled[4], scaled[5]) < 1e-10


@given(st.floats(-3, 3), st.floats(0.1, 3), st.floats(-3, 3))
def test_exponent_identity(beta3, a_r, a_i):
    params = p(1, 0, a_r, a_i, 1)
    co = cf.coefficients(params, beta3)
    lhs = complex(-co.alpha1, co.beta1)
    rhs = complex(0.5, beta3) * complex(a_r, a_i)
    assert abs(lhs.real - rhs.real) <= 1e-14 * (1 + abs(beta3)) * (a_r + abs(a_i))
    assert abs(lhs.imag - rhs.imag) <= 1e-14 * (1 + abs(beta3)) * (a_r + abs(a_i))


def test_normalization_examples():
    s = cf.normalization(cf.SolutionCoefficients(1.5, 2.5, 2.0))
    assert s.normalizable and s.constant_n == pytest.approx(math.sqrt(3.75), rel=1e-15)
    assert quadrature_norm(cf.SolutionCoefficients(1.5, 2.5, 2.0)) == pytest.approx(1.0, abs=1e-6)
    assert cf.normalization(cf.SolutionCoefficients(1.0, 1.0, 0.0)).constant_n == 1.0
    bad = cf.normalization(cf.SolutionCoefficients(-0.5, 2.5, 0.0))
    assert not bad.normalizable
    assert bad.constant_n is None
    assert bad.violated_constraints == (cf.ALPHA1_NONPOSITIVE,)
    both = cf.normalization(cf.SolutionCoefficients(0.0, -1.0, 0.0))
    assert both.violated_constraints == (cf.ALPHA1_NONPOSITIVE, cf.BETA1_NONPOSITIVE)


@given(st.floats(-5, 5), st.floats(-5, 5))
def test_normalizable_iff_both_positive(a1, b1):
    s = cf.normalization(cf.SolutionCoefficients(a1, b1, 0.0))
    assert s.normalizable == (a1 > 0 and b1 > 0)
    if s.normalizable:
        assert s.constant_n == pytest.approx(math.sqrt(a1 * b1))


def test_probability_density_examples():
    co = cf.SolutionCoefficients(1.5, 2.5, 2.0)
    assert cf.probability_density(co, PhasePoint(0.0, 0.0)) == pytest.approx(3.75)
    assert cf.probability_density(co, PhasePoint(1.0, 0.0)) == pytest.approx(3.75 * math.exp(-3.0), rel=1e-14)
    assert cf.peak_probability_density(co) == 3.75
    with pytest.raises(NotNormalizable):
        cf.probability_density(cf.SolutionCoefficients(-1.0, 1.0, 0.0), PhasePoint(0.0, 0.0))


@given(st.floats(-4, 4), st.floats(-4, 4))
def test_density_is_even(x1, p2):
    co = cf.SolutionCoefficients(0.7, 1.9, 1.0)
    rho = cf.probability_density(co, PhasePoint(x1, p2))
    assert cf.probability_density(co, PhasePoint(-x1, p2)) == rho
    assert cf.probability_density(co, PhasePoint(x1, -p2)) == rho


def test_wavefunction_at_origin(golden):
    co = cf.coefficients(golden, 2.0)
    n = math.sqrt(3.75)
    psi_r, psi_i = cf.wavefunction(golden, co, n, PhasePoint(0.0, 0.0))
    assert psi_r == pytest.approx(n * math.cos(2.0), rel=1e-14)
    assert psi_i == pytest.approx(n * math.sin(2.0), rel=1e-14)


def test_wavefunction_matches_complex_exponent(golden):
    co = cf.coefficients(golden, 2.0)
    n = math.sqrt(3.75)
    psi_r, psi_i = cf.wavefunction(golden, co, n, PhasePoint(0.3, -0.2))
    direct = cf.wavefunction_complex(golden, 2.0, n, complex(0.3, -0.2))
    assert abs(complex(psi_r, psi_i) - direct) <= 1e-12 * abs(direct)


@given(mass, st.floats(0.05, 2), mass, st.floats(0.3, 1.0), st.floats(0.1, 5),
       st.floats(-1, 2), st.floats(-1, 2))
def test_wavefunction_paths_and_modulus(m_r, m_i, a_r, frac, v_or, x1, p2):
    params = p(m_r, m_i, a_r, a_r * frac, v_or)
    sol = cf.solve(params)
    assume(sol.norm.normalizable and sol.beta3 < 10)
    pt = PhasePoint(x1 / a_r, p2 / a_r)
    n = sol.norm.constant_n
    psi_r, psi_i = cf.wavefunction(params, sol.coeffs, n, pt)
    direct = cf.wavefunction_complex(params, sol.beta3, n, pt.z)
    assert abs(complex(psi_r, psi_i) - direct) <= 1e-11 * abs(direct)
    assert psi_r**2 + psi_i**2 == pytest.approx(cf.exact_modulus(params, sol.coeffs, pt), rel=1e-12)


def test_time_envelope_examples():
    spec = cf.EnergySpectrum(2.875, 0.875)
    assert cf.time_envelope(spec, 1.0, 0.0) == (1.0, 0.0)
    amp, phase = cf.time_envelope(spec, 1.0, 1.0)
    assert amp == pytest.approx(0.416862, abs=1e-6) and phase == 2.875
    assert cf.time_envelope(cf.EnergySpectrum(3.0, 0.0), 1.0, 17.0)[0] == 1.0
    assert cf.temporal_behaviour(spec) == "damped"
    assert cf.temporal_behaviour(cf.EnergySpectrum(1.0, -0.5)) == "amplified"
    assert cf.temporal_behaviour(cf.EnergySpectrum(1.0, 0.0)) == "stable"


def test_quadrature_of_density(rng):
    for _ in range(10):
        co = cf.SolutionCoefficients(rng.uniform(0.1, 10), rng.uniform(0.1, 10), 1.0)
        assert quadrature_norm(co) == pytest.approx(1.0, abs=1e-6)


def test_ppd_stationary_at_real_mass(h2):
    grid = np.linspace(0.1, 2.0, 191)
    ppd = [cf.solve(h2.replace(m_i=m)).ppd for m in grid]
    assert grid[int(np.argmin(ppd))] == pytest.approx(0.5039, abs=grid[1] - grid[0])
    deriv = 1 - 0.5039**2 / grid**2  # d/dm_i of m_r^2/m_i + m_i
    sign_change = grid[np.nonzero(np.diff(np.sign(deriv)))[0]]
    assert len(sign_change) == 1 and abs(sign_change[0] - 0.5039) < grid[1] - grid[0]


def test_solve_bundles_everything(golden):
    sol = cf.solve(golden)
    assert sol.beta3 == 2.0 and sol.v_oi == 2.0 and sol.ppd == 3.75
    assert sol.norm.constant_n == pytest.approx(math.sqrt(3.75))
    explicit = cf.solve(golden, beta3=1.0)
    assert explicit.coeffs.alpha1 == 0.5
