import math

import numpy as np
import pytest

from cmorse import closed_form as cf
from cmorse import oracle
from cmorse.core import PhasePoint, SystemParameters


@pytest.fixture
def golden_solution(golden):
    return cf.solve(golden)


def flipped(params, sol):
    """Residual inputs with the well depth sign reversed (the self-consistent sign)."""
    return dict(v_oi=-sol.v_oi, v_or=-params.v_or)


def test_golden_pde_residual_with_consistent_depth_sign(golden, golden_solution):
    s = golden_solution
    ra, rb = oracle.pde_residual(golden, -s.v_oi, s.coeffs, s.spectrum, PhasePoint(0.3, -0.2), 1e-4,
                                 v_or=-golden.v_or)
    assert ra < 1e-6 and rb < 1e-6


def test_golden_pde_residual_as_printed_depth_is_large(golden, golden_solution):
    s = golden_solution
    ra, rb = oracle.pde_residual(golden, s.v_oi, s.coeffs, s.spectrum, PhasePoint(0.3, -0.2), 1e-4)
    assert max(ra, rb) > 1.0


def test_energy_shift_enters_second_equation_linearly(golden, golden_solution):
    s = golden_solution
    pt = PhasePoint(0.3, -0.2)
    shifted = cf.EnergySpectrum(s.spectrum.e_r + 1e-3, s.spectrum.e_i)
    _, b0, _ = oracle.pde_terms(golden, s.v_oi, s.coeffs, s.spectrum, pt, 1e-4)
    _, b1, _ = oracle.pde_terms(golden, s.v_oi, s.coeffs, shifted, pt, 1e-4)
    assert b1 - b0 == pytest.approx(1e-3, rel=1e-9)


def test_real_limit_residual():
    params = SystemParameters.create(1, 0, 1, 0, 0.5)
    co = cf.coefficients(params, 1.0)
    spec = cf.spectrum(params, co)
    x = np.linspace(-1, 3, 41)
    pts = PhasePoint(x, np.zeros_like(x))
    ra, rb = oracle.pde_residual(params, 0.0, co, spec, pts, 1e-4, v_or=-0.5)
    assert ra.max() < 1e-6 and rb.max() < 1e-6


def test_pde_residual_rejects_bad_step(golden, golden_solution):
    s = golden_solution
    with pytest.raises(ValueError):
        oracle.pde_residual(golden, s.v_oi, s.coeffs, s.spectrum, PhasePoint(0, 0), 0.0)


@pytest.mark.parametrize("point", [PhasePoint(0.5, 0.5), PhasePoint(0.0, 0.0)])
def test_cauchy_riemann(golden, golden_solution, point):
    s = golden_solution
    n = s.norm.constant_n
    c1, c2 = oracle.cr_residual(golden, s.coeffs, n, point, 1e-4)
    assert c1 < 1e-6 and c2 < 1e-6
    w1, w2 = oracle.cr_residual(golden, s.coeffs, n, point, 1e-4, swap_imaginary=True)
    assert max(w1, w2) > 1e-2


def test_coefficient_residuals_golden(golden, golden_solution):
    s = golden_solution
    res = oracle.coefficient_residuals(golden, s.v_oi, s.coeffs, s.spectrum)
    assert abs(res.e_r) < 1e-12 and abs(res.e_i) < 1e-12
    assert abs(res.v_oi_quadratic) < 1e-12 and abs(res.v_or_quadratic) < 1e-12
    # the linear depth relations come out with the opposite sign
    assert res.v_or_linear == pytest.approx(2 * golden.v_or)
    assert res.v_oi_linear == pytest.approx(2 * s.v_oi)


def test_coefficient_residuals_respond_to_perturbations(golden, golden_solution):
    s = golden_solution
    co = cf.coefficients(golden, 2.0 + 1e-3)
    res = oracle.coefficient_residuals(golden, s.v_oi, co, cf.spectrum(golden, co))
    assert res.v_oi_quadratic != 0 and res.v_or_quadratic != 0
    assert abs(res.v_or_quadratic) == pytest.approx(2 * 1e-3, rel=1e-3)  # d(b^2 / 2)/db at b = 2
    res0 = oracle.coefficient_residuals(golden, 0.0, s.coeffs, s.spectrum)
    assert res0.v_oi_quadratic == pytest.approx(-2.0)
    assert res0.scaled()[4] == pytest.approx(1.0)


def test_quadrature_examples():
    assert oracle.quadrature_norm(cf.SolutionCoefficients(1.5, 2.5, 0)) == pytest.approx(1.0, abs=1e-6)
    assert oracle.quadrature_norm(cf.SolutionCoefficients(1.0, 1.0, 0)) == pytest.approx(1.0, abs=1e-12)
    for rate in (0.05, 1.5, 2.5, 40.0):
        assert oracle.quadrature_1d(rate) == pytest.approx(1.0 / rate, rel=1e-8)
    with pytest.raises(cf.NotNormalizable):
        oracle.quadrature_norm(cf.SolutionCoefficients(-1.0, 1.0, 0))


def test_phase_grid_layout(golden):
    grid = oracle.phase_grid(golden, count=3, lo=-2, hi=4)
    np.testing.assert_array_equal(grid.x1, [-2, -2, -2, 1, 1, 1, 4, 4, 4])
    np.testing.assert_array_equal(grid.p2, [-2, 1, 4] * 3)


def test_residual_report_fields(golden, golden_solution):
    s = golden_solution
    rep = oracle.residual_report(golden, s.v_oi, s.coeffs, s.spectrum, count=5)
    assert rep.max_abs == max(rep.eq10a_residual, rep.eq10b_residual)
    assert rep.eq10a_residual >= 0 and rep.eq10b_residual >= 0
    assert rep.grid_spec["steps"] == [5, 5] and rep.grid_spec["h"] == 1e-4
    d = rep.to_dict()
    assert set(d) >= {"eq10a_residual", "eq10b_residual", "cr_residual_pair", "max_abs", "grid_spec"}
    assert '"max_abs"' in rep.to_json()


def test_random_draws_are_valid_and_seeded():
    a = [oracle.random_valid_params(np.random.default_rng(7)) for _ in range(2)]
    assert a[0] == a[1]
    rng = np.random.default_rng(3)
    for _ in range(20):
        params = oracle.random_valid_params(rng)
        sol = cf.solve(params)
        assert sol.norm.normalizable and sol.beta3 <= oracle.MAX_RANDOM_BETA3


def test_consistent_sign_converges_at_second_order(rng):
    for _ in range(5):
        params = oracle.random_valid_params(rng)
        s = cf.solve(params)
        h = 1e-2 / params.a_r
        r1 = oracle.residual_report(params, -s.v_oi, s.coeffs, s.spectrum, h=h, v_or=-params.v_or)
        r2 = oracle.residual_report(params, -s.v_oi, s.coeffs, s.spectrum, h=h / 2, v_or=-params.v_or)
        assert 3 <= r1.max_abs / r2.max_abs <= 5


def test_negative_control_on_random_grids(rng):
    for _ in range(10):
        params = oracle.random_valid_params(rng)
        s = cf.solve(params)
        pts = oracle.phase_grid(params)
        h = 1e-4 / params.a_r
        good = oracle.cr_residual(params, s.coeffs, s.norm.constant_n, pts, h)
        bad = oracle.cr_residual(params, s.coeffs, s.norm.constant_n, pts, h, swap_imaginary=True)
        assert max(np.max(good[0]), np.max(good[1])) < 1e-6
        assert max(np.max(bad[0]), np.max(bad[1])) > 1e-2
        assert math.isfinite(np.max(bad[0]))
