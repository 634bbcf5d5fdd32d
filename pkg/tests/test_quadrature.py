import cmath
import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rheight.cutoff import CutoffSpec
from rheight.poly import parse_poly
from rheight.quadrature import (
    DEFAULT,
    OscIntegralSpec,
    PhaseDescriptor,
    QuadConfig,
    QuadratureBudgetExceeded,
    critical_points_d4,
    decay_fit,
    fit_loglog,
    g_normalizations,
    graded_rule,
    integrate_abs_1d,
    integrate_graded,
    integrate_osc_1d,
    integrate_osc_2d,
    integrate_panels,
    tail_radius,
)

BUMP = CutoffSpec("bump", 0.0, 1.0)
GRID = tuple(2.0**k for k in range(4, 10))


def test_stationary_phase_quadratic():
    lam = 2.0**14
    val = integrate_osc_1d(lambda t: t * t, BUMP, lam)
    leading = math.sqrt(math.pi / lam) * cmath.exp(1j * math.pi / 4)
    assert abs(val - leading) <= 0.05 * abs(leading)


def test_cubic_closed_form():
    # int exp(i lam t^3) over R = 2 Gamma(4/3) cos(pi/6) lam^(-1/3); the cutoff tail decays fast
    lam = 2.0**16
    val = integrate_osc_1d(lambda t: t**3, BUMP, lam)
    exact = 2 * math.gamma(4 / 3) * math.cos(math.pi / 6) * lam ** (-1 / 3)
    assert abs(val - exact) <= 0.01 * exact


def test_zero_amplitude():
    val = integrate_osc_1d(lambda t: t**2, lambda t: np.zeros_like(t), 100.0, support=(-1.0, 1.0))
    assert val == 0


def test_callable_amplitude_needs_support():
    with pytest.raises(ValueError):
        integrate_osc_1d(lambda t: t, lambda t: t, 1.0)


@settings(max_examples=25)
@given(st.floats(1.0, 2.0**12), st.sampled_from([2, 3, 4, 5]))
def test_conjugation_and_trivial_bound(lam, B):
    ph = PhaseDescriptor.monomial(B)
    plus = integrate_osc_1d(ph, BUMP, lam)
    minus = integrate_osc_1d(ph, BUMP, -lam)
    assert abs(plus - minus.conjugate()) <= 1e-9
    assert abs(plus) <= BUMP.integral() * (1 + 1e-9)


def test_lambda_zero_gives_mass():
    assert integrate_osc_1d(lambda t: t**2, BUMP, 0.0) == pytest.approx(1.5, rel=1e-10)


def test_resolution_doubling_is_stable():
    fine = replace(DEFAULT, waves_per_panel=0.5)
    for lam in (2.0**8, 2.0**14):
        a = integrate_osc_1d(lambda t: t**4, BUMP, lam)
        b = integrate_osc_1d(lambda t: t**4, BUMP, lam, fine)
        assert abs(a - b) <= 10 * DEFAULT.tol * BUMP.integral()


def test_budget_exceeded():
    cfg = QuadConfig(max_nodes=64)
    with pytest.raises(QuadratureBudgetExceeded):
        integrate_osc_1d(lambda t: t**2, BUMP, 2.0**16, cfg)


@pytest.mark.parametrize("B", [3, 4])
def test_tensor_matches_fubini(B):
    lam = 2.0**9
    fubini = OscIntegralSpec(PhaseDescriptor.product(B), BUMP, BUMP, lambda_grid=GRID)
    tensor = OscIntegralSpec(PhaseDescriptor.product(B), BUMP, BUMP, lambda_grid=GRID, method="tensor")
    assert abs(integrate_osc_2d(fubini, lam) - integrate_osc_2d(tensor, lam)) <= 1e-8


def test_custom_separable_polynomial_uses_both_factors():
    spec = OscIntegralSpec(PhaseDescriptor.custom(parse_poly("x1^3 + x2^4")), BUMP, BUMP, lambda_grid=GRID)
    ref = OscIntegralSpec(PhaseDescriptor.product(4), BUMP, BUMP, lambda_grid=GRID)
    assert integrate_osc_2d(spec, 300.0) == pytest.approx(integrate_osc_2d(ref, 300.0), abs=1e-10)


def test_non_separable_two_dimensional():
    # x1 x2 has a non-degenerate saddle: leading term 2 pi / lam (the amplitude is flat near 0)
    lam = 2.0**8
    spec = OscIntegralSpec(PhaseDescriptor.custom(parse_poly("x1*x2")), BUMP, BUMP, lambda_grid=GRID)
    assert abs(integrate_osc_2d(spec, lam)) == pytest.approx(2 * math.pi / lam, rel=0.02)


def test_lambda_grid_must_increase():
    with pytest.raises(ValueError):
        OscIntegralSpec(PhaseDescriptor.monomial(2), BUMP, lambda_grid=(4.0, 2.0, 8.0))


def test_decay_fit_needs_six_points():
    spec = OscIntegralSpec(PhaseDescriptor.monomial(2), BUMP, lambda_grid=(1.0, 2.0, 4.0))
    with pytest.raises(ValueError):
        decay_fit(spec)


def test_fit_loglog_exact_power():
    lam = [2.0**k for k in range(8)]
    fit = fit_loglog(lam, [3 * l ** -0.25 for l in lam])
    assert fit.slope == pytest.approx(-0.25, abs=1e-12)
    assert fit.max_residual < 1e-12
    assert [r["lambda"] for r in fit.rows()] == lam


def test_weight_product_integral():
    # int_R (1 + |y|)^-4 dy = 2/3, so the product over two variables is 4/9
    R = tail_radius(4, 1e-12)
    f = lambda y: (1 + np.abs(y)) ** -4.0
    one = integrate_graded(f, [-R, 0.0, R], tol=1e-10)
    assert one == pytest.approx(2 / 3, abs=1e-11)
    assert one * one == pytest.approx(4 / 9, abs=1e-11)


def test_graded_rule_integrates_singularity():
    x, w = graded_rule([0.0, 1.0], order=12, levels=48)
    assert np.sum(w) == pytest.approx(1.0, abs=1e-14)
    assert np.sum(w * x ** -0.5) == pytest.approx(2.0, rel=1e-8)


def test_integrate_panels_kink():
    val = integrate_panels(lambda t: math.sqrt(abs(t - 1.0)), (0.0, 1.0, 2.0), tol=1e-8)
    assert val == pytest.approx(4 / 3, rel=1e-7)


def test_integrate_abs_1d_finds_narrow_spike():
    f = lambda t: 1.0 / (1.0 + (1e4 * (t - 0.3)) ** 2)
    exact = (math.atan(1e4 * 0.7) + math.atan(1e4 * 1.3)) / 1e4
    assert integrate_abs_1d(f, -1.0, 1.0, 1e-9, points=[0.3]) == pytest.approx(exact, rel=1e-8)


def test_g_normalizations():
    G = g_normalizations(9)
    assert G["alpha"] * 72 == -2
    assert G["G5"] == G["G1"] * G["G3"] - G["G2"] != 0


def test_d4_phase_critical_points():
    delta = 0.1
    ph = PhaseDescriptor.d4_counterexample(delta)
    h = 1e-6
    for x1, x2 in critical_points_d4(delta).values():
        g1 = (ph(x1 + h, x2) - ph(x1 - h, x2)) / (2 * h)
        g2 = (ph(x1, x2 + h) - ph(x1, x2 - h)) / (2 * h)
        assert abs(g1) < 1e-6 and abs(g2) < 1e-6
    assert ph(0.0, delta) == pytest.approx(3 * delta**4, rel=1e-12)


def test_cutoff_properties():
    t = np.linspace(-2, 2, 4001)
    chi = BUMP(t)
    assert np.all(chi[np.abs(t) <= 0.5] == 1) and np.all(chi[np.abs(t) >= 1] == 0)
    assert np.all((chi >= 0) & (chi <= 1))
    from scipy.integrate import quad
    assert quad(lambda s: float(BUMP(s)), -1, 1, points=[-0.5, 0.5])[0] == pytest.approx(BUMP.integral(), rel=1e-9)
