import math
import numpy as np
import pytest
from freeboundary.core import PreconditionViolated, FluidParams
from freeboundary.dispersion import (symbol, symbol_derivative, critical_wavenumber, find_growth_rate,
    fixed_point_growth_rate, small_z_growth_rate, inviscid_growth_rate, dispersion_curve, Rectangle,
    winding_integral, count_zeros_rhp, FixedTalbot, mode_response, fit_rate)


def test_critical_wavenumber(rt, stable):
    assert critical_wavenumber(rt) == pytest.approx(1.0)
    assert critical_wavenumber(rt.replace(gamma_a=4.0)) == pytest.approx(2.0)
    assert critical_wavenumber(stable) is None
    assert critical_wavenumber(rt.replace(gamma_a=0.0)) is None


def test_growth_rate_is_a_zero(rt):
    lam = find_growth_rate(rt, 0.5)
    assert lam > 0
    assert abs(symbol(rt, lam, 0.5)) < 1e-10


def test_growth_rate_against_fixed_point(rt):
    for tau in (0.5, 0.8):
        assert find_growth_rate(rt, tau) == pytest.approx(fixed_point_growth_rate(rt, tau), rel=1e-9)


def test_growth_rate_near_critical(rt):
    tau = 0.999
    assert find_growth_rate(rt, tau) == pytest.approx(small_z_growth_rate(rt, tau), rel=0.05)


def test_no_growth_rate_above_critical(rt):
    assert find_growth_rate(rt, 1.5) is None
    assert fixed_point_growth_rate(rt, 1.5) is None


def test_growth_rate_preconditions(rt, stable):
    with pytest.raises(PreconditionViolated):
        find_growth_rate(stable, 0.5)
    with pytest.raises(PreconditionViolated):
        find_growth_rate(rt.replace(gamma_a=0.0), 0.5)
    with pytest.raises(PreconditionViolated):
        find_growth_rate(rt, 0.0)


def test_growth_rate_scaling(rt):
    c = 3.0
    scaled = FluidParams(rho1=c*rt.rho1, rho2=c*rt.rho2, mu1=c*rt.mu1, mu2=c*rt.mu2, sigma=c*rt.sigma, gamma_a=rt.gamma_a)
    for tau in (0.3, 0.7):
        assert find_growth_rate(scaled, tau) == pytest.approx(find_growth_rate(rt, tau), rel=1e-9)


def test_inviscid_envelope(rt):
    for tau in np.linspace(0.1, 0.9, 9):
        assert find_growth_rate(rt, tau) < inviscid_growth_rate(rt, tau)
    assert inviscid_growth_rate(rt, 1.5) is None


def test_symbol_derivative(rt):
    (lam, tau) = (0.7, 0.5)
    step = 1e-4
    expected = (symbol(rt, lam + step, tau) - symbol(rt, lam - step, tau))/(2*step)
    assert symbol_derivative(rt, lam, tau) == pytest.approx(expected, rel=1e-6)


def test_zero_counts(rt):
    assert count_zeros_rhp(rt, 0.5) == 1
    assert count_zeros_rhp(rt, 1.5) == 0


def test_winding_is_near_integer(rt):
    w = winding_integral(rt, 0.5)
    assert abs(w - 1) < 0.01


@pytest.mark.slow
def test_stable_has_no_zeros(stable):
    for tau in np.geomspace(0.05, 20.0, 8):
        assert count_zeros_rhp(stable, tau) == 0


def test_rectangle_validation():
    with pytest.raises(PreconditionViolated):
        Rectangle(r0=0.0)
    with pytest.raises(PreconditionViolated):
        Rectangle(h=-1.0)


def test_dispersion_curve(rt):
    curve = dispersion_curve(rt, [0.25, 0.5, 0.75, 1.5], count_zeros=False)
    assert curve.tau_star == pytest.approx(1.0)
    assert [r.zero_count for r in curve.rows] == [1, 1, 1, 0]
    lambdas = curve.lambdas()
    assert np.all(lambdas[:3] > 0)
    assert np.isnan(lambdas[3])
    assert list(curve.taus()) == [0.25, 0.5, 0.75, 1.5]


def test_dispersion_curve_threads(rt):
    grid = [0.3, 0.6, 0.9]
    single = dispersion_curve(rt, grid, count_zeros=False)
    threaded = dispersion_curve(rt, grid, threads=3, count_zeros=False)
    assert np.array_equal(single.lambdas(), threaded.lambdas())


def test_dispersion_curve_grid_checks(rt):
    with pytest.raises(PreconditionViolated):
        dispersion_curve(rt, [0.5, 0.25], count_zeros=False)
    with pytest.raises(PreconditionViolated):
        dispersion_curve(rt, [0.0, 0.5], count_zeros=False)


def test_talbot_exponential():
    t = np.array([0.5, 1.0, 2.0, 5.0])
    f = FixedTalbot(24).invert(lambda lam: 1/(lam + 1), t)
    assert np.max(np.abs(f - np.exp(-t))) < 1e-8


def test_talbot_power():
    t = np.array([0.5, 1.0, 3.0])
    f = FixedTalbot(32).invert(lambda lam: 1/lam**2, t)
    assert f == pytest.approx(t, rel=1e-8)


def test_mode_response_growth(rt):
    lam = find_growth_rate(rt, 0.5)
    times = np.linspace(0.5/lam, 20/lam, 40)
    response = mode_response(rt, 0.5, times)
    assert response.lambda_star == pytest.approx(lam)
    assert response.fitted_rate == pytest.approx(response.lambda_star, rel=5e-3)


def test_mode_response_initial_value(rt):
    response = mode_response(rt, 0.5, [1e-6])
    assert abs(response.values[0] - 1) < 1e-4


def test_mode_response_stable_is_bounded(stable):
    response = mode_response(stable, 1.0, np.linspace(0.5, 10.0, 20))
    assert response.lambda_star is None
    magnitude = np.abs(response.values)
    assert np.max(magnitude) <= 1 + 1e-3
    assert magnitude[-1] < 0.5*magnitude[0]


def test_mode_response_preconditions(rt):
    with pytest.raises(PreconditionViolated):
        mode_response(rt, 0.5, [1.0, 0.5])
    with pytest.raises(PreconditionViolated):
        mode_response(rt, -0.5, [1.0])


def test_fit_rate():
    t = np.linspace(0.0, 3.0, 30)
    assert fit_rate(t, np.exp(2*t)) == pytest.approx(2.0)
    assert fit_rate(t, np.zeros_like(t)) is None
