import cmath
import math
import numpy as np
import pytest
from freeboundary.core import PRESETS, BranchCut, SingularAtLambdaZero, ZeroFrequency, EmptyGrid, PreconditionViolated
from freeboundary.dispersion import find_growth_rate
from freeboundary.symbol import (decay_exponents, ResolventAnsatz, assemble_interface_system, interface_residuals,
    normal_velocity_response, k_zero, k_of_z, k_from_lambda_tau, branch_points, k_bound, symmetry_defects,
    limit_anchors, eval_extended_symbol, eval_boundary_symbol, s_tilde, SweepGrid, verify_sandwich)


def test_decay_exponents(unit):
    (om1, om2) = decay_exponents(unit, 3.0, 1.0)
    assert om1 == pytest.approx(2.0)
    assert om2 == pytest.approx(2.0)
    (om1, _) = decay_exponents(unit, 1j, 1.0)
    assert om1.real > 0


def test_decay_exponents_branch_cut(unit):
    with pytest.raises(BranchCut):
        decay_exponents(unit, -2.0, 1.0)
    with pytest.raises(BranchCut):
        decay_exponents(unit, 1.0, 0.0)


def test_ansatz_singular_at_zero(unit):
    with pytest.raises(SingularAtLambdaZero):
        ResolventAnsatz.build(unit, 0.0, 1.0)
    with pytest.raises(SingularAtLambdaZero):
        assemble_interface_system(unit, 0.0, 1.0)


def test_interface_system_residual(unit):
    system = assemble_interface_system(unit, 1.0, 1.0)
    x = system.solve()
    assert interface_residuals(system, x)["max"] < 1e-10


@pytest.mark.parametrize("lam, tau", [(0.3 + 2j, 0.7), (50.0, 2.0), (1e-3 - 1e-3j, 0.1)])
def test_interface_system_residual_rt(rt, lam, tau):
    system = assemble_interface_system(rt, lam, tau)
    assert interface_residuals(system, system.solve())["max"] < 1e-10


def test_normal_velocity_small_lambda(half_viscosity):
    assert normal_velocity_response(half_viscosity, 1e-6, 1.0) == pytest.approx(0.5, rel=1e-4)


def test_normal_velocity_matches_k(rt):
    (lam, tau) = (0.4 + 0.3j, 2.0)
    assert normal_velocity_response(rt, lam, tau) == pytest.approx(k_of_z(rt, lam/tau**2)/tau, rel=1e-10)


def test_k_at_origin(half_viscosity, rt):
    assert k_of_z(half_viscosity, 0.0) == 0.5
    assert k_zero(rt) == 0.25


def test_k_shapes(rt):
    assert np.ndim(k_of_z(rt, 1.0)) == 0
    z = np.array([[1.0, 2j], [0.0, 3 - 1j]])
    assert k_of_z(rt, z).shape == (2, 2)


def test_k_branch_cut(rt):
    with pytest.raises(BranchCut):
        k_of_z(rt, -1.0)


def test_branch_points(rt):
    assert branch_points(rt) == [-1.0, -0.5]


def test_limit_anchors(rt):
    anchors = limit_anchors(rt, angles=(0.0, math.pi/4, -math.pi/4))
    assert anchors["k0"] <= 1e-4
    assert anchors["zk_inf"] <= 1e-3


@pytest.mark.parametrize("preset", ["rt", "stable"])
def test_k_large_modulus_every_ray(preset):
    p = PRESETS[preset]
    angles = np.linspace(-3*math.pi/4, 3*math.pi/4, 9)
    z = np.array([1e7, 1e8])[:, None]*np.exp(1j*angles[None, :])
    k = k_of_z(p, z)
    assert np.all(np.isfinite(k))
    defect = np.abs((p.rho1 + p.rho2)*z*k - 1)
    assert np.max(defect[1]) <= 1e-3
    assert np.max(defect[0]) <= 1e-2


def test_interface_solve_large_lambda(rt):
    system = assemble_interface_system(rt, 1e8*np.exp(0.5j), 1.0)
    x = system.solve()
    assert interface_residuals(system, x)["max"] <= 1e-10


def test_k_depends_on_z_only(rt):
    angles = np.linspace(-2.2, 2.2, 5)
    moduli = np.geomspace(1e-2, 1e2, 4)
    z = (moduli[:, None]*np.exp(1j*angles[None, :])).ravel()
    reference = k_of_z(rt, z)
    for c in (0.1, 0.5, 1.0, 3.0, 10.0):
        scaled = k_from_lambda_tau(rt, z*c**2, c)
        assert np.max(np.abs(scaled - reference)/np.abs(reference)) < 1e-10


def test_symmetry_defects(rt):
    z = np.array([0.1, 1 + 1j, 10 - 3j, 1e3j])
    defects = symmetry_defects(rt, z)
    assert defects["phase_swap"] < 1e-10
    assert defects["conjugate"] < 1e-10


def test_k_bound(rt):
    N = k_bound(rt, 3*math.pi/4, z_min=1e-3, z_max=1e3, per_decade=2, n_rays=5)
    assert N >= k_zero(rt)
    assert math.isfinite(N)


def test_extended_symbol(rt):
    value = eval_extended_symbol(rt, 1 + 1j, 0.5, 0.2)
    assert value.z == pytest.approx((1 + 1j)/0.25)
    assert value.recompute() == value.s_tilde
    zero_transport = eval_extended_symbol(rt, 1 + 1j, 0.5, 0.0)
    assert value.s_tilde - zero_transport.s_tilde == pytest.approx(1j*0.5*0.2)
    assert s_tilde(rt, 1 + 1j, 0.5, 0.2) == pytest.approx(value.s_tilde, rel=1e-14)


def test_boundary_symbol_reduces_to_extended(rt):
    lam = 2.0 + 0.5j
    assert eval_boundary_symbol(rt, lam, [3.0, 4.0]) == pytest.approx(eval_extended_symbol(rt, lam, 5.0).s_tilde)
    with_transport = eval_boundary_symbol(rt, lam, [3.0, 4.0], b0=[1.0, 0.0])
    assert with_transport == pytest.approx(eval_extended_symbol(rt, lam, 5.0, 3.0/5.0).s_tilde)


def test_boundary_symbol_zero_frequency(rt):
    with pytest.raises(ZeroFrequency):
        eval_boundary_symbol(rt, 1.0, [0.0, 0.0])


def test_sandwich_stable(stable):
    grid = SweepGrid(lambda0=1.0, lambda_max=1e2, tau_min=1e-2, tau_max=1e2, per_decade=2, n_rays=3, n_zeta=2)
    report = verify_sandwich(stable, grid)
    assert report.passed
    assert report.upper_violations == 0
    assert 0 < report.min_ratio <= report.max_ratio
    assert report.to_dict()["pass"] is True


def test_sandwich_large_lambda(unit):
    report = verify_sandwich(unit, ([1e6], [1.0], [0.0]), lambda0=1.0, eta=0.1, beta=1.0, delta=0.5)
    assert report.n_points == 1
    assert report.min_ratio == pytest.approx(1.0, rel=1e-3)


def test_sandwich_detects_growth_rate(rt):
    lam = find_growth_rate(rt, 0.5)
    report = verify_sandwich(rt, ([lam], [0.5], [0.0]), lambda0=lam/2, eta=0.1, beta=1.0, delta=0.5)
    assert report.min_ratio < 1e-8


def test_sandwich_streams_rows(stable):
    seen = []
    grid = SweepGrid(lambda0=1.0, lambda_max=10.0, tau_min=0.1, tau_max=10.0, per_decade=1, n_rays=3, n_zeta=1)
    report = verify_sandwich(stable, grid, rows=seen.append)
    assert sum(len(r["ratio"]) for r in seen) == report.n_points


def test_sandwich_threads_and_rows_agree(rt):
    grid = SweepGrid(lambda0=1e-2, lambda_max=1e2, tau_min=1e-2, tau_max=1e2, per_decade=2, n_rays=5, n_zeta=3)
    plain = verify_sandwich(rt, grid).to_dict()
    assert verify_sandwich(rt, grid, threads=3).to_dict() == plain
    assert verify_sandwich(rt, grid, rows=lambda chunk: None).to_dict() == plain


def test_sandwich_default_grid_size():
    grid = SweepGrid()
    assert (grid.per_decade, grid.n_rays, grid.n_zeta) == (24, 9, 5)
    assert grid.lambdas().size == 9*(24*4 + 1)


def test_sandwich_errors(rt):
    with pytest.raises(EmptyGrid):
        verify_sandwich(rt, ([], [1.0], [0.0]), lambda0=1.0, eta=0.1, beta=1.0, delta=0.5)
    with pytest.raises(PreconditionViolated):
        verify_sandwich(rt, ([-1.0], [1.0], [0.0]), lambda0=0.5, eta=0.1, beta=1.0, delta=0.5)
    with pytest.raises(PreconditionViolated):
        verify_sandwich(rt, ([1.0], [1.0], [0.0]))
