import math
import numpy as np
import pytest
import torch
from freeboundary.core import UnknownKernel, GridMismatch, PreconditionViolated
from freeboundary.kernels import (Grid, ScalarField, BulkField, spectral_derivative, spectral_laplacian, y_derivative,
    trace, fd_weights, eval_F, eval_F_d, eval_G, eval_G_kappa, eval_H_b, eval_all, g_kappa_pointwise,
    mean_curvature_pointwise, beta_lipschitz_gap, curvature_defect, KERNELS, get_kernel, frechet_directional,
    check_frechet, roundoff_floors, trigonometric_state)
from freeboundary.cli.commands import curvature_cases


@pytest.fixture
def grid1():
    return Grid(n=1, m=16)


@pytest.fixture
def grid2():
    return Grid(n=2, m=16)


def test_grid_validation():
    with pytest.raises(PreconditionViolated):
        Grid(n=3)
    with pytest.raises(PreconditionViolated):
        Grid(m=4)
    with pytest.raises(PreconditionViolated):
        Grid(levels=3)


def test_spectral_derivative():
    grid = Grid(n=1, m=32)
    (x,) = grid.coordinates()
    assert torch.allclose(spectral_derivative(torch.sin(3*x), grid, 0), 3*torch.cos(3*x), atol=1e-12)
    assert torch.allclose(spectral_laplacian(torch.sin(3*x), grid), -9*torch.sin(3*x), atol=1e-11)


def test_fd_weights():
    assert fd_weights([-1.0, 0.0, 1.0], 0.0, 1) == pytest.approx([-0.5, 0.0, 0.5])
    assert fd_weights([1.0, 2.0, 3.0], 0.0, 0) == pytest.approx([3.0, -3.0, 1.0])


def test_y_derivative_of_cubic(grid1):
    f = BulkField.from_function(lambda x, y: y**3*torch.ones_like(x[0]), grid1)
    df = f.dy()
    for (side, y) in (("upper", grid1.y_upper()), ("lower", grid1.y_lower())):
        expected = (3*y**2)[:, None].expand(-1, grid1.m)
        assert torch.allclose(getattr(df, side), expected, atol=1e-9)


def test_trace_of_quadratic(grid1):
    f = BulkField.from_function(lambda x, y: (1 + y + y**2)*torch.ones_like(x[0]), grid1)
    (up, lo) = f.traces()
    assert torch.allclose(up, torch.ones(grid1.m, dtype=torch.float64), atol=1e-12)
    assert torch.allclose(lo, torch.ones(grid1.m, dtype=torch.float64), atol=1e-12)


def test_g_kappa_vanishes_on_flat_interface(grid2):
    flat = ScalarField(torch.zeros(grid2.shape), grid2)
    assert float(eval_G_kappa(flat).values.abs().max()) == 0.0


def test_curvature_pointwise_identity(gen):
    grad = torch.from_numpy(gen.normal(size=(2, 50)))
    a = gen.normal(size=(2, 2, 50))
    hess = torch.from_numpy(a + a.transpose(1, 0, 2))
    lap = hess[0, 0] + hess[1, 1]
    assert torch.allclose(mean_curvature_pointwise(grad, hess), lap - g_kappa_pointwise(grad, hess), atol=1e-12)


def test_curvature_identity_on_grid():
    for (name, h) in curvature_cases(128).items():
        assert curvature_defect(h) <= 1e-8, name


def test_beta_lipschitz(gen):
    (a, b) = (torch.from_numpy(gen.normal(size=200)), torch.from_numpy(gen.normal(size=200)))
    assert beta_lipschitz_gap(a, b) <= 0
    (a, b) = (torch.from_numpy(gen.normal(size=(2, 200))), torch.from_numpy(gen.normal(size=(2, 200))))
    assert beta_lipschitz_gap(a, b, axis=0) <= 0


def _shear(grid):
    v = BulkField.from_function(lambda x, y: y*torch.ones_like(x), grid, (grid.n,))
    w = BulkField.from_function(lambda x, y: torch.ones_like(x[0]), grid)
    pi = BulkField.from_function(lambda x, y: torch.zeros_like(x[0]), grid)
    return (v, w, pi)


def test_eval_F_on_flat_interface(rt, grid1):
    (v, w, pi) = _shear(grid1)
    h = ScalarField(torch.zeros(grid1.shape), grid1)
    dth = ScalarField(0.5*torch.ones(grid1.shape), grid1)
    (F_v, F_w) = eval_F(rt, v, w, pi, h, dth)
    # F_v = rho (dth - w) dy v with dy v = 1, w = 1
    assert torch.allclose(F_v.upper, torch.full_like(F_v.upper, -0.5*rt.rho2), atol=1e-10)
    assert torch.allclose(F_v.lower, torch.full_like(F_v.lower, -0.5*rt.rho1), atol=1e-10)
    assert float(F_w.stacked().abs().max()) < 1e-10


def test_eval_F_d_forms_agree(rt, grid2):
    state = trigonometric_state(rt, grid2, seed=3)
    v = BulkField(state.u.upper[:2], state.u.lower[:2], grid2)
    (first, second) = eval_F_d(v, ScalarField(state.h, grid2), both=True)
    assert torch.allclose(first.stacked(), second.stacked(), atol=1e-10)


def test_eval_G_on_flat_interface(rt, grid1):
    state = trigonometric_state(rt, grid1, seed=5)
    v = BulkField(state.u.upper[:1], state.u.lower[:1], grid1)
    w = BulkField(state.u.upper[1], state.u.lower[1], grid1)
    h = ScalarField(torch.zeros(grid1.shape), grid1)
    (G_v, G_w) = eval_G(rt, v, w, ScalarField(state.q, grid1), h)
    assert float(G_v.values.abs().max()) == 0.0
    assert float(G_w.values.abs().max()) == 0.0


def test_eval_H_b(grid1):
    (x,) = grid1.coordinates()
    h = ScalarField(torch.sin(x), grid1)
    b = torch.ones((1, grid1.m), dtype=torch.float64)
    out = eval_H_b(b, torch.zeros_like(b), h)
    assert torch.allclose(out.values, torch.cos(x), atol=1e-12)
    assert float(eval_H_b(b, b, h).values.abs().max()) == 0.0
    with pytest.raises(GridMismatch):
        eval_H_b(torch.ones((2, grid1.m)), torch.zeros((2, grid1.m)), h)


def test_eval_all_names(rt, grid1):
    state = trigonometric_state(rt, grid1, seed=1)
    v = BulkField(state.u.upper[:1], state.u.lower[:1], grid1)
    w = BulkField(state.u.upper[1], state.u.lower[1], grid1)
    out = eval_all(rt, v, w, state.pi, ScalarField(state.q, grid1), ScalarField(state.h, grid1),
        ScalarField(state.dth, grid1))
    assert sorted(out.names()) == ["F_d", "F_v", "F_w", "G_kappa", "G_v", "G_w"]
    assert math.isfinite(out.max_abs())


@pytest.mark.parametrize("which", sorted(KERNELS))
@pytest.mark.parametrize("n", [1, 2])
def test_frechet(rt, which, n):
    grid = Grid(n=n, m=16)
    base = trigonometric_state(rt, grid, seed=11)
    direction = trigonometric_state(rt, grid, seed=12, b=base.b)
    result = check_frechet(which, base, direction, with_jvp=True)
    assert result.passed, result.to_dict()
    if get_kernel(which).bilinear:
        assert result.exact


@pytest.mark.parametrize("n", [1, 2])
def test_frechet_bilinear_without_jvp(rt, n):
    grid = Grid(n=n, m=16)
    base = trigonometric_state(rt, grid, seed=11)
    direction = trigonometric_state(rt, grid, seed=12, b=base.b)
    for which in sorted(KERNELS):
        if not get_kernel(which).bilinear:
            continue
        result = check_frechet(which, base, direction)
        assert result.exact and result.passed, result.to_dict()


def test_roundoff_floors_grow_as_step_shrinks():
    floors = roundoff_floors((1e-3, 5e-4))
    assert floors[1] == pytest.approx(2*floors[0])
    assert floors[0] > 1e-9
    assert roundoff_floors((1.0,)) == (1e-9,)


def test_frechet_zero_direction(rt, grid1):
    base = trigonometric_state(rt, grid1, seed=2)
    for which in KERNELS:
        result = check_frechet(which, base, base.zeros_like())
        assert result.exact and result.passed
        assert float(frechet_directional(which, base, base.zeros_like())[which].abs().max()) == 0.0


def test_kernels_vanish_at_zero_state(rt, grid2):
    zero = trigonometric_state(rt, grid2, seed=4).zeros_like()
    for which in KERNELS:
        assert float(get_kernel(which, rt)(zero).abs().max()) == 0.0, which


def test_unknown_kernel():
    with pytest.raises(UnknownKernel):
        get_kernel("F9")


def test_scalar_field_save_load(tmp_path, grid2, gen):
    field = ScalarField(torch.from_numpy(gen.normal(size=grid2.shape)), grid2)
    path = tmp_path/"h.f8"
    field.save(path)
    assert (tmp_path/"h.f8.json").exists()
    assert torch.equal(ScalarField.load(path, grid2).values, field.values)
    with pytest.raises(GridMismatch):
        ScalarField.load(path, Grid(n=2, m=32))
