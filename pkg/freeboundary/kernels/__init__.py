# freeboundary/kernels/__init__.py
# 2026-10-17
from .fields import (Grid, ScalarField, BulkField, spectral_derivative, spectral_gradient, spectral_hessian,
    spectral_laplacian, spectral_divergence, y_derivative, trace, fd_weights)
from .nonlinear import (KernelOutput, eval_F, eval_F_d, eval_G, eval_G_kappa, mean_curvature_graph, eval_H_b,
    eval_all, g_kappa_pointwise, mean_curvature_pointwise, beta_lipschitz_gap, stress_jumps, curvature_defect)
from .frechet import (State, Kernel, KERNELS, get_kernel, frechet_directional, jvp_oracle, FrechetCheck,
    check_frechet, roundoff_floors, trigonometric_state)
