import logging
import numpy as np
from ..core.errors import BranchCut, ResidualTooLarge
from .ansatz import stacked_interface_matrix, RESIDUAL_TOL, A1, A2, P1, P2

logger = logging.getLogger(__name__)


def k_zero(p):
    return 1.0/(2.0*(p.mu1 + p.mu2))


def k_of_z(p, z):
    """
    Normal-velocity response k(z) = tau * w-hat(0; lambda = z tau^2, tau) at tau = 1.

    Scalars give a scalar, arrays give an array of the same shape. z = 0 is
    answered analytically with 1/(2(mu1 + mu2)); the rest of the closed
    negative real axis raises `BranchCut`.
    """
    z = np.asarray(z, dtype=np.complex128)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    on_axis = (z.imag == 0) & (z.real < 0)
    if np.any(on_axis):
        raise BranchCut(f"k_of_z: z = {z[on_axis][0]} lies on the negative real axis")
    k = np.empty(z.shape, dtype=np.complex128)
    origin = z == 0
    k[origin] = k_zero(p)
    if np.any(~origin):
        k[~origin] = _solve_response(p, z[~origin], 1.0)
    return k[0] if scalar else k


def k_from_lambda_tau(p, lam, tau):
    """
    k evaluated through (lambda, tau) directly, i.e. tau * w-hat(0). Depends on
    (lambda, tau) only through z = lambda/tau^2.
    """
    lam, tau = np.broadcast_arrays(np.asarray(lam, dtype=np.complex128), np.asarray(tau, dtype=np.complex128))
    return tau*_solve_response(p, lam, tau)


def _solve_response(p, lam, tau):
    (M, c1, c2) = stacked_interface_matrix(p, lam, tau)
    rhs = np.zeros(M.shape[:-1], dtype=np.complex128)
    rhs[..., 3] = 1.0
    # rows first, then columns
    row = np.max(np.abs(M), axis=-1, keepdims=True)
    row[row == 0] = 1.0
    scaled = M/row
    scale = np.max(np.abs(scaled), axis=-2, keepdims=True)
    scale[scale == 0] = 1.0
    y = np.linalg.solve(scaled/scale, (rhs/row[..., 0])[..., None])[..., 0]
    x = y/scale[..., 0, :]
    num = np.abs(np.einsum("...ij,...j->...i", M, x) - rhs)
    den = np.einsum("...ij,...j->...i", np.abs(M), np.abs(x)) + np.abs(rhs)
    residual = np.max(num/np.where(den == 0, 1.0, den))
    if residual > RESIDUAL_TOL:
        raise ResidualTooLarge(f"k_of_z: relative interface residual {residual:.3e}")
    # w-hat(0) from the upper side; [[w]] = 0 is one of the imposed rows
    return x[..., A2] + c2*x[..., P2]


def branch_points(p):
    """
    Singular points of k on the negative real z-axis: omega_i vanishes at
    z = -mu_i/rho_i. k is holomorphic off (-inf, max of these].
    """
    return sorted([-p.mu1/p.rho1, -p.mu2/p.rho2])


def k_bound(p, theta, z_min=1e-6, z_max=1e8, per_decade=8, n_rays=17):
    """
    Reported constant N = sup |k(z)| + |z k(z)| over a log-spaced grid of the
    closed sector of half-angle `theta` (theta < pi).
    """
    moduli = np.logspace(np.log10(z_min), np.log10(z_max), int(per_decade*np.log10(z_max/z_min)) + 1)
    angles = np.linspace(-theta, theta, n_rays)
    z = (moduli[:, None]*np.exp(1j*angles[None, :])).ravel()
    k = k_of_z(p, z)
    values = np.abs(k) + np.abs(z*k)
    i = int(np.argmax(values))
    logger.info(f"k_bound: N = {values[i]:.6g} at z = {z[i]:.6g}")
    return float(values[i])


def symmetry_defects(p, z):
    """
    Relative defects of the phase-swap symmetry and of conjugate symmetry of k.
    """
    z = np.asarray(z, dtype=np.complex128)
    k = k_of_z(p, z)
    swap = k_of_z(p.swapped(), z)
    conj = k_of_z(p, np.conj(z))
    rel = lambda a, b: float(np.max(np.abs(a - b)/np.maximum(np.abs(b), 1e-300)))
    return {"phase_swap": rel(swap, k), "conjugate": rel(conj, np.conj(k))}


def limit_anchors(p, small=1e-6, large=1e8, angles=(0.0, np.pi/4, -np.pi/4)):
    """
    Defects of the two limits k(0) = 1/(2(mu1+mu2)) and z k(z) -> 1/(rho1+rho2)
    along the given rays.
    """
    angles = np.asarray(angles)
    z_small = small*np.exp(1j*angles)
    z_large = large*np.exp(1j*angles)
    small_defect = np.abs(2*(p.mu1 + p.mu2)*k_of_z(p, z_small) - 1)
    large_defect = np.abs((p.rho1 + p.rho2)*z_large*k_of_z(p, z_large) - 1)
    return {"k0": float(np.max(small_defect)), "zk_inf": float(np.max(large_defect))}
