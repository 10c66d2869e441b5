from dataclasses import dataclass
import numpy as np
from ..core.errors import ZeroFrequency, BranchCut
from .response import k_of_z


@dataclass(frozen=True)
class SymbolValue:
    params: object
    lam: complex
    tau: complex
    zeta: complex
    z: complex
    k: complex
    s_tilde: complex

    def recompute(self):
        """
        s-tilde reassembled from the stored fields.
        """
        return assemble_s_tilde(self.params, self.lam, self.tau, self.zeta, self.k)


def assemble_s_tilde(p, lam, tau, zeta, k):
    return lam + p.sigma*tau*k + 1j*tau*zeta - p.density_jump*p.gamma_a*k/tau


def s_tilde(p, lam, tau, zeta=0.0):
    """
    Vectorized extended symbol; `lam`, `tau`, `zeta` broadcast.
    """
    lam = np.asarray(lam, dtype=np.complex128)
    tau = np.asarray(tau, dtype=np.complex128)
    if np.any(tau == 0):
        raise BranchCut("s_tilde: tau = 0")
    k = k_of_z(p, lam/tau**2)
    return assemble_s_tilde(p, lam, tau, zeta, k)


def eval_extended_symbol(p, lam, tau, zeta=0.0):
    """
    s~(lambda, tau, zeta) = lambda + sigma tau k(z) + i tau zeta - [[rho]] gamma_a k(z)/tau,
    z = lambda/tau^2.
    """
    (lam, tau, zeta) = (complex(lam), complex(tau), complex(zeta))
    if tau == 0:
        raise BranchCut("eval_extended_symbol: tau = 0")
    z = lam/tau**2
    k = complex(k_of_z(p, z))
    return SymbolValue(p, lam, tau, zeta, z, k, assemble_s_tilde(p, lam, tau, zeta, k))


def eval_boundary_symbol(p, lam, xi, b0=None):
    """
    s_{b0}(lambda, xi) = lambda + (sigma|xi| - [[rho]] gamma_a/|xi|) k(z) + i(b0|xi).

    The frequency vector is reduced to tau = |xi|, zeta = (b0|xi)/|xi|.
    """
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    b0 = np.zeros_like(xi) if b0 is None else np.atleast_1d(np.asarray(b0, dtype=float))
    assert xi.shape == b0.shape, f"eval_boundary_symbol: xi {xi.shape} and b0 {b0.shape} differ"
    tau = float(np.linalg.norm(xi))
    if tau == 0:
        raise ZeroFrequency("eval_boundary_symbol: xi = 0")
    transport = float(b0 @ xi)
    k = complex(k_of_z(p, complex(lam)/tau**2))
    value = complex(lam) + (p.sigma*tau - p.density_jump*p.gamma_a/tau)*k + 1j*transport
    reduced = eval_extended_symbol(p, lam, tau, transport/tau)
    scale = abs(complex(lam)) + (p.sigma*tau + abs(p.density_jump)*p.gamma_a/tau)*abs(k) + abs(transport)
    assert abs(value - reduced.s_tilde) <= 1e-14*max(1.0, scale), \
        f"eval_boundary_symbol: {value} != {reduced.s_tilde}"
    return value
