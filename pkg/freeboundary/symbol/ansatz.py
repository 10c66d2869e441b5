import logging
from dataclasses import dataclass
import numpy as np
from ..core.errors import BranchCut, SingularAtLambdaZero, ResidualTooLarge

logger = logging.getLogger(__name__)

# unknown ordering in every system: (a1, a2, p1, p2)
A1, A2, P1, P2 = range(4)

RESIDUAL_TOL = 1e-10
TRACE_TOL = 1e-12


def decay_exponents(p, lam, tau):
    """
    omega_i = sqrt(rho_i lambda / mu_i + tau^2), principal branch.

    Accepts scalars or broadcastable arrays. Raises `BranchCut` if any
    radicand lies on the closed negative real axis.
    """
    lam = np.asarray(lam, dtype=np.complex128)
    tau = np.asarray(tau, dtype=np.complex128)
    if np.any(tau == 0):
        raise BranchCut("decay_exponents: tau = 0")
    omegas = []
    for (rho, mu) in ((p.rho1, p.mu1), (p.rho2, p.mu2)):
        radicand = rho*lam/mu + tau**2
        on_cut = (radicand.imag == 0) & (radicand.real <= 0)
        if np.any(on_cut):
            bad = radicand[on_cut] if radicand.ndim else radicand
            raise BranchCut(f"decay_exponents: rho*lambda/mu + tau^2 = {np.ravel(bad)[0]} lies on the branch cut")
        omegas.append(np.sqrt(radicand))
    return tuple(omegas)


@dataclass(frozen=True)
class ResolventAnsatz:
    """
    Exponential solution of the transformed two-phase Stokes resolvent
    problem in one Fourier mode. Phase 2 lives in y > 0, phase 1 in y < 0.
    """
    params: object
    lam: complex
    tau: complex
    omega1: complex
    omega2: complex

    @staticmethod
    def build(p, lam, tau):
        if lam == 0:
            raise SingularAtLambdaZero("ResolventAnsatz: lambda = 0, the pressure terms divide by rho*lambda")
        (omega1, omega2) = decay_exponents(p, lam, tau)
        return ResolventAnsatz(p, complex(lam), complex(tau), complex(omega1), complex(omega2))

    def rows(self, phase, y=0.0, order=0):
        """
        Coefficient rows (over the unknowns a1, a2, p1, p2) of the `order`-th
        y-derivative of w, v and pi at level `y` on the given side.
        """
        p, lam, tau = self.params, self.lam, self.tau
        w, v, pi = (np.zeros(4, dtype=np.complex128) for _ in range(3))
        if phase == 2:
            (om, rho) = (self.omega2, p.rho2)
            e_om = (-om)**order * np.exp(-om*y)
            e_tau = (-tau)**order * np.exp(-tau*y)
            c = tau/(rho*lam)
            w[A2], w[P2] = e_om, c*e_tau
            v[A2], v[P2] = -1j*om/tau*e_om, -1j*c*e_tau
            pi[P2] = e_tau
        elif phase == 1:
            (om, rho) = (self.omega1, p.rho1)
            e_om = om**order * np.exp(om*y)
            e_tau = tau**order * np.exp(tau*y)
            c = tau/(rho*lam)
            w[A1], w[P1] = e_om, -c*e_tau
            v[A1], v[P1] = 1j*om/tau*e_om, -1j*c*e_tau
            pi[P1] = e_tau
        else:
            raise ValueError(f"ResolventAnsatz.rows: unrecognized phase {phase}")
        return {"w": w, "v": v, "pi": pi}


@dataclass(frozen=True)
class InterfaceSystem:
    matrix: np.ndarray
    rhs: np.ndarray
    ansatz: ResolventAnsatz

    def solve(self):
        """
        Dense LU with partial pivoting after row and then column equilibration.
        The residual contract below, not the solver status, decides acceptance.
        """
        row = np.max(np.abs(self.matrix), axis=1)
        row[row == 0] = 1.0
        scaled = self.matrix/row[:, None]
        scale = np.max(np.abs(scaled), axis=0)
        scale[scale == 0] = 1.0
        y = np.linalg.solve(scaled/scale, self.rhs/row)
        x = y/scale
        residual = interface_residuals(self, x)
        if residual["max"] > RESIDUAL_TOL:
            raise ResidualTooLarge(f"InterfaceSystem.solve: relative residual {residual['max']:.3e}")
        return x


def _interface_rows(ansatz, order_rows=None):
    p, tau = ansatz.params, ansatz.tau
    up = {d: ansatz.rows(2, 0.0, d) for d in (0, 1)}
    lo = {d: ansatz.rows(1, 0.0, d) for d in (0, 1)}
    jump_w = up[0]["w"] - lo[0]["w"]
    jump_v = up[0]["v"] - lo[0]["v"]
    tangential = -(p.mu2*up[1]["v"] - p.mu1*lo[1]["v"]) - 1j*tau*(p.mu2*up[0]["w"] - p.mu1*lo[0]["w"])
    normal = -2*(p.mu2*up[1]["w"] - p.mu1*lo[1]["w"]) + (up[0]["pi"] - lo[0]["pi"])
    return np.stack([jump_w, jump_v, tangential, normal])


def assemble_interface_system(p, lam, tau, normal_stress_jump=1.0):
    """
    The four interface conditions at y = 0, in the order
    [[w]] = 0, [[v]] = 0, zero tangential-stress jump, and
    -2[[mu dy w]] + [[pi]] = normal_stress_jump.
    """
    ansatz = ResolventAnsatz.build(p, lam, tau)
    matrix = _interface_rows(ansatz)
    rhs = np.array([0, 0, 0, normal_stress_jump], dtype=np.complex128)
    return InterfaceSystem(matrix, rhs, ansatz)


def bulk_residuals(ansatz, x, y):
    """
    Relative residuals of the momentum equations and of the divergence at
    level y (side chosen by the sign of y).
    """
    p, lam, tau = ansatz.params, ansatz.lam, ansatz.tau
    phase = 2 if y > 0 else 1
    (rho, mu) = (p.rho2, p.mu2) if phase == 2 else (p.rho1, p.mu1)
    r = {d: ansatz.rows(phase, y, d) for d in (0, 1, 2)}
    val = lambda name, d: r[d][name] @ x
    terms_w = [rho*lam*val("w", 0), -mu*val("w", 2), mu*tau**2*val("w", 0), val("pi", 1)]
    terms_v = [rho*lam*val("v", 0), -mu*val("v", 2), mu*tau**2*val("v", 0), 1j*tau*val("pi", 0)]
    terms_div = [1j*tau*val("v", 0), val("w", 1)]
    rel = lambda terms: abs(sum(terms))/max(sum(abs(t) for t in terms), 1e-300)
    return {"momentum_w": rel(terms_w), "momentum_v": rel(terms_v), "divergence": rel(terms_div)}


def interface_residuals(system, x):
    """
    Componentwise backward error |Ax - b| / (|A||x| + |b|) of the interface
    conditions, plus bulk residuals at y in {+-0.1/tau, +-1/tau}.
    """
    A, b = system.matrix, system.rhs
    num = np.abs(A @ x - b)
    den = np.abs(A) @ np.abs(x) + np.abs(b)
    den[den == 0] = 1.0
    interface = num/den
    tau = abs(system.ansatz.tau)
    bulk = {}
    for y in (0.1/tau, -0.1/tau, 1.0/tau, -1.0/tau):
        for (name, value) in bulk_residuals(system.ansatz, x, y).items():
            bulk[f"{name}@{y:+.3g}"] = value
    return {
        "interface": interface,
        "bulk": bulk,
        "max": float(max(np.max(interface), max(bulk.values())))}


def normal_velocity_response(p, lam, tau):
    """
    w-hat(0) for a unit normal-stress jump and zero tangential-stress jump.
    Equals k(lambda/tau^2)/tau.
    """
    system = assemble_interface_system(p, lam, tau, normal_stress_jump=1.0)
    x = system.solve()
    ansatz = system.ansatz
    w_up = ansatz.rows(2, 0.0, 0)["w"] @ x
    w_lo = ansatz.rows(1, 0.0, 0)["w"] @ x
    scale = max(np.sum(np.abs(ansatz.rows(2, 0.0, 0)["w"] * x)), np.sum(np.abs(ansatz.rows(1, 0.0, 0)["w"] * x)), 1e-300)
    if abs(w_up - w_lo) > TRACE_TOL*scale:
        raise ResidualTooLarge(f"normal_velocity_response: one-sided traces of w differ by {abs(w_up - w_lo):.3e}")
    logger.debug(f"normal_velocity_response: lambda={lam}, tau={tau}, w(0)={w_up}")
    return complex(0.5*(w_up + w_lo))


def stacked_interface_matrix(p, lam, tau):
    """
    Vectorized version of the interface matrix: broadcast `lam`, `tau` and
    return an array of shape (..., 4, 4).
    """
    lam = np.asarray(lam, dtype=np.complex128)
    tau = np.asarray(tau, dtype=np.complex128)
    (om1, om2) = decay_exponents(p, lam, tau)
    (lam, tau, om1, om2) = np.broadcast_arrays(lam, tau, om1, om2)
    c1 = tau/(p.rho1*lam)
    c2 = tau/(p.rho2*lam)
    M = np.zeros(lam.shape + (4, 4), dtype=np.complex128)
    one = np.ones_like(lam)
    # [[w]]
    M[..., 0, A1], M[..., 0, A2], M[..., 0, P1], M[..., 0, P2] = -one, one, c1, c2
    # [[v]]
    M[..., 1, A1], M[..., 1, A2] = -1j*om1/tau, -1j*om2/tau
    M[..., 1, P1], M[..., 1, P2] = 1j*c1, -1j*c2
    # -[[mu dy v]] - i tau [[mu w]]
    M[..., 2, A1] = 1j*p.mu1*(om1**2 + tau**2)/tau
    M[..., 2, A2] = -1j*p.mu2*(om2**2 + tau**2)/tau
    M[..., 2, P1] = -2j*p.mu1*tau*c1
    M[..., 2, P2] = -2j*p.mu2*tau*c2
    # -2[[mu dy w]] + [[pi]]
    M[..., 3, A1] = 2*p.mu1*om1
    M[..., 3, A2] = 2*p.mu2*om2
    M[..., 3, P1] = -1 - 2*p.mu1*tau*c1
    M[..., 3, P2] = 1 + 2*p.mu2*tau*c2
    return M, c1, c2
