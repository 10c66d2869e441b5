import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import numpy as np
from ..core.errors import PreconditionViolated, FixedPointNotConverged
from ..symbol.response import k_of_z, k_zero
from ..symbol.extended import s_tilde

logger = logging.getLogger(__name__)

BISECT_TOL = 1e-12
LAMBDA_CAP = 1e8


def symbol(p, lam, tau):
    """
    s(lambda, tau) = s~(lambda, tau, 0). Vectorized in `lam`.
    """
    return s_tilde(p, lam, tau, 0.0)


def symbol_derivative(p, lam, tau):
    """
    d s / d lambda by central differences along the real direction, step
    1e-6 max(1, |lambda|). Near the origin the step shrinks to stay clear of
    the branch point at lambda = 0.
    """
    lam = np.asarray(lam, dtype=np.complex128)
    step = 1e-6*np.maximum(1.0, np.abs(lam))
    step = np.where(np.abs(lam) < 1.0, 1e-6*np.maximum(np.abs(lam), 1e-300), step)
    return (symbol(p, lam + step, tau) - symbol(p, lam - step, tau))/(2*step)


def symbol_scale(p, lam, tau):
    """
    Size of the individual terms of s; used to judge "zero" relative to them.
    """
    lam = np.asarray(lam, dtype=np.complex128)
    k = k_of_z(p, lam/complex(tau)**2)
    return np.abs(lam) + (p.sigma*abs(tau) + abs(p.density_jump)*p.gamma_a/abs(tau))*np.abs(k)


def driving_coefficient(p, tau):
    """
    A(tau) = [[rho]] gamma_a/tau - sigma tau, so that s(lambda, tau) = lambda - A k(lambda/tau^2).
    """
    return p.density_jump*p.gamma_a/tau - p.sigma*tau


def critical_wavenumber(p):
    if p.density_jump > 0 and p.gamma_a > 0:
        return math.sqrt(p.density_jump*p.gamma_a/p.sigma)
    return None


def _real_symbol(p, lam, tau):
    if lam == 0:
        return -driving_coefficient(p, tau)*k_zero(p)
    return float(symbol(p, lam, tau).real)


def _check_unstable(p, tau, where):
    if not p.density_jump > 0:
        raise PreconditionViolated(f"{where}: rho2 = {p.rho2} <= rho1 = {p.rho1}, no Rayleigh-Taylor zero")
    if not p.gamma_a > 0:
        raise PreconditionViolated(f"{where}: gamma_a = {p.gamma_a}, no Rayleigh-Taylor zero")
    if not tau > 0:
        raise PreconditionViolated(f"{where}: tau = {tau} must be positive")


def find_growth_rate(p, tau):
    """
    The real zero lambda* > 0 of s(., tau), or None if there is none.

    s(0+, tau) = -A k(0) is negative exactly for tau < tau*, and s -> +inf as
    lambda -> +inf. The zero is bracketed starting from
    lambda_up = max(1, 10 |A| k(0)), doubled up to 1e8, then bisected to
    1e-12 (1 + lambda) and polished with safeguarded Newton steps.
    """
    _check_unstable(p, tau, "find_growth_rate")
    f_lo = _real_symbol(p, 0.0, tau)
    if f_lo >= 0:
        logger.debug(f"find_growth_rate: s(0+, {tau}) = {f_lo:.3e} >= 0, tau >= tau*")
        return None
    (lo, hi) = (0.0, max(1.0, 10*abs(driving_coefficient(p, tau))*k_zero(p)))
    while _real_symbol(p, hi, tau) <= 0:
        (lo, hi) = (hi, 2*hi)
        logger.debug(f"find_growth_rate: doubling bracket to [{lo:.6g}, {hi:.6g}]")
        if hi > LAMBDA_CAP:
            logger.info(f"find_growth_rate: no sign change below {LAMBDA_CAP:g} at tau = {tau}")
            return None
    while hi - lo > BISECT_TOL*(1 + lo):
        mid = 0.5*(lo + hi)
        if mid in (lo, hi):
            break
        if _real_symbol(p, mid, tau) <= 0:
            lo = mid
        else:
            hi = mid
    lam = 0.5*(lo + hi)
    f = _real_symbol(p, lam, tau)
    for _ in range(3):
        df = float(symbol_derivative(p, lam, tau).real)
        if df == 0:
            break
        trial = lam - f/df
        if not lo <= trial <= hi:
            break
        f_trial = _real_symbol(p, trial, tau)
        if abs(f_trial) >= abs(f):
            break
        (lam, f) = (trial, f_trial)
    logger.debug(f"find_growth_rate: tau = {tau}, lambda* = {lam:.17g}, s = {f:.3e}")
    return lam


def fixed_point_growth_rate(p, tau, lam0=None, tol=1e-14, max_iter=1000):
    """
    Iterates lambda <- A(tau) k(lambda/tau^2), A = [[rho]] gamma_a/tau - sigma tau,
    starting from the small-z value. Independent of the bracketing search.
    """
    _check_unstable(p, tau, "fixed_point_growth_rate")
    A = driving_coefficient(p, tau)
    if A <= 0:
        return None
    lam = A*k_zero(p) if lam0 is None else float(lam0)
    for i in range(max_iter):
        new = A*float(k_of_z(p, lam/tau**2).real)
        if abs(new - lam) <= tol*(1 + abs(new)):
            logger.debug(f"fixed_point_growth_rate: converged in {i+1} iterations")
            return new
        lam = new
    raise FixedPointNotConverged(f"fixed_point_growth_rate: no convergence in {max_iter} iterations at tau = {tau}")


def small_z_growth_rate(p, tau):
    """
    ([[rho]] gamma_a - sigma tau^2)/(2(mu1 + mu2) tau): the zero with k frozen
    at k(0). Accurate where lambda*/tau^2 is small, which happens near tau*.
    """
    return driving_coefficient(p, tau)*k_zero(p)


def inviscid_growth_rate(p, tau):
    """
    sqrt(([[rho]] gamma_a tau - sigma tau^3)/(rho1 + rho2)), the |z| -> inf
    limit of the same symbol; None where the radicand is not positive.
    """
    radicand = (p.density_jump*p.gamma_a*tau - p.sigma*tau**3)/(p.rho1 + p.rho2)
    return math.sqrt(radicand) if radicand > 0 else None


@dataclass
class DispersionRow:
    tau: float
    lambda_star: float = None
    zero_count: int = 0


@dataclass
class DispersionCurve:
    params: object
    tau_star: float = None
    rows: list = field(default_factory=list)

    def header(self):
        return {"params": self.params.to_dict(), "tau_star": self.tau_star}

    def csv_rows(self):
        return [(r.tau, r.lambda_star, r.zero_count) for r in self.rows]

    def taus(self):
        return np.array([r.tau for r in self.rows])

    def lambdas(self):
        return np.array([np.nan if r.lambda_star is None else r.lambda_star for r in self.rows])


def dispersion_curve(p, tau_grid, threads=1, count_zeros=True, rectangle=None):
    """
    Per-tau growth rate and right-half-plane zero count.

    A growth rate below the left edge of the counting rectangle is reported
    as absent: the zero has merged with the origin (tau at tau*).
    """
    from .zeros import Rectangle, count_zeros_rhp
    taus = [float(t) for t in tau_grid]
    if any(not t > 0 for t in taus):
        raise PreconditionViolated("dispersion_curve: tau_grid must be strictly positive")
    if any(b <= a for (a, b) in zip(taus, taus[1:])):
        raise PreconditionViolated("dispersion_curve: tau_grid must be strictly increasing")
    rectangle = rectangle or Rectangle()
    unstable = p.density_jump > 0 and p.gamma_a > 0

    def row(tau):
        lam = find_growth_rate(p, tau) if unstable else None
        if lam is not None and lam <= rectangle.r0:
            logger.debug(f"dispersion_curve: lambda* = {lam:.3e} below r0 at tau = {tau}, reported absent")
            lam = None
        count = count_zeros_rhp(p, tau, rectangle) if count_zeros else int(lam is not None)
        return DispersionRow(tau, lam, count)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(row, taus))
    else:
        rows = [row(t) for t in taus]
    curve = DispersionCurve(p, critical_wavenumber(p), rows)
    logger.info(f"dispersion_curve: {len(rows)} rows, tau* = {curve.tau_star}")
    return curve
