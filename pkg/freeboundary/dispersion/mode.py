import logging
from dataclasses import dataclass
import numpy as np
from ..core.errors import PoleOnContour, NonConvergedQuadrature, PreconditionViolated
from .growth import symbol, symbol_derivative, symbol_scale, find_growth_rate
from .talbot import FixedTalbot

logger = logging.getLogger(__name__)

QUADRATURE_TOL = 1e-6
POLE_TOL = 1e-12


@dataclass
class ModeResponse:
    """
    h(t)/h0 for one Fourier mode started from h0 with the fluid at rest.

    ## Fields
    * `fitted_rate` least-squares slope of log|h| over the last third of
      `times` (None if |h| vanishes there).
    * `lambda_star`, `residue` the subtracted right-half-plane pole, if any.
    * `radius_defect` relative disagreement at times[0] between the default
      contour and one with radius scaled by 1.5.
    """
    tau: float
    times: np.ndarray
    values: np.ndarray
    fitted_rate: float = None
    lambda_star: float = None
    residue: float = None
    nodes: int = 24
    radius: float = None
    radius_defect: float = None

    def csv_rows(self):
        return [(float(t), float(h.real), float(h.imag)) for (t, h) in zip(self.times, self.values)]

    def header(self):
        return {
            "tau": self.tau,
            "fitted_rate": self.fitted_rate,
            "lambda_star": self.lambda_star,
            "residue": self.residue,
            "nodes": self.nodes,
            "radius": self.radius,
            "radius_defect": self.radius_defect}


def fit_rate(times, values):
    """
    Slope of log|h| against t over the final third of the samples.
    """
    times = np.asarray(times, dtype=float)
    start = (2*times.size)//3
    (t, a) = (times[start:], np.abs(values[start:]))
    if t.size < 2 or np.min(a) <= 1e-300:
        return None
    return float(np.polyfit(t, np.log(a), 1)[0])


def _remainder_transform(p, tau, lam_star, residue):
    def transform(lam):
        s = symbol(p, lam, tau)
        scale = np.maximum(1.0, symbol_scale(p, lam, tau))
        if np.min(np.abs(s)/scale) < POLE_TOL:
            raise PoleOnContour(f"mode_response: s vanishes on the Talbot contour at tau = {tau}")
        if lam_star is None:
            return 1/s
        gap = np.abs(lam - lam_star)
        if np.min(gap) < 1e-6*(1 + lam_star):
            raise PoleOnContour(f"mode_response: Talbot node within {np.min(gap):.3e} of lambda* = {lam_star}")
        return 1/s - residue/(lam - lam_star)
    return transform


def invert_symbol(p, tau, times, nodes=24, radius=None, lam_star=None, residue=None):
    talbot = FixedTalbot(nodes, radius)
    h = talbot.invert(_remainder_transform(p, tau, lam_star, residue), times)
    if lam_star is not None:
        h = h + residue*np.exp(lam_star*np.asarray(times, dtype=float))
    return h


def mode_response(p, tau, times, nodes=24, radius=None, check_radius=True):
    """
    Inverse Laplace transform of h-hat(lambda) = h0/s(lambda, tau).

    A real zero lambda* of s in the right half-plane is taken out as
    residue e^{lambda* t}/s'(lambda*) and the analytic remainder is inverted on
    a fixed Talbot contour. Node counts M and 2M must agree to 1e-6 relative.
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if not tau > 0:
        raise PreconditionViolated(f"mode_response: tau = {tau} must be positive")
    if times.size == 0 or np.any(times <= 0) or np.any(np.diff(times) <= 0):
        raise PreconditionViolated("mode_response: times must be positive and strictly increasing")
    lam_star, residue = None, None
    if p.density_jump > 0 and p.gamma_a > 0:
        lam_star = find_growth_rate(p, tau)
    if lam_star is not None:
        residue = float(1/symbol_derivative(p, lam_star, tau).real)
        logger.debug(f"mode_response: subtracting pole lambda* = {lam_star:.12g}, residue {residue:.12g}")

    coarse = invert_symbol(p, tau, times, nodes, radius, lam_star, residue)
    fine = invert_symbol(p, tau, times, 2*nodes, None if radius is None else 2*radius, lam_star, residue)
    defect = np.abs(fine - coarse)/np.maximum(np.abs(fine), 1.0)
    if np.max(defect) > QUADRATURE_TOL:
        i = int(np.argmax(defect))
        raise NonConvergedQuadrature(f"mode_response: M = {nodes} and {2*nodes} differ by {defect[i]:.3e} at t = {times[i]}")

    radius_defect = None
    if check_radius:
        r = FixedTalbot(nodes, radius).r
        other = invert_symbol(p, tau, times[:1], nodes, 1.5*r, lam_star, residue)
        radius_defect = float(abs(other[0] - coarse[0])/max(abs(coarse[0]), 1.0))

    values = coarse.astype(np.complex128)
    response = ModeResponse(
        tau=float(tau), times=times, values=values,
        fitted_rate=fit_rate(times, values),
        lambda_star=lam_star, residue=residue,
        nodes=nodes, radius=FixedTalbot(nodes, radius).r,
        radius_defect=radius_defect)
    logger.info(f"mode_response: tau = {tau}, fitted rate {response.fitted_rate}, lambda* = {lam_star}")
    return response
