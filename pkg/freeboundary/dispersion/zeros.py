import logging
import math
from dataclasses import dataclass
import numpy as np
from scipy.special import roots_legendre
from ..core.errors import ZeroOnContour, NonIntegerWinding, PreconditionViolated
from .growth import symbol, symbol_derivative, symbol_scale

logger = logging.getLogger(__name__)

ZERO_TOL = 1e-9
INTEGER_TOL = 0.01
MAX_ARG_STEP = math.pi/8
MAX_PANELS = 20000


@dataclass(frozen=True)
class Rectangle:
    """
    {lambda : r0 <= Re lambda <= r1, |Im lambda| <= h}, traversed counterclockwise.
    """
    r0: float = 1e-6
    r1: float = 1e3
    h: float = 1e3

    def __post_init__(self):
        if not 0 < self.r0 < self.r1:
            raise PreconditionViolated(f"Rectangle: need 0 < r0 < r1, got r0 = {self.r0}, r1 = {self.r1}")
        if not self.h > 0:
            raise PreconditionViolated(f"Rectangle: h = {self.h} must be positive")

    def scaled(self, c):
        return Rectangle(self.r0*c, self.r1*c, self.h*c)

    def breakpoints(self):
        """
        Initial panel ends along the boundary, geometrically graded toward the
        real axis and toward the left edge, where s varies on the scale |lambda|.
        """
        def graded(a, b):
            # geometric from a > 0 up to b, factor 2
            n = max(2, int(math.ceil(math.log2(b/a))) + 1)
            return np.geomspace(a, b, n)
        y = graded(min(self.r0, self.h), self.h)
        y = np.concatenate([-y[::-1], [0.0], y])
        x = graded(self.r0, self.r1)
        bottom = x - 1j*self.h
        right = self.r1 + 1j*y
        top = x[::-1] + 1j*self.h
        left = self.r0 + 1j*y[::-1]
        return np.concatenate([bottom[:-1], right[:-1], top[:-1], left])


def _refine(p, tau, ends):
    """
    Split panels until the argument of s changes by at most pi/8 over each one.
    Returns panel ends and the symbol values there.
    """
    values = symbol(p, ends, tau)
    while True:
        steps = np.abs(np.angle(values[1:]/values[:-1]))
        bad = np.nonzero(steps > MAX_ARG_STEP)[0]
        if bad.size == 0:
            return (ends, values)
        if ends.size + bad.size > MAX_PANELS:
            raise NonIntegerWinding(f"count_zeros_rhp: contour refinement exceeded {MAX_PANELS} panels")
        mids = 0.5*(ends[bad] + ends[bad + 1])
        mid_values = symbol(p, mids, tau)
        ends = np.insert(ends, bad + 1, mids)
        values = np.insert(values, bad + 1, mid_values)
        logger.debug(f"count_zeros_rhp: refined {bad.size} panels, now {ends.size - 1}")


def winding_integral(p, tau, rectangle=None, order=16):
    """
    (1/2 pi i) of the contour integral of s'/s over the rectangle, before rounding.
    """
    rectangle = rectangle or Rectangle()
    (ends, values) = _refine(p, tau, rectangle.breakpoints())
    (x, w) = roots_legendre(order)
    (a, b) = (ends[:-1, None], ends[1:, None])
    nodes = 0.5*(a + b) + 0.5*(b - a)*x[None, :]
    s = symbol(p, nodes, tau)
    relative = np.concatenate([
        np.abs(s).ravel()/np.maximum(1.0, symbol_scale(p, nodes.ravel(), tau)),
        np.abs(values)/np.maximum(1.0, symbol_scale(p, ends, tau))])
    if np.min(relative) < ZERO_TOL:
        raise ZeroOnContour(f"count_zeros_rhp: min |s|/scale = {np.min(relative):.3e} on the contour at tau = {tau}")
    ds = symbol_derivative(p, nodes, tau)
    integral = np.sum(0.5*(b - a)[:, 0]*np.sum(w[None, :]*ds/s, axis=1))
    winding = integral/(2j*math.pi)
    by_argument = np.sum(np.angle(values[1:]/values[:-1]))/(2*math.pi)
    logger.debug(f"count_zeros_rhp: tau = {tau}, {ends.size - 1} panels, quadrature {winding:.6g}, argument sum {by_argument:.6g}")
    return winding


def count_zeros_rhp(p, tau, rectangle=None, order=16):
    """
    Number of zeros of s(., tau) inside the rectangle by the argument principle.
    The winding integral must be within 0.01 of an integer.
    """
    if not tau > 0:
        raise PreconditionViolated(f"count_zeros_rhp: tau = {tau} must be positive")
    winding = winding_integral(p, tau, rectangle, order)
    count = int(round(winding.real))
    if abs(winding - count) > INTEGER_TOL:
        raise NonIntegerWinding(f"count_zeros_rhp: winding number {winding:.6g} is not integer-like at tau = {tau}")
    if count > 1:
        logger.warning(f"count_zeros_rhp: {count} zeros in the right half-plane at tau = {tau}")
    return count
