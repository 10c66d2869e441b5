import numpy as np
from ..core.errors import PreconditionViolated
from .sampled import IntervalFunction

TOL = 1e-10

# h'(0) from h(0), ..., h(4 dt), exact for quartics
ONE_SIDED = np.array([-25.0, 48.0, -36.0, 16.0, -3.0])/12


def _zero_extended(values, index):
    out = np.zeros(index.shape)
    inside = index >= 0
    out[inside] = values[index[inside]]
    return out


def _reflect(values, m, first, second):
    """
    Samples on the 3m + 1 nodes of [0, 3a]: values[j] for j <= m, and
    first*v~(2m - j) + second*v~(3m - 2j) beyond, v~ the zero extension.
    """
    j = np.arange(m + 1, 3*m + 1)
    tail = first*_zero_extended(values, 2*m - j) + second*_zero_extended(values, 3*m - 2*j)
    return np.concatenate([values, tail])


def extend_c1(h):
    """
    (Eh)(t) = h(t) on [0, a], 3 h~(2a - t) - 2 h~(3a - 2t) beyond; Eh is C^1
    when h(0) = h'(0) = 0 and vanishes for t >= 3a.
    """
    dt = h.spacing
    slope = float(ONE_SIDED @ h.values[:5])/dt
    if abs(h.values[0]) > TOL or abs(slope) > TOL:
        raise PreconditionViolated(f"extend_c1: h(0) = {h.values[0]:.3e}, h'(0) = {slope:.3e} must vanish")
    return IntervalFunction(_reflect(h.values, h.m, 3.0, -2.0), 3*h.a)


def extend_c1_derivative(dh):
    """
    (Eh)' from samples of h': -3 h~'(2a - t) + 4 h~'(3a - 2t) beyond a.
    """
    if abs(dh.values[0]) > TOL:
        raise PreconditionViolated(f"extend_c1_derivative: h'(0) = {dh.values[0]:.3e} must vanish")
    return IntervalFunction(_reflect(dh.values, dh.m, -3.0, 4.0), 3*dh.a)


def seam_mismatch(h):
    """
    Jumps in value and slope of Eh at t = a, the slope taken from one-sided
    stencils on each side of the seam.
    """
    Eh = extend_c1(h)
    (m, dt) = (h.m, h.spacing)
    right_value = 3*h.values[m] - 2*h.values[m]
    left_slope = -float(ONE_SIDED @ Eh.values[m::-1][:5])/dt
    right_slope = float(ONE_SIDED @ Eh.values[m:m + 5])/dt
    return (abs(right_value - h.values[m]), abs(right_slope - left_slope))
