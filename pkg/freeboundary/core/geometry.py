import cmath
import math
from dataclasses import dataclass
import numpy as np


def in_sector(w, theta):
    """
    True iff w != 0 and |arg w| < theta (open sector, principal argument).
    """
    assert 0 < theta < math.pi, f"in_sector: theta = {theta} outside (0, pi)"
    w = complex(w)
    return w != 0 and abs(cmath.phase(w)) < theta


@dataclass(frozen=True)
class Sector:
    half_angle: float

    def __post_init__(self):
        assert 0 < self.half_angle < math.pi, f"Sector: half_angle = {self.half_angle} outside (0, pi)"

    def __contains__(self, w):
        return in_sector(w, self.half_angle)

    def rays(self, n_rays):
        """
        `n_rays` angles strictly inside the sector, symmetric about 0.
        """
        j = np.arange(n_rays)
        return self.half_angle * (-1.0 + (2*j + 1)/n_rays)


@dataclass(frozen=True)
class StripDomain:
    """
    U_{beta,delta} = {zeta : |Re zeta| < beta + 1, |Im zeta| < delta}
    """
    beta: float
    delta: float

    def __post_init__(self):
        assert self.beta >= 0, f"StripDomain: beta = {self.beta} < 0"
        assert 0 < self.delta <= 1, f"StripDomain: delta = {self.delta} outside (0, 1]"

    def __contains__(self, zeta):
        zeta = complex(zeta)
        return abs(zeta.real) < self.beta + 1 and abs(zeta.imag) < self.delta

    def points(self, n_re, n_im):
        """
        Tensor grid of `n_re` x `n_im` points strictly inside the strip.
        """
        a = (self.beta + 1) * (-1.0 + (2*np.arange(n_re) + 1)/n_re)
        b = self.delta * (-1.0 + (2*np.arange(n_im) + 1)/n_im)
        return (a[:, None] + 1j*b[None, :]).ravel()
