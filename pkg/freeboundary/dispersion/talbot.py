import math
from dataclasses import dataclass
import numpy as np


@dataclass(frozen=True)
class FixedTalbot:
    """
    Fixed Talbot contour lambda(theta) = (r/t) theta (cot theta + i), theta in [0, pi),
    with M nodes theta_k = k pi/M and r = 2M/5 unless given.
    """
    nodes: int = 24
    radius: float = None

    @property
    def r(self):
        return 2*self.nodes/5 if self.radius is None else self.radius

    def _theta(self):
        theta = np.arange(self.nodes)*math.pi/self.nodes
        cot = np.zeros_like(theta)
        cot[1:] = 1/np.tan(theta[1:])
        return (theta, cot)

    def abscissae(self, t):
        """
        Laplace-space points, shape (len(t), M).
        """
        t = np.atleast_1d(np.asarray(t, dtype=float))
        (theta, cot) = self._theta()
        delta = np.empty(self.nodes, dtype=np.complex128)
        delta[0] = self.r
        delta[1:] = self.r*theta[1:]*(cot[1:] + 1j)
        return delta[None, :]/t[:, None]

    def weights(self):
        (theta, cot) = self._theta()
        delta = self.abscissae(1.0)[0]
        gamma = np.exp(delta)*(1 + 1j*theta*(1 + cot**2) - 1j*cot)
        gamma[0] = 0.5*np.exp(delta[0])
        return gamma

    def invert(self, transform, t):
        """
        f(t) for a transform with conjugate symmetry F(conj lambda) = conj F(lambda).
        `transform` is evaluated once on the (len(t), M) array of abscissae.
        """
        t = np.atleast_1d(np.asarray(t, dtype=float))
        values = transform(self.abscissae(t))
        return (self.r/self.nodes)*np.sum((self.weights()[None, :]*values).real, axis=1)/t
