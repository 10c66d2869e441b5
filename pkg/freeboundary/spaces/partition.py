import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
import numpy as np
from ..core.errors import PreconditionViolated, WindowTooSmall
from .sampled import SampledFunction

logger = logging.getLogger(__name__)


def smooth_step(u):
    """
    C-infinity step: 0 for u <= 0, 1 for u >= 1.
    """
    u = np.asarray(u, dtype=float)
    f = lambda v: np.where(v > 0, np.exp(-1/np.where(v > 0, v, 1.0)), 0.0)
    return f(u)/(f(u) + f(1 - u))


def cutoff(t, epsilon):
    """
    1 on |t| <= epsilon/4, 0 on |t| >= epsilon/2.
    """
    return smooth_step((epsilon/2 - np.abs(t))/(epsilon/4))


@dataclass
class PartitionOfUnity:
    """
    phi_j = phi(x - x_j)/sqrt(sum_k phi(x - x_k)^2) with centers x_j on
    (epsilon/2) Z^n, sampled on a grid over the window.
    """
    epsilon: float
    centers: np.ndarray
    functions: list

    def __len__(self):
        return len(self.functions)

    def __iter__(self):
        return iter(self.functions)

    def __getitem__(self, j):
        return self.functions[j]

    def sum_of_squares(self):
        return sum(np.abs(f.values)**2 for f in self.functions)

    def deviation(self):
        return float(np.max(np.abs(self.sum_of_squares() - 1)))

    def save(self, path):
        path = Path(path)
        stacked = np.stack([f.values for f in self.functions]).astype("<f8")
        stacked.tofile(path)
        first = self.functions[0]
        sidecar = {
            "epsilon": self.epsilon,
            "centers": self.centers.tolist(),
            "origin": first.origin,
            "spacing": first.spacing,
            "shape": list(stacked.shape)}
        path.with_suffix(path.suffix + ".json").write_text(json.dumps(sidecar, indent=2))


def _center_indices(lo, hi, epsilon):
    # centers c = k epsilon/2 whose cube (c - epsilon/2, c + epsilon/2) meets [lo, hi]
    half = epsilon/2
    return np.arange(math.floor(lo/half - 1) + 1, math.ceil(hi/half + 1))


def partition_of_unity(epsilon, window, n=1, m=64):
    """
    Squared partition of unity on the cube window^n, window = (lo, hi),
    sampled at m points per axis including both ends.
    """
    (lo, hi) = window
    if not epsilon > 0:
        raise PreconditionViolated(f"partition_of_unity: epsilon = {epsilon} must be positive")
    if not hi > lo:
        raise PreconditionViolated(f"partition_of_unity: empty window {window}")
    ks = _center_indices(lo, hi, epsilon)
    if len(ks)**n < 2:
        raise WindowTooSmall(f"partition_of_unity: only {len(ks)**n} cube(s) meet {window} at epsilon = {epsilon}")
    spacing = (hi - lo)/(m - 1)
    axis = lo + spacing*np.arange(m)
    grids = np.meshgrid(*([axis]*n), indexing="ij")
    centers = np.stack(np.meshgrid(*([ks*epsilon/2]*n), indexing="ij"), -1).reshape(-1, n)
    raw = [np.prod([cutoff(x - c, epsilon) for (x, c) in zip(grids, center)], axis=0) for center in centers]
    norm = np.sqrt(sum(r**2 for r in raw))
    functions = [SampledFunction(r/norm, spacing, lo) for r in raw]
    pou = PartitionOfUnity(epsilon, centers, functions)
    logger.debug(f"partition_of_unity: {len(pou)} cubes, sum-of-squares deviation {pou.deviation():.2e}")
    return pou
