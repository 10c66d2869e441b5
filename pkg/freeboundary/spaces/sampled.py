from dataclasses import dataclass, field
import numpy as np
from scipy.ndimage import map_coordinates
from ..core.errors import PreconditionViolated


@dataclass
class SampledFunction:
    """
    Samples g(origin + j*spacing) on a uniform grid over a cube in R^n.

    Each sample owns the cell of side `spacing` centred on it, so the box of
    a non-periodic function is [origin - h/2, origin + (m - 1/2) h]^n and g is
    taken to vanish outside it. Periodic samples cover one period m*h.
    """
    values: np.ndarray
    spacing: float
    origin: float = 0.0
    periodic: bool = False

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.ndim not in (1, 2):
            raise PreconditionViolated(f"SampledFunction: {self.values.ndim}-dimensional samples, expected 1 or 2")
        if len(set(self.values.shape)) != 1:
            raise PreconditionViolated(f"SampledFunction: shape {self.values.shape} is not a cube")
        if self.values.shape[0] < 8:
            raise PreconditionViolated(f"SampledFunction: m = {self.values.shape[0]} must be at least 8")
        if not np.all(np.isfinite(self.values)):
            raise PreconditionViolated("SampledFunction: values must be finite")
        if not self.spacing > 0:
            raise PreconditionViolated(f"SampledFunction: spacing = {self.spacing} must be positive")

    @property
    def n(self):
        return self.values.ndim

    @property
    def m(self):
        return self.values.shape[0]

    @property
    def length(self):
        return self.m*self.spacing

    def axis(self):
        return self.origin + self.spacing*np.arange(self.m)

    def coordinates(self):
        return np.stack(np.meshgrid(*([self.axis()]*self.n), indexing="ij"))

    def box(self):
        return (self.origin - 0.5*self.spacing, self.origin + (self.m - 0.5)*self.spacing)

    def grid_spec(self):
        return {"n": self.n, "m": self.m, "spacing": self.spacing}

    @staticmethod
    def from_function(fn, lo, hi, m, n=1, periodic=False):
        """
        Samples fn on m points per axis: nodes lo + j (hi - lo)/m. `fn` takes an
        array of shape (n, ...) of coordinates.
        """
        h = (hi - lo)/m
        x = lo + h*np.arange(m)
        X = np.stack(np.meshgrid(*([x]*n), indexing="ij"))
        return SampledFunction(fn(X), h, lo, periodic)


def dilate(g, c, order=3):
    """
    g_c(x) = g(c x) on the same grid as g, by spline interpolation of the
    samples at the points c x. Outside the box g is zero, or wraps when periodic.
    """
    assert c > 0, f"dilate: c = {c} must be positive"
    index = (c*g.coordinates() - g.origin)/g.spacing
    mode = "grid-wrap" if g.periodic else "grid-constant"
    values = map_coordinates(g.values, index, order=order, mode=mode, cval=0.0)
    return SampledFunction(values, g.spacing, g.origin, g.periodic)


@dataclass
class IntervalFunction:
    """
    Nodal samples g(j h), j = 0..m, on [0, a] with h = a/m.
    """
    values: np.ndarray
    a: float

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1 or self.values.size < 9:
            raise PreconditionViolated(f"IntervalFunction: need at least 9 nodal samples, got shape {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise PreconditionViolated("IntervalFunction: values must be finite")
        if not self.a > 0:
            raise PreconditionViolated(f"IntervalFunction: a = {self.a} must be positive")

    @property
    def m(self):
        return self.values.size - 1

    @property
    def spacing(self):
        return self.a/self.m

    def nodes(self):
        return self.spacing*np.arange(self.m + 1)

    @staticmethod
    def from_function(fn, a, m):
        return IntervalFunction(fn(np.linspace(0.0, a, m + 1)), a)


@dataclass
class SeminormReport:
    value: float
    s: float
    p: float
    method: str
    grid: dict
    truncation: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "value": self.value,
            "s": self.s,
            "p": self.p,
            "method": self.method,
            "grid": self.grid,
            "truncation": self.truncation}
