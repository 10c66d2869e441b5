import json
import math
from dataclasses import dataclass
from pathlib import Path
import numpy as np
import torch
from ..core.errors import GridMismatch, PreconditionViolated

DTYPE = torch.float64

# levels used by each one-sided or centered y-stencil
STENCIL = 7


@dataclass(frozen=True)
class Grid:
    """
    Uniform periodic grid on [0, 2 pi)^n with m points per axis, plus
    `levels` bulk levels y = +-j dy (j = 1..levels) in each phase.
    The interface y = 0 itself is not a bulk level.
    """
    n: int = 1
    m: int = 32
    levels: int = 12
    dy: float = 0.1

    def __post_init__(self):
        if self.n not in (1, 2):
            raise PreconditionViolated(f"Grid: n = {self.n} must be 1 or 2")
        if self.m < 8:
            raise PreconditionViolated(f"Grid: m = {self.m} must be at least 8")
        if self.levels < STENCIL:
            raise PreconditionViolated(f"Grid: {self.levels} levels, need at least {STENCIL}")
        if not self.dy > 0:
            raise PreconditionViolated(f"Grid: dy = {self.dy} must be positive")

    @property
    def spacing(self):
        return 2*math.pi/self.m

    @property
    def shape(self):
        return (self.m,)*self.n

    @property
    def dims(self):
        return tuple(range(-self.n, 0))

    def coordinates(self):
        """
        Tensor of shape (n, m, ..., m) with the grid coordinates.
        """
        x = torch.arange(self.m, dtype=DTYPE)*self.spacing
        return torch.stack(torch.meshgrid(*([x]*self.n), indexing="ij"))

    def y_upper(self):
        return self.dy*torch.arange(1, self.levels + 1, dtype=DTYPE)

    def y_lower(self):
        return -self.y_upper()

    def wavenumbers(self):
        """
        Integer wavenumbers per axis, each of shape broadcastable to `shape`.
        """
        k = torch.fft.fftfreq(self.m, d=1.0/self.m, dtype=DTYPE)
        out = []
        for a in range(self.n):
            view = [1]*self.n
            view[a] = self.m
            out.append(k.reshape(view))
        return out

    def check(self, tensor, bulk=False, where="Grid.check"):
        tail = ((self.levels,) if bulk else ()) + self.shape
        if tuple(tensor.shape[len(tensor.shape) - len(tail):]) != tail:
            raise GridMismatch(f"{where}: trailing shape {tuple(tensor.shape)} does not end in {tail}")
        return tensor


def _odd_multiplier(grid, k):
    # Nyquist mode of an odd derivative is dropped
    if grid.m % 2 == 0:
        k = torch.where(k.abs() == grid.m//2, torch.zeros_like(k), k)
    return 1j*k


def spectral_derivative(f, grid, axis, order=1):
    F = torch.fft.fftn(f, dim=grid.dims)
    k = grid.wavenumbers()[axis]
    multiplier = _odd_multiplier(grid, k)**order if order % 2 else (-k**2)**(order//2)
    return torch.fft.ifftn(F*multiplier, dim=grid.dims).real


def spectral_gradient(f, grid):
    """
    Returns a tensor of shape (n, *f.shape).
    """
    F = torch.fft.fftn(f, dim=grid.dims)
    return torch.stack([torch.fft.ifftn(F*_odd_multiplier(grid, k), dim=grid.dims).real for k in grid.wavenumbers()])


def spectral_hessian(f, grid):
    """
    Returns a tensor of shape (n, n, *f.shape).
    """
    F = torch.fft.fftn(f, dim=grid.dims)
    ks = grid.wavenumbers()
    rows = []
    for a in range(grid.n):
        row = []
        for b in range(grid.n):
            multiplier = -ks[a]**2 if a == b else _odd_multiplier(grid, ks[a])*_odd_multiplier(grid, ks[b])
            row.append(torch.fft.ifftn(F*multiplier, dim=grid.dims).real)
        rows.append(torch.stack(row))
    return torch.stack(rows)


def spectral_laplacian(f, grid):
    F = torch.fft.fftn(f, dim=grid.dims)
    return torch.fft.ifftn(F*sum(-k**2 for k in grid.wavenumbers()), dim=grid.dims).real


def spectral_divergence(g, grid):
    """
    Divergence of a vector field g of shape (n, ...).
    """
    return sum(spectral_derivative(g[a], grid, a) for a in range(grid.n))


def fd_weights(nodes, target, order):
    """
    Weights w with sum_j w_j f(nodes_j) = f^(order)(target) exactly for
    polynomials of degree < len(nodes).
    """
    nodes = np.asarray(nodes, dtype=float) - target
    npts = nodes.size
    V = np.vander(nodes, npts, increasing=True).T
    rhs = np.zeros(npts)
    rhs[order] = math.factorial(order)
    return np.linalg.solve(V, rhs)


def y_derivative_matrix(levels, order):
    """
    (levels x levels) differentiation matrix in units of dy = 1 for the level
    positions 1, 2, ..., levels: 7-point stencils, centered where possible and
    one-sided near the ends of the stack.
    """
    D = np.zeros((levels, levels))
    half = STENCIL//2
    for i in range(levels):
        start = min(max(i - half, 0), levels - STENCIL)
        window = np.arange(start, start + STENCIL)
        D[i, window] = fd_weights(window + 1.0, i + 1.0, order)
    return D


def trace_weights():
    """
    Quadratic extrapolation to y = 0 from the levels at dy, 2 dy, 3 dy: (3, -3, 1).
    """
    return fd_weights([1.0, 2.0, 3.0], 0.0, 0)


def _apply_levels(f, matrix, grid):
    axis = -(grid.n + 1)
    g = torch.tensordot(torch.as_tensor(matrix, dtype=DTYPE), f.movedim(axis, 0), dims=([1], [0]))
    return g.movedim(0, axis)


@dataclass
class ScalarField:
    """
    Samples of a function on the interface grid. Leading axes (components)
    are allowed in front of the grid axes.
    """
    values: torch.Tensor
    grid: Grid

    def __post_init__(self):
        self.values = torch.as_tensor(self.values, dtype=DTYPE)
        self.grid.check(self.values, where="ScalarField")
        if not torch.isfinite(self.values).all():
            raise PreconditionViolated("ScalarField: values must be finite")

    @property
    def n(self):
        return self.grid.n

    @property
    def m(self):
        return self.grid.m

    @property
    def spacing(self):
        return self.grid.spacing

    def gradient(self):
        return spectral_gradient(self.values, self.grid)

    def hessian(self):
        return spectral_hessian(self.values, self.grid)

    def laplacian(self):
        return spectral_laplacian(self.values, self.grid)

    def save(self, path):
        """
        Row-major doubles in `path` with a JSON sidecar `path`.json.
        """
        path = Path(path)
        self.values.detach().cpu().numpy().astype("<f8").tofile(path)
        sidecar = {"n": self.grid.n, "m": self.grid.m, "shape": list(self.values.shape)}
        path.with_suffix(path.suffix + ".json").write_text(json.dumps(sidecar, indent=2))

    @staticmethod
    def load(path, grid):
        path = Path(path)
        sidecar = json.loads(path.with_suffix(path.suffix + ".json").read_text())
        if sidecar["n"] != grid.n or sidecar["m"] != grid.m:
            raise GridMismatch(f"ScalarField.load: stored grid (n={sidecar['n']}, m={sidecar['m']}) differs from {grid}")
        values = np.fromfile(path, dtype="<f8").reshape(sidecar["shape"])
        return ScalarField(torch.from_numpy(values), grid)


@dataclass
class BulkField:
    """
    Samples above and below the interface plane: `upper[..., j, x]` at
    y = (j+1) dy and `lower[..., j, x]` at y = -(j+1) dy.
    """
    upper: torch.Tensor
    lower: torch.Tensor
    grid: Grid

    def __post_init__(self):
        self.upper = self.grid.check(torch.as_tensor(self.upper, dtype=DTYPE), bulk=True, where="BulkField")
        self.lower = self.grid.check(torch.as_tensor(self.lower, dtype=DTYPE), bulk=True, where="BulkField")
        if self.upper.shape != self.lower.shape:
            raise GridMismatch(f"BulkField: upper {tuple(self.upper.shape)} and lower {tuple(self.lower.shape)} differ")

    @staticmethod
    def from_function(fn, grid, components=None):
        """
        Samples fn(x, y) with x of shape (n, *grid) and y a level value; fn
        returns a tensor of shape (*components, *grid).
        """
        x = grid.coordinates()
        upper = torch.stack([fn(x, y) for y in grid.y_upper()], dim=-(grid.n + 1))
        lower = torch.stack([fn(x, y) for y in grid.y_lower()], dim=-(grid.n + 1))
        return BulkField(upper, lower, grid)

    def sides(self):
        return (("upper", self.upper), ("lower", self.lower))

    def map(self, fn):
        return BulkField(fn(self.upper, "upper"), fn(self.lower, "lower"), self.grid)

    def dy(self, order=1):
        return BulkField(
            y_derivative(self.upper, self.grid, order, "upper"),
            y_derivative(self.lower, self.grid, order, "lower"),
            self.grid)

    def dx(self):
        return self.map(lambda f, side: spectral_gradient(f, self.grid))

    def traces(self):
        return (trace(self.upper, self.grid), trace(self.lower, self.grid))

    def stacked(self):
        return torch.stack([self.upper, self.lower])

    def __add__(self, other):
        return BulkField(self.upper + other.upper, self.lower + other.lower, self.grid)

    def __sub__(self, other):
        return BulkField(self.upper - other.upper, self.lower - other.lower, self.grid)

    def __rmul__(self, c):
        return BulkField(c*self.upper, c*self.lower, self.grid)

    def save(self, path):
        path = Path(path)
        self.stacked().detach().cpu().numpy().astype("<f8").tofile(path)
        sidecar = {
            "n": self.grid.n, "m": self.grid.m,
            "y_levels": [float(y) for y in self.grid.y_upper()] + [float(y) for y in self.grid.y_lower()],
            "shape": list(self.stacked().shape)}
        path.with_suffix(path.suffix + ".json").write_text(json.dumps(sidecar, indent=2))


def y_derivative(f, grid, order=1, side="upper"):
    """
    d^order/dy^order along the level axis of one phase. On the lower side
    the levels run toward negative y, which flips odd derivatives.
    """
    D = y_derivative_matrix(grid.levels, order)/grid.dy**order
    if side == "lower" and order % 2:
        D = -D
    return _apply_levels(f, D, grid)


def trace(f, grid):
    """
    One-sided value at y = 0 by quadratic extrapolation from the three
    nearest levels.
    """
    w = trace_weights()
    axis = -(grid.n + 1)
    return sum(float(w[j])*f.select(axis, j) for j in range(3))
