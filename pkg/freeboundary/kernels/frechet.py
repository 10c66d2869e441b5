import logging
import itertools
from dataclasses import dataclass
import torch
from torch.nn import Module
from ..core.errors import UnknownKernel, GridMismatch
from ..core.params import FluidParams
from .fields import BulkField, DTYPE, spectral_gradient, spectral_laplacian
from .nonlinear import KernelOutput, beta

logger = logging.getLogger(__name__)

ROUNDOFF_FLOOR = 1e-9
# relative roundoff of a central difference at step e is about ROUNDOFF_GAIN*eps/e
ROUNDOFF_GAIN = 2e5
RATIO_BAND = (3.5, 4.5)
JVP_TOL = 1e-10


@dataclass
class State:
    """
    A point z = (u, pi, q, h, dth) of the nonlinearity's domain, with the
    transport field `b` held fixed. u carries n + 1 components (v, then w).
    """
    params: FluidParams
    u: BulkField
    pi: BulkField
    q: torch.Tensor
    h: torch.Tensor
    dth: torch.Tensor
    b: torch.Tensor

    def __post_init__(self):
        grid = self.u.grid
        if self.pi.grid != grid:
            raise GridMismatch(f"State: pressure grid {self.pi.grid} differs from velocity grid {grid}")
        if self.u.upper.shape[0] != grid.n + 1:
            raise GridMismatch(f"State: u has {self.u.upper.shape[0]} components, need {grid.n + 1}")
        for name in ("q", "h", "dth", "b"):
            grid.check(getattr(self, name), where=f"State.{name}")

    @property
    def grid(self):
        return self.u.grid

    def tensors(self):
        return (self.u.upper, self.u.lower, self.pi.upper, self.pi.lower, self.q, self.h, self.dth)

    def with_tensors(self, ts):
        grid = self.grid
        return State(self.params, BulkField(ts[0], ts[1], grid), BulkField(ts[2], ts[3], grid), ts[4], ts[5], ts[6], self.b)

    def axpy(self, c, direction):
        """
        self + c * direction (b is kept from self).
        """
        return self.with_tensors([a + c*d for (a, d) in zip(self.tensors(), direction.tensors())])

    def zeros_like(self):
        return self.with_tensors([torch.zeros_like(t) for t in self.tensors()])


def _grad(t, grid):
    return spectral_gradient(t, grid)


def _gh(state):
    return _grad(state.h, state.grid)


def _uy(state, order=1):
    return state.u.dy(order).stacked()


def _v(stacked, n):
    # horizontal part of a stacked (2, n+1, ...) velocity
    return stacked[:, :n]


def _dot_gh(vel, gh):
    # (v|grad h) for stacked (2, n, L, *grid) velocities
    return (vel*gh[:, None]).sum(1)


def stress_jump_tensor(state, u=None):
    """
    J[i, k] = [[mu d_i u_k]] with i running over the n horizontal
    directions and then y; shape (n+1, n+1, *grid).
    """
    (p, grid) = (state.params, state.grid)
    u = state.u if u is None else u
    jump = lambda a, b: p.mu2*a - p.mu1*b
    (up, lo) = u.traces()
    (dyu, dyl) = u.dy().traces()
    dx = jump(_grad(up, grid), _grad(lo, grid))
    return torch.cat([dx, jump(dyu, dyl)[None]])


def _trace_v(state, u=None):
    u = state.u if u is None else u
    (up, lo) = u.traces()
    return 0.5*(up + lo)[:state.grid.n]


class Kernel(Module):
    """
    One term of the nonlinearity with its closed-form Frechet derivative.
    `bilinear` kernels are at most quadratic along lines, so central
    differences reproduce their derivative exactly.
    """
    name = None
    bilinear = False

    def __init__(self, params=None):
        super().__init__()
        self.params = params

    def forward(self, state):
        raise NotImplementedError

    def derivative(self, state, direction):
        raise NotImplementedError


class F1(Kernel):
    name = "F1"

    def forward(self, s):
        return (_gh(s)**2).sum(0)*_uy(s, 2)

    def derivative(self, s, d):
        (gh, ghb) = (_gh(s), _gh(d))
        return (gh**2).sum(0)*_uy(d, 2) + 2*(gh*ghb).sum(0)*_uy(s, 2)


class F2(Kernel):
    name = "F2"
    bilinear = True

    def forward(self, s):
        return spectral_laplacian(s.h, s.grid)*_uy(s)

    def derivative(self, s, d):
        return spectral_laplacian(s.h, s.grid)*_uy(d) + spectral_laplacian(d.h, s.grid)*_uy(s)


class F3(Kernel):
    name = "F3"

    def forward(self, s):
        (n, uy) = (s.grid.n, _uy(s))
        return _dot_gh(_v(s.u.stacked(), n), _gh(s))[:, None]*uy

    def derivative(self, s, d):
        n = s.grid.n
        (u, ub, uy, uby) = (s.u.stacked(), d.u.stacked(), _uy(s), _uy(d))
        (gh, ghb) = (_gh(s), _gh(d))
        return (_dot_gh(_v(ub, n), gh)[:, None]*uy
            + _dot_gh(_v(u, n), gh)[:, None]*uby
            + _dot_gh(_v(u, n), ghb)[:, None]*uy)


class F4(Kernel):
    name = "F4"
    bilinear = True

    def forward(self, s):
        return s.dth*_uy(s)

    def derivative(self, s, d):
        return s.dth*_uy(d) + d.dth*_uy(s)


class F5(Kernel):
    name = "F5"
    bilinear = True

    def forward(self, s):
        return s.pi.dy().stacked()[:, None]*_gh(s)[:, None]

    def derivative(self, s, d):
        (py, pby) = (s.pi.dy().stacked(), d.pi.dy().stacked())
        return pby[:, None]*_gh(s)[:, None] + py[:, None]*_gh(d)[:, None]


class Fd(Kernel):
    name = "Fd"
    bilinear = True

    def forward(self, s):
        return _dot_gh(_v(_uy(s), s.grid.n), _gh(s))

    def derivative(self, s, d):
        n = s.grid.n
        return _dot_gh(_v(_uy(d), n), _gh(s)) + _dot_gh(_v(_uy(s), n), _gh(d))


class G1(Kernel):
    name = "G1"
    bilinear = True

    def forward(self, s):
        return stress_jump_tensor(s)[:, :, None]*_gh(s)[None, None]

    def derivative(self, s, d):
        (J, Jb) = (stress_jump_tensor(s), stress_jump_tensor(s, d.u))
        return Jb[:, :, None]*_gh(s)[None, None] + J[:, :, None]*_gh(d)[None, None]


class G2(Kernel):
    name = "G2"

    def forward(self, s):
        gh = _gh(s)
        return stress_jump_tensor(s)[:, :, None, None]*(gh[:, None]*gh[None])[None, None]

    def derivative(self, s, d):
        (J, Jb) = (stress_jump_tensor(s), stress_jump_tensor(s, d.u))
        (gh, ghb) = (_gh(s), _gh(d))
        outer = lambda a, b: (a[:, None]*b[None])[None, None]
        return (Jb[:, :, None, None]*outer(gh, gh)
            + J[:, :, None, None]*outer(gh, ghb)
            + J[:, :, None, None]*outer(ghb, gh))


class G3(Kernel):
    name = "G3"
    bilinear = True

    def forward(self, s):
        return s.q*_gh(s)

    def derivative(self, s, d):
        return d.q*_gh(s) + s.q*_gh(d)


class G4(Kernel):
    name = "G4"
    bilinear = True

    def forward(self, s):
        return spectral_laplacian(s.h, s.grid)*_gh(s)

    def derivative(self, s, d):
        return spectral_laplacian(d.h, s.grid)*_gh(s) + spectral_laplacian(s.h, s.grid)*_gh(d)


class G5(Kernel):
    """
    |grad h|^2 Delta h/((1 + beta) beta), the first term of G_kappa.
    """
    name = "G5"

    def forward(self, s):
        gh = _gh(s)
        b = beta(gh)
        return (gh**2).sum(0)*spectral_laplacian(s.h, s.grid)/((1 + b)*b)

    def derivative(self, s, d):
        (gh, ghb) = (_gh(s), _gh(d))
        (lap, lapb) = (spectral_laplacian(s.h, s.grid), spectral_laplacian(d.h, s.grid))
        b = beta(gh)
        gh2 = (gh**2).sum(0)
        coefficient = -(1/((1 + b)**2*b**2) + 1/((1 + b)*b**3))
        return (coefficient*gh2*lap*(gh*ghb).sum(0)
            + (2*(gh*ghb).sum(0)*lap + gh2*lapb)/((1 + b)*b))


class Hb(Kernel):
    """
    (b - gamma v|grad h), gamma the interface trace.
    """
    name = "Hb"
    bilinear = True

    def forward(self, s):
        return ((s.b - _trace_v(s))*_gh(s)).sum(0)

    def derivative(self, s, d):
        return -(_gh(s)*_trace_v(s, d.u)).sum(0) + ((s.b - _trace_v(s))*_gh(d)).sum(0)


KERNELS = {k.name: k for k in (F1, F2, F3, F4, F5, Fd, G1, G2, G3, G4, G5, Hb)}


def get_kernel(which, params=None):
    try:
        return KERNELS[which](params)
    except KeyError:
        raise UnknownKernel(f"get_kernel: unrecognized kernel {which!r}, expected one of {sorted(KERNELS)}") from None


def frechet_directional(which, base, direction):
    """
    Closed-form directional derivative DN(base)[direction] of the named kernel.
    """
    if direction.grid != base.grid:
        raise GridMismatch(f"frechet_directional: direction grid {direction.grid} differs from base grid {base.grid}")
    kernel = get_kernel(which, base.params)
    return KernelOutput({which: kernel.derivative(base, direction)})


def jvp_oracle(which, base, direction):
    """
    The same directional derivative by forward-mode automatic differentiation.
    """
    kernel = get_kernel(which, base.params)
    (_, tangent) = torch.func.jvp(lambda *ts: kernel(base.with_tensors(ts)), base.tensors(), direction.tensors())
    return tangent


@dataclass
class FrechetCheck:
    kernel: str
    errors: tuple
    ratio: float
    exact: bool
    passed: bool
    tolerance: tuple = (ROUNDOFF_FLOOR,)
    jvp_error: float = None

    @property
    def max_error(self):
        return max(self.errors)

    def to_dict(self):
        return {
            "kernel": self.kernel,
            "max_error": self.max_error,
            "tolerance": list(self.tolerance),
            "pass": self.passed,
            "errors": list(self.errors),
            "ratio": self.ratio,
            "exact": self.exact,
            "jvp_error": self.jvp_error}


def roundoff_floors(eps):
    return tuple(max(ROUNDOFF_FLOOR, ROUNDOFF_GAIN*torch.finfo(DTYPE).eps/e) for e in eps)


def check_frechet(which, base, direction, eps=(1e-3, 5e-4), with_jvp=False):
    """
    Central-difference check of the closed-form derivative at two step
    sizes. Errors are relative to the size of the derivative and kernel.

    Passes if both errors are below the roundoff floor of their step (recorded
    as `exact`), otherwise if halving the step divides the error by a factor
    in [3.5, 4.5]. With `with_jvp`, a bilinear kernel whose closed form matches
    forward-mode differentiation is also exact.
    """
    kernel = get_kernel(which, base.params)
    closed = kernel.derivative(base, direction)
    scale = max(float(closed.abs().max()), float(kernel(base).abs().max()))
    scale = scale if scale > 0 else 1.0
    errors = []
    for e in eps:
        fd = (kernel(base.axpy(e, direction)) - kernel(base.axpy(-e, direction)))/(2*e)
        errors.append(float((fd - closed).abs().max())/scale)
    floors = roundoff_floors(eps)
    exact = all(err < floor for (err, floor) in zip(errors, floors))
    ratio = errors[0]/errors[1] if errors[1] > 0 else float("inf")
    jvp_error = None
    if with_jvp:
        jvp_error = float((jvp_oracle(which, base, direction) - closed).abs().max())/scale
        exact = exact or (kernel.bilinear and jvp_error <= JVP_TOL)
    passed = exact or RATIO_BAND[0] <= ratio <= RATIO_BAND[1]
    if with_jvp:
        passed = passed and jvp_error <= JVP_TOL
    result = FrechetCheck(which, tuple(errors), ratio, exact, passed, floors, jvp_error)
    logger.info(f"check_frechet: {which} errors {errors[0]:.3e}, {errors[1]:.3e}, exact={exact}, pass={passed}")
    return result


def _wave_vectors(n, modes):
    ks = [k for k in itertools.product(range(-modes, modes + 1), repeat=n) if any(k)]
    return torch.tensor(ks, dtype=DTYPE)


def _trigonometric(grid, gen, x, modes, components=()):
    """
    Random low-frequency trigonometric polynomial on the interface grid.
    """
    ks = _wave_vectors(grid.n, modes)
    phase = torch.einsum("ka,a...->k...", ks, x)
    shape = tuple(components) + (ks.shape[0],)
    weight = 1/(1 + (ks**2).sum(1))
    a = torch.randn(shape, generator=gen, dtype=DTYPE)*weight
    b = torch.randn(shape, generator=gen, dtype=DTYPE)*weight
    return torch.tensordot(a, torch.cos(phase), dims=1) + torch.tensordot(b, torch.sin(phase), dims=1)


def trigonometric_state(params, grid, seed, amplitude=0.3, modes=2, b=None):
    """
    Seeded smooth state: low-frequency trigonometric interface fields and
    bulk fields of the form pattern(x) (1 + c y) exp(-y^2/2).
    """
    gen = torch.Generator().manual_seed(seed)
    x = grid.coordinates()
    n = grid.n

    def normalized(t):
        return amplitude*t/t.abs().max()

    def bulk(components):
        pattern = normalized(_trigonometric(grid, gen, x, modes, components))
        c = float(torch.rand((), generator=gen, dtype=DTYPE)) - 0.5
        return BulkField.from_function(lambda x, y: pattern*(1 + c*y)*torch.exp(-y**2/2), grid, components)

    u = bulk((n + 1,))
    pi = bulk(())
    (q, h, dth) = (normalized(_trigonometric(grid, gen, x, modes)) for _ in range(3))
    b = normalized(_trigonometric(grid, gen, x, modes, (n,))) if b is None else b
    return State(params, u, pi, q, h, dth, b)
