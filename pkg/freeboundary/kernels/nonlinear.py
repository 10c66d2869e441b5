from dataclasses import dataclass, field
import torch
from ..core.errors import GridMismatch
from .fields import ScalarField, BulkField, spectral_gradient, spectral_hessian, spectral_laplacian, spectral_divergence


@dataclass
class KernelOutput:
    """
    Named kernel values: interface quantities are tensors over the interface
    grid, bulk quantities are stacked (upper, lower) tensors.
    """
    values: dict = field(default_factory=dict)

    def __getitem__(self, name):
        return self.values[name]

    def __contains__(self, name):
        return name in self.values

    def names(self):
        return list(self.values)

    def max_abs(self):
        return max((float(v.abs().max()) for v in self.values.values()), default=0.0)


def _interface(h, grid=None):
    if isinstance(h, ScalarField):
        if grid is not None and h.grid != grid:
            raise GridMismatch(f"kernels: interface grid {h.grid} differs from bulk grid {grid}")
        return (h.values, h.grid)
    if grid is None:
        raise GridMismatch("kernels: a raw tensor needs a grid")
    return (grid.check(torch.as_tensor(h, dtype=torch.float64), where="kernels"), grid)


def _same_grid(*fields):
    grids = {f.grid for f in fields}
    if len(grids) != 1:
        raise GridMismatch(f"kernels: fields live on different grids {grids}")
    return grids.pop()


def beta(grad):
    """
    beta = sqrt(1 + |grad h|^2), grad of shape (n, ...).
    """
    return torch.sqrt(1 + (grad**2).sum(0))


def g_kappa_pointwise(grad, hess):
    """
    G_kappa from injected derivatives: grad (n, ...), hess (n, n, ...).
    """
    grad, hess = torch.as_tensor(grad, dtype=torch.float64), torch.as_tensor(hess, dtype=torch.float64)
    b = beta(grad)
    lap = torch.diagonal(hess, dim1=0, dim2=1).sum(-1)
    hgh = torch.einsum("a...,ab...,b...->...", grad, hess, grad)
    return (grad**2).sum(0)*lap/((1 + b)*b) + hgh/b**3


def mean_curvature_pointwise(grad, hess):
    """
    div(grad h/beta) expanded: Delta h/beta - (grad h|hess h grad h)/beta^3.
    """
    grad, hess = torch.as_tensor(grad, dtype=torch.float64), torch.as_tensor(hess, dtype=torch.float64)
    b = beta(grad)
    lap = torch.diagonal(hess, dim1=0, dim2=1).sum(-1)
    hgh = torch.einsum("a...,ab...,b...->...", grad, hess, grad)
    return lap/b - hgh/b**3


def eval_G_kappa(h):
    (values, grid) = _interface(h)
    return ScalarField(g_kappa_pointwise(spectral_gradient(values, grid), spectral_hessian(values, grid)), grid)


def mean_curvature_graph(h):
    """
    div(grad h/sqrt(1 + |grad h|^2)) with spectral derivatives throughout.
    """
    (values, grid) = _interface(h)
    grad = spectral_gradient(values, grid)
    return ScalarField(spectral_divergence(grad/beta(grad), grid), grid)


def beta_lipschitz_gap(psi1, psi2, axis=None):
    """
    max of |1/beta(psi1) - 1/beta(psi2)| - |psi1 - psi2|; non-positive when
    the Lipschitz bound holds. `axis` names the vector axis, if any.
    """
    psi1, psi2 = torch.as_tensor(psi1, dtype=torch.float64), torch.as_tensor(psi2, dtype=torch.float64)
    if axis is None:
        (n1, n2, d) = (psi1.abs(), psi2.abs(), (psi1 - psi2).abs())
    else:
        (n1, n2, d) = (psi1.norm(dim=axis), psi2.norm(dim=axis), (psi1 - psi2).norm(dim=axis))
    gap = (1/torch.sqrt(1 + n1**2) - 1/torch.sqrt(1 + n2**2)).abs() - d
    return float(gap.max())


def _side_constants(p, side):
    return (p.mu2, p.rho2) if side == "upper" else (p.mu1, p.rho1)


def eval_F(p, v, w, pi, h, dth):
    """
    Bulk nonlinearities of the transformed momentum equation.

    ## Args
    * `v` BulkField with n leading components, `w`, `pi` scalar BulkFields
    * `h`, `dth` interface ScalarFields (h is extended constantly in y)

    Returns `(F_v, F_w)` as BulkFields; mu and rho are taken per phase.
    """
    grid = _same_grid(v, w, pi)
    (hv, _) = _interface(h, grid)
    (dthv, _) = _interface(dth, grid)
    gh = spectral_gradient(hv, grid)
    lap = spectral_laplacian(hv, grid)
    gh2 = (gh**2).sum(0)
    (dyv, dyyv, dyw, dyyw, dypi) = (v.dy(), v.dy(2), w.dy(), w.dy(2), pi.dy())
    out = {"F_v": {}, "F_w": {}}
    for side in ("upper", "lower"):
        (mu, rho) = _side_constants(p, side)
        (V, W) = (getattr(v, side), getattr(w, side))
        (Vy, Vyy, Wy, Wyy, Py) = (getattr(f, side) for f in (dyv, dyyv, dyw, dyyw, dypi))
        gVy = spectral_gradient(Vy, grid)
        gWy = spectral_gradient(Wy, grid)
        gV = spectral_gradient(V, grid)
        gW = spectral_gradient(W, grid)
        # (gh|grad_x) acting on dy v and dy w
        gh_dx_Vy = (gh[:, None, None]*gVy).sum(0)
        gh_dx_Wy = (gh[:, None]*gWy).sum(0)
        v_dot_gh = (V*gh[:, None]).sum(0)
        F_v = (mu*(-2*gh_dx_Vy + gh2*Vyy - lap*Vy) + Py*gh[:, None]
            + rho*(-(V[:, None]*gV).sum(0) + v_dot_gh*Vy - W*Vy) + rho*dthv*Vy)
        F_w = (mu*(-2*gh_dx_Wy + gh2*Wyy - lap*Wy)
            + rho*(-(V*gW).sum(0) + v_dot_gh*Wy - W*Wy) + rho*dthv*Wy)
        out["F_v"][side] = F_v
        out["F_w"][side] = F_w
    return (BulkField(out["F_v"]["upper"], out["F_v"]["lower"], grid),
            BulkField(out["F_w"]["upper"], out["F_w"]["lower"], grid))


def eval_F_d(v, h, both=False):
    """
    F_d = (grad h|dy v). With `both`, also returns dy (grad h|v); h does not
    depend on y, so the two agree up to roundoff.
    """
    grid = v.grid
    (hv, _) = _interface(h, grid)
    gh = spectral_gradient(hv, grid)
    first = v.dy().map(lambda f, side: (gh[:, None]*f).sum(0))
    if not both:
        return first
    second = v.map(lambda f, side: (gh[:, None]*f).sum(0)).dy()
    return (first, second)


def stress_jumps(p, v, w):
    """
    Interface jumps [[mu d_i v_k]], [[mu dy v]], [[mu d_i w]] and [[mu dy w]].
    """
    grid = _same_grid(v, w)
    jump = lambda f: p.mu2*f[0] - p.mu1*f[1]
    (vu, vl) = v.traces()
    (wu, wl) = w.traces()
    return {
        "dx_v": jump((spectral_gradient(vu, grid), spectral_gradient(vl, grid))),
        "dy_v": jump(v.dy().traces()),
        "dx_w": jump((spectral_gradient(wu, grid), spectral_gradient(wl, grid))),
        "dy_w": jump(w.dy().traces())}


def eval_G(p, v, w, q, h):
    """
    Interface nonlinearities (G_v, G_w) of the transformed stress balance.
    `q` is the pressure jump [[pi]] on the interface.
    """
    grid = _same_grid(v, w)
    (hv, _) = _interface(h, grid)
    (qv, _) = _interface(q, grid)
    gh = spectral_gradient(hv, grid)
    hess = spectral_hessian(hv, grid)
    lap = spectral_laplacian(hv, grid)
    gh2 = (gh**2).sum(0)
    g_kappa = g_kappa_pointwise(gh, hess)
    J = stress_jumps(p, v, w)
    # dx_v[a, k] = [[mu d_a v_k]]; symmetric gradient contracted with grad h
    sym = J["dx_v"] + J["dx_v"].transpose(0, 1)
    G_v = (-(sym*gh[:, None]).sum(0) + gh2*J["dy_v"] + gh*(J["dy_v"]*gh).sum(0)
        - J["dy_w"]*gh + (qv - p.sigma*(lap - g_kappa))*gh)
    G_w = -(gh*J["dx_w"]).sum(0) - (gh*J["dy_v"]).sum(0) + gh2*J["dy_w"] - p.sigma*g_kappa
    return (ScalarField(G_v, grid), ScalarField(G_w, grid))


def eval_H_b(b, v_trace, h):
    """
    (b - v|grad h) with v already traced onto the interface.
    """
    b, v_trace = (f.values if isinstance(f, ScalarField) else torch.as_tensor(f, dtype=torch.float64) for f in (b, v_trace))
    (hv, grid) = _interface(h, h.grid if isinstance(h, ScalarField) else None)
    if b.shape != v_trace.shape or b.shape[0] != grid.n:
        raise GridMismatch(f"eval_H_b: b {tuple(b.shape)} and v {tuple(v_trace.shape)} must both be (n, *grid)")
    grid.check(b, where="eval_H_b")
    return ScalarField(((b - v_trace)*spectral_gradient(hv, grid)).sum(0), grid)


def eval_all(p, v, w, pi, q, h, dth):
    (F_v, F_w) = eval_F(p, v, w, pi, h, dth)
    (G_v, G_w) = eval_G(p, v, w, q, h)
    return KernelOutput({
        "F_v": F_v.stacked(),
        "F_w": F_w.stacked(),
        "F_d": eval_F_d(v, h).stacked(),
        "G_v": G_v.values,
        "G_w": G_w.values,
        "G_kappa": eval_G_kappa(h).values})


def curvature_defect(h):
    """
    max |div(grad h/beta) - (Delta h - G_kappa(h))|; vanishes identically in
    exact arithmetic.
    """
    (values, grid) = _interface(h)
    field = ScalarField(values, grid)
    linear = spectral_laplacian(values, grid) - eval_G_kappa(field).values
    return float((mean_curvature_graph(field).values - linear).abs().max())
