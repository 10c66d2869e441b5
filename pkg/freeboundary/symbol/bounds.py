import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, asdict
import numpy as np
from ..core.errors import EmptyGrid, PreconditionViolated
from ..core.geometry import Sector, StripDomain
from .response import k_of_z
from .extended import assemble_s_tilde

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepGrid:
    """
    Sector sampling of (lambda, tau, zeta):
    lambda in Sigma_{pi/2+eta} with lambda0 <= |lambda| <= lambda_max,
    tau in Sigma_eta with tau_min <= |tau| <= tau_max,
    zeta in U_{beta,delta}.
    """
    lambda0: float = 1.0
    eta: float = 0.1
    beta: float = 1.0
    delta: float = 0.5
    lambda_max: float = 1e4
    tau_min: float = 1e-3
    tau_max: float = 1e3
    per_decade: int = 24
    n_rays: int = 9
    n_zeta: int = 5

    def __post_init__(self):
        assert 0 < self.eta < math.pi/6, f"SweepGrid: eta = {self.eta} must lie in (0, pi/6)"

    @staticmethod
    def _moduli(lo, hi, per_decade):
        if hi <= lo:
            return np.array([lo])
        n = int(round(per_decade*math.log10(hi/lo))) + 1
        return np.logspace(math.log10(lo), math.log10(hi), n)

    def lambdas(self):
        rays = Sector(math.pi/2 + self.eta).rays(self.n_rays)
        r = self._moduli(self.lambda0, self.lambda_max, self.per_decade)
        return (r[:, None]*np.exp(1j*rays[None, :])).ravel()

    def taus(self):
        rays = Sector(self.eta).rays(self.n_rays)
        r = self._moduli(self.tau_min, self.tau_max, self.per_decade)
        return (r[:, None]*np.exp(1j*rays[None, :])).ravel()

    def zetas(self):
        return StripDomain(self.beta, self.delta).points(self.n_zeta, self.n_zeta)


@dataclass
class BoundsReport:
    min_ratio: float
    max_ratio: float
    argmin: dict
    argmax: dict
    grid_spec: dict
    passed: bool
    n_points: int
    k_sup: float
    upper_constant: float
    upper_violations: int

    def to_dict(self):
        return {
            "min_ratio": self.min_ratio,
            "max_ratio": self.max_ratio,
            "argmin": self.argmin,
            "argmax": self.argmax,
            "grid_spec": self.grid_spec,
            "pass": self.passed,
            "n_points": self.n_points,
            "k_sup": self.k_sup,
            "upper_constant": self.upper_constant,
            "upper_violations": self.upper_violations}


def _point(lam, tau, zeta):
    return {
        "lambda_re": float(lam.real), "lambda_im": float(lam.imag),
        "tau_re": float(tau.real), "tau_im": float(tau.imag),
        "zeta_re": float(zeta.real), "zeta_im": float(zeta.imag)}


def _check_points(lams, taus, zetas, lambda0, eta, beta, delta):
    lam_sector, tau_sector, strip = Sector(math.pi/2 + eta), Sector(eta), StripDomain(beta, delta)
    for lam in lams:
        if lam not in lam_sector or abs(lam) < lambda0*(1 - 1e-12):
            raise PreconditionViolated(f"verify_sandwich: lambda = {lam} outside Sigma_(pi/2+eta) or below lambda0")
    for tau in taus:
        if tau not in tau_sector:
            raise PreconditionViolated(f"verify_sandwich: tau = {tau} outside Sigma_eta")
    for zeta in zetas:
        if zeta not in strip:
            raise PreconditionViolated(f"verify_sandwich: zeta = {zeta} outside U_(beta,delta)")


def _k_chunk(p, lams, taus):
    z = lams[:, None]/taus[None, :]**2
    k = k_of_z(p, z)
    return (k, float(np.max(np.abs(k) + np.abs(z*k))))


def _ratio_chunk(p, lams, taus, zetas, k, C, rows):
    s = assemble_s_tilde(p, lams[:, None, None], taus[None, :, None], zetas[None, None, :], k[:, :, None])
    abs_s = np.abs(s)
    ratio = abs_s/(np.abs(lams)[:, None, None] + np.abs(taus)[None, :, None])
    bound = np.abs(lams)[:, None, None] + C*np.abs(taus)[None, :, None]
    i_min = np.unravel_index(np.argmin(ratio), ratio.shape)
    i_max = np.unravel_index(np.argmax(ratio), ratio.shape)
    out = {
        "min": (float(ratio[i_min]), i_min),
        "max": (float(ratio[i_max]), i_max),
        "violations": int(np.count_nonzero(abs_s > bound*(1 + 1e-12)))}
    if rows:
        shape = s.shape
        out["rows"] = {
            "lambda": np.broadcast_to(lams[:, None, None], shape).ravel(),
            "tau": np.broadcast_to(taus[None, :, None], shape).ravel(),
            "zeta": np.broadcast_to(zetas[None, None, :], shape).ravel(),
            "k": np.broadcast_to(k[:, :, None], shape).ravel(),
            "s": s.ravel(),
            "ratio": ratio.ravel()}
    return out


def verify_sandwich(p, grid=None, lambda0=None, eta=None, beta=None, delta=None, threads=1, rows=None):
    """
    Sweep |s~(lambda, tau, zeta)|/(|lambda| + |tau|) over a sector grid.

    ## Args
    * `grid` a `SweepGrid`, or a tuple `(lambdas, taus, zetas)` of explicit points.
    * `lambda0, eta, beta, delta` override the grid fields (explicit points
      are checked against them).
    * `threads` number of worker threads over lambda chunks.
    * `rows` optional callable receiving a dict of flat arrays per chunk
      (streamed CSV rows).

    Returns a `BoundsReport`; `passed` is min ratio > 0. The upper estimate
    |s~| <= |lambda| + C|tau| with C = sigma N + (beta + 2) + |[[rho]]| gamma_a N/lambda0
    is counted in `upper_violations`, N being the sup of |k| + |z k| over the grid.
    """
    if grid is None or isinstance(grid, SweepGrid):
        grid = grid or SweepGrid()
        overrides = {name: value for (name, value) in
            (("lambda0", lambda0), ("eta", eta), ("beta", beta), ("delta", delta)) if value is not None}
        spec = SweepGrid(**{**asdict(grid), **overrides})
        (lams, taus, zetas) = (spec.lambdas(), spec.taus(), spec.zetas())
        grid_spec = asdict(spec)
        (lambda0, beta) = (spec.lambda0, spec.beta)
    else:
        (lams, taus, zetas) = (np.atleast_1d(np.asarray(a, dtype=np.complex128)) for a in grid)
        if lambda0 is None or eta is None or beta is None or delta is None:
            raise PreconditionViolated("verify_sandwich: explicit points need lambda0, eta, beta and delta")
        if min(lams.size, taus.size, zetas.size) > 0:
            _check_points(lams, taus, zetas, lambda0, eta, beta, delta)
        grid_spec = {"lambda0": lambda0, "eta": eta, "beta": beta, "delta": delta,
            "explicit": [int(lams.size), int(taus.size), int(zetas.size)]}
    if min(lams.size, taus.size, zetas.size) == 0:
        raise EmptyGrid("verify_sandwich: empty grid")

    chunk = max(1, 4096 // max(taus.size, 1))
    chunks = [lams[i:i+chunk] for i in range(0, lams.size, chunk)]

    def run(work, items):
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                yield from pool.map(work, items)
        else:
            yield from map(work, items)

    # k does not depend on zeta; its sup fixes the upper constant before the ratio pass
    ks = []
    k_sup = 0.0
    for (k, sup) in run(lambda c: _k_chunk(p, c, taus), chunks):
        ks.append(k)
        k_sup = max(k_sup, sup)
    C = p.sigma*k_sup + (beta + 2) + abs(p.density_jump)*p.gamma_a*k_sup/lambda0

    best_min, best_max = (math.inf, None), (-math.inf, None)
    violations = 0
    work = lambda item: _ratio_chunk(p, item[0], taus, zetas, item[1], C, rows is not None)
    for (lam_chunk, r) in zip(chunks, run(work, list(zip(chunks, ks)))):
        if r["min"][0] < best_min[0]:
            (i, j, l) = r["min"][1]
            best_min = (r["min"][0], _point(lam_chunk[i], taus[j], zetas[l]))
        if r["max"][0] > best_max[0]:
            (i, j, l) = r["max"][1]
            best_max = (r["max"][0], _point(lam_chunk[i], taus[j], zetas[l]))
        violations += r["violations"]
        if rows is not None:
            rows(r["rows"])

    report = BoundsReport(
        min_ratio=best_min[0], max_ratio=best_max[0],
        argmin=best_min[1], argmax=best_max[1],
        grid_spec=grid_spec,
        passed=bool(best_min[0] > 0),
        n_points=int(lams.size*taus.size*zetas.size),
        k_sup=k_sup, upper_constant=C, upper_violations=violations)
    logger.info(f"verify_sandwich: {report.n_points} points, ratio in [{report.min_ratio:.6g}, {report.max_ratio:.6g}]")
    return report
