import logging
import math
from concurrent.futures import ThreadPoolExecutor
import numpy as np
from scipy.integrate import simpson
from scipy.special import zetac
from ..core.errors import OrderOutOfRange, PreconditionViolated, TruncationNotConverged, ZeroDenominator
from .sampled import SampledFunction, IntervalFunction, SeminormReport

logger = logging.getLogger(__name__)

NODES_PER_DECADE = 32
PADDING = 4
TRUNCATION_TOL = 1e-4
# pair evaluations per chunk of the double sum
CHUNK = 1 << 20


def _check_order(s, p, where):
    if not 0 < s < 1:
        raise OrderOutOfRange(f"{where}: s = {s} must lie in (0, 1)")
    if not p >= 1:
        raise PreconditionViolated(f"{where}: p = {p} must be at least 1")


def _pair_sum(x, v, s, p, n, period=None, threads=1):
    """
    sum over i != j of |v_i - v_j|^p / |x_i - x_j|^(n + s p), chunked over i.
    """
    N = v.size
    rows = max(1, CHUNK//N)

    def chunk(start):
        d = x[start:start + rows, None, :] - x[None, :, :]
        if period is not None:
            d = d - period*np.round(d/period)
        r = np.sqrt((d**2).sum(-1))
        off = r > 0
        terms = np.abs(v[start:start + rows, None] - v[None, :])**p
        return float(np.sum(terms[off]/r[off]**(n + s*p)))

    starts = range(0, N, rows)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return math.fsum(pool.map(chunk, starts))
    return math.fsum(chunk(i) for i in starts)


def exterior_weight(points, box, sp):
    """
    E(x) = integral over y outside the cube box^n of |x - y|^(-n - sp).

    In 1D this is a sum over the two half-lines. In 2D, polar coordinates
    about x give the integral over theta of R(theta)^(-sp)/sp, with R the
    distance to the boundary along theta; each of the four sides subtends one
    angular sector, integrated by Gauss-Legendre.
    """
    (lo, hi) = box
    points = np.atleast_2d(points)
    if points.shape[1] == 1:
        x = points[:, 0]
        return ((x - lo)**(-sp) + (hi - x)**(-sp))/sp
    (x, y) = (points[:, 0], points[:, 1])
    corner = lambda cx, cy: np.arctan2(cy - y, cx - x)
    rb = corner(hi, lo)
    rt = corner(hi, hi)
    lt = corner(lo, hi)
    lb = corner(lo, lo) + 2*np.pi
    sides = [
        (rb, rt, 0.0, hi - x),
        (rt, lt, np.pi/2, hi - y),
        (lt, lb, np.pi, x - lo),
        (lb, rb + 2*np.pi, 1.5*np.pi, y - lo)]
    (nodes, weights) = np.polynomial.legendre.leggauss(16)
    total = np.zeros_like(x)
    for (a, b, normal, dist) in sides:
        theta = 0.5*(b - a)[:, None]*(nodes[None, :] + 1) + a[:, None]
        integrand = (np.cos(theta - normal)/dist[:, None])**sp
        total += 0.5*(b - a)*(integrand*weights).sum(-1)
    return total/sp


def diagonal_correction(g, s, p):
    """
    Leading error of the 1D lattice sum with the diagonal dropped. For fixed x
    the pair integrand behaves like |g'(x)|^p |d|^(p-1-sp) near d = 0, and the
    generalized Euler-Maclaurin expansion of such a sum over d = jh, j != 0,
    misses -2 zeta(sp+1-p) h^(p-sp) |g'(x)|^p.
    """
    h = g.spacing
    size = g.m if g.periodic else PADDING*g.m
    xi = 2*np.pi*np.fft.fftfreq(size, d=h)
    if size % 2 == 0:
        xi[size//2] = 0.0
    dg = np.fft.ifft(1j*xi*np.fft.fft(g.values, n=size))[:g.m]
    zeta = zetac(s*p + 1 - p) + 1.0
    return -2*zeta*h**(p - s*p)*h*float(np.sum(np.abs(dg)**p))


def slobodeckij_seminorm(g, s, p, threads=1):
    """
    (double integral of |g(x) - g(y)|^p / |x - y|^(n + s p))^(1/p).

    Tensor-grid quadrature with the diagonal cell dropped; in 1D the missing
    diagonal is restored by `diagonal_correction`. Periodic samples use the
    torus distance; otherwise g vanishes outside its box and the exterior
    pairs are added through `exterior_weight`.
    """
    _check_order(s, p, "slobodeckij_seminorm")
    (n, h) = (g.n, g.spacing)
    x = g.coordinates().reshape(n, -1).T
    v = g.values.reshape(-1)
    interior = h**(2*n)*_pair_sum(x, v, s, p, n, g.length if g.periodic else None, threads)
    correction = diagonal_correction(g, s, p) if n == 1 else 0.0
    exterior = 0.0
    if not g.periodic:
        exterior = 2*h**n*float(np.sum(np.abs(v)**p*exterior_weight(x, g.box(), s*p)))
    value = max(interior + correction + exterior, 0.0)**(1/p)
    logger.debug(f"slobodeckij_seminorm: n = {n}, m = {g.m}, s = {s}, p = {p}, value {value:.12g}")
    return SeminormReport(value, s, p, "double-integral", g.grid_spec(),
        {"diagonal": "corrected" if n == 1 else "dropped", "interior": interior,
            "diagonal_correction": correction, "exterior": exterior})


def _frequencies(m, h, n):
    xi = 2*np.pi*np.fft.fftfreq(m, d=h)
    return np.sqrt(sum(k**2 for k in np.meshgrid(*([xi]*n), indexing="ij")))


def _log_trapezoid(f, log_t):
    return float(np.sum(0.5*(f[1:] + f[:-1])*np.diff(log_t)))


def poisson_seminorm(g, s, p):
    """
    (integral over t > 0 of t^((1-s)p) ||d/dt P(t) g||_p^p dt/t)^(1/p).

    P(t) is the Poisson semigroup, the Fourier multiplier exp(-t|xi|); the
    t-derivative multiplies by -|xi|. Non-periodic samples are zero-padded by
    a factor 4 first. Nodes are log-spaced with 32 per decade over
    [h/100, 100 L], and the piece below h/100 is added from the t -> 0 limit
    of the integrand. The range is then widened by at least a factor 2 at
    both ends; a relative change above 1e-4 raises TruncationNotConverged.
    """
    _check_order(s, p, "poisson_seminorm")
    (n, h) = (g.n, g.spacing)
    size = g.m if g.periodic else PADDING*g.m
    G = np.fft.fftn(g.values, s=(size,)*n)
    xi = _frequencies(size, h, n)
    a = (1 - s)*p

    def norm_p(t):
        f = np.fft.ifftn(-xi*np.exp(-t*xi)*G)
        return h**n*float(np.sum(np.abs(f)**p))

    step = 1/NODES_PER_DECADE
    (lo, hi) = (math.log10(h/100), math.log10(100*g.length))
    count = int(math.ceil((hi - lo)/step))
    extra = int(math.ceil(math.log10(2)/step))
    log10_t = lo + step*np.arange(-extra, count + extra + 1)
    t = 10.0**log10_t
    integrand = t**a*np.array([norm_p(ti) for ti in t])
    limit = norm_p(0.0)
    log_t = np.log(t)

    def total(i, j):
        # t^a ||...||^p -> t^a * limit below t[i]
        return _log_trapezoid(integrand[i:j], log_t[i:j]) + limit*t[i]**a/a

    inner = total(extra, extra + count + 1)
    outer = total(0, len(t))
    change = abs(outer - inner)/max(abs(outer), np.finfo(float).tiny)
    truncation = {
        "t_min": float(t[extra]), "t_max": float(t[extra + count]),
        "nodes_per_decade": NODES_PER_DECADE, "padding": 1 if g.periodic else PADDING,
        "lower_tail": limit*t[extra]**a/a, "upper_integrand": float(integrand[extra + count]),
        "doubling_change": change}
    if inner > 0 and change > TRUNCATION_TOL:
        raise TruncationNotConverged(f"poisson_seminorm: widening the t-range changed the value by {change:.3e}")
    value = max(inner, 0.0)**(1/p)
    logger.debug(f"poisson_seminorm: n = {n}, m = {g.m}, s = {s}, p = {p}, value {value:.12g}, doubling change {change:.2e}")
    return SeminormReport(value, s, p, "poisson", g.grid_spec(), truncation)


def riesz_seminorm(g, s):
    """
    (integral of |xi|^(2s) |g-hat(xi)|^2 d xi)^(1/2) = ||I^s g||_2, with the
    unitary Fourier transform approximated on the zero-padded grid. This is
    the p = 2 oracle for the double-integral seminorm, which equals it up to
    a constant depending on n and s (sqrt(2 pi) for n = 1, s = 1/2).
    """
    if not 0 < s < 1:
        raise OrderOutOfRange(f"riesz_seminorm: s = {s} must lie in (0, 1)")
    (n, h) = (g.n, g.spacing)
    size = g.m if g.periodic else PADDING*g.m
    G = np.fft.fftn(g.values, s=(size,)*n)*(h/math.sqrt(2*np.pi))**n
    xi = _frequencies(size, h, n)
    dxi = (2*np.pi/(size*h))**n
    value = math.sqrt(float(np.sum(xi**(2*s)*np.abs(G)**2))*dxi)
    return SeminormReport(value, s, 2.0, "riesz", g.grid_spec(), {"padding": size//g.m})


def riesz_potential(g, s):
    """
    F^-1(|xi|^s F g) on a periodic grid. For s < 0 the xi = 0 mode is set to
    zero, so the result is the potential of g minus its mean.
    """
    if not g.periodic:
        raise PreconditionViolated("riesz_potential: needs a periodic grid")
    xi = _frequencies(g.m, g.spacing, g.n)
    if s == 0:
        multiplier = np.ones_like(xi)
    else:
        multiplier = np.zeros_like(xi)
        multiplier[xi > 0] = xi[xi > 0]**s
    out = np.fft.ifftn(multiplier*np.fft.fftn(g.values))
    if not np.iscomplexobj(g.values):
        out = out.real
    return SampledFunction(out, g.spacing, g.origin, True)


def interval_lp_norm(values, h, p):
    return simpson(np.abs(values)**p, dx=h)**(1/p)


def interval_seminorm(g, r, p):
    """
    Slobodeckij seminorm over [0, a] x [0, a] by the trapezoid tensor rule,
    diagonal dropped.
    """
    t = g.nodes()
    w = np.full(t.size, g.spacing)
    w[[0, -1]] *= 0.5
    d = np.abs(t[:, None] - t[None, :])
    off = d > 0
    terms = (w[:, None]*w[None, :]*np.abs(g.values[:, None] - g.values[None, :])**p)[off]
    return float(np.sum(terms/d[off]**(1 + r*p)))**(1/p)


def hardy_ratio(g, r, p):
    """
    ||g||_{W_p^r(0, a)} / ||g||_{H_p^1(0, a)} for g with g(0) = 0, where
    W = L_p + Slobodeckij seminorm and H = L_p of g plus L_p of g'.
    """
    if not 0 < r < 1:
        raise OrderOutOfRange(f"hardy_ratio: r = {r} must lie in (0, 1)")
    if not p >= 1:
        raise PreconditionViolated(f"hardy_ratio: p = {p} must be at least 1")
    if not isinstance(g, IntervalFunction):
        raise PreconditionViolated("hardy_ratio: g must be sampled on [0, a]")
    if abs(g.values[0]) > 1e-10:
        raise PreconditionViolated(f"hardy_ratio: g(0) = {g.values[0]:.3e} must vanish")
    h = g.spacing
    lp = interval_lp_norm(g.values, h, p)
    dg = np.gradient(g.values, h, edge_order=2)
    denominator = lp + interval_lp_norm(dg, h, p)
    if denominator == 0:
        raise ZeroDenominator("hardy_ratio: ||g||_{H_p^1} vanishes")
    return (lp + interval_seminorm(g, r, p))/denominator


def hardy_uniformity(r=0.5, p=2.0, lengths=(0.25, 0.5, 1.0), powers=(1, 2, 3, 4, 5), m=256):
    """
    Family maximum of hardy_ratio over g(t) = t^k for each interval length.
    Passes when no shorter interval exceeds the longest one's maximum by
    more than 10%.
    """
    family_max = {}
    for a in sorted(lengths):
        ratios = [hardy_ratio(IntervalFunction.from_function(lambda t: t**k, a, m), r, p) for k in powers]
        family_max[a] = max(ratios)
        logger.debug(f"hardy_uniformity: a = {a}, ratios {ratios}")
    a0 = max(family_max)
    passed = max(family_max.values()) <= 1.1*family_max[a0]
    return {"r": r, "p": p, "family_max": family_max, "a0": a0, "pass": passed}
