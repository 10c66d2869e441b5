import logging
import math
import numpy as np
import torch
from ..core.errors import ConfigError
from ..core.geometry import Sector
from ..symbol import k_of_z, branch_points, limit_anchors, SweepGrid, verify_sandwich
from ..dispersion import dispersion_curve, find_growth_rate, inviscid_growth_rate, critical_wavenumber, mode_response
from ..kernels import Grid, ScalarField, KERNELS, get_kernel, check_frechet, trigonometric_state, curvature_defect
from ..spaces import (SampledFunction, IntervalFunction, dilate, slobodeckij_seminorm, poisson_seminorm,
    riesz_seminorm, riesz_potential, hardy_ratio, hardy_uniformity, extend_c1, extend_c1_derivative, seam_mismatch,
    partition_of_unity)
from .artifacts import write_csv, write_json, output_dir

logger = logging.getLogger(__name__)

CURVATURE_TOL = 1e-8
RATE_TOL = 5e-3
INITIAL_TOL = 1e-4
STABLE_OVERSHOOT = 1e-3
HOMOGENEITY_TOL = 1e-3
ROUND_TRIP_TOL = 1e-12
BAND_LIMIT = 10.0
PARTITION_TOL = 1e-12


def _unstable(p):
    return p.density_jump > 0 and p.gamma_a > 0


def cmd_k_profile(config):
    """
    k and z k along rays of the sector |arg z| < theta, with the two limit
    anchors k(0) = 1/(2(mu1 + mu2)) and z k(z) -> 1/(rho1 + rho2).
    """
    (p, o) = (config.params, config.options)
    if o["rays"] < 1:
        raise ConfigError("k-profile: at least one ray required")
    if not 0 < o["theta"] < math.pi:
        raise ConfigError(f"k-profile: theta = {o['theta']} must lie in (0, pi)")
    if not 0 < o["z_min"] < o["z_max"]:
        raise ConfigError(f"k-profile: need 0 < z_min < z_max, got {o['z_min']}, {o['z_max']}")
    angles = Sector(o["theta"]).rays(o["rays"])
    count = int(round(o["per_decade"]*math.log10(o["z_max"]/o["z_min"]))) + 1
    moduli = np.logspace(math.log10(o["z_min"]), math.log10(o["z_max"]), count)
    z = moduli[None, :]*np.exp(1j*angles[:, None])
    k = k_of_z(p, z)
    zk = z*k
    rows = [(angles[i], moduli[j], k[i, j].real, k[i, j].imag, zk[i, j].real, zk[i, j].imag)
        for i in range(len(angles)) for j in range(len(moduli))]
    anchors = limit_anchors(p, small=o["z_min"], large=o["z_max"], angles=tuple(angles))
    checks = {"k0": anchors["k0"] <= o["k0_tol"], "zk_inf": anchors["zk_inf"] <= o["zk_inf_tol"]}
    passed = all(checks.values())
    out = output_dir(config)
    write_csv(out/"k-profile.csv", config, ["angle", "abs_z", "k_re", "k_im", "zk_re", "zk_im"], rows)
    write_json(out/"k-profile.json", config, {
        "anchors": anchors,
        "checks": checks,
        "sup_k_plus_zk": float(np.max(np.abs(k) + np.abs(zk))),
        "branch_points": branch_points(p),
        "pass": passed})
    logger.info(f"k-profile: {len(rows)} points, anchors {anchors}, pass={passed}")
    return passed


def _tau_grid(o):
    if o["tau_grid"] is not None:
        taus = [float(t) for t in o["tau_grid"]]
    else:
        if not 0 < o["tau_min"] < o["tau_max"] or o["n_tau"] < 1:
            raise ConfigError(f"dispersion: bad tau range [{o['tau_min']}, {o['tau_max']}] with {o['n_tau']} points")
        taus = np.geomspace(o["tau_min"], o["tau_max"], o["n_tau"]).tolist()
    if not taus:
        raise ConfigError("dispersion: empty tau grid")
    return taus


def dispersion_expectations(p, curve):
    """
    One zero below tau* and none above for an unstable stratification, none
    at all otherwise. A growth rate too small to be enclosed by the counting
    contour exempts its row.
    """
    failures = []
    for row in curve.rows:
        if _unstable(p) and row.tau < curve.tau_star:
            expected = 1 if row.lambda_star is not None else None
        else:
            expected = 0
        if expected is not None and row.zero_count != expected:
            failures.append({"tau": row.tau, "zero_count": row.zero_count, "expected": expected})
        if row.lambda_star is not None and not row.lambda_star > 0:
            failures.append({"tau": row.tau, "lambda_star": row.lambda_star, "expected": "positive"})
    return failures


def cmd_dispersion(config):
    (p, o) = (config.params, config.options)
    taus = _tau_grid(o)
    curve = dispersion_curve(p, taus, threads=config.threads, count_zeros=o["count_zeros"])
    failures = dispersion_expectations(p, curve) if o["count_zeros"] else []
    rows = [(r.tau, r.lambda_star, r.zero_count, inviscid_growth_rate(p, r.tau)) for r in curve.rows]
    out = output_dir(config)
    write_csv(out/"dispersion.csv", config, ["tau", "lambda_star", "zero_count", "inviscid_rate"], rows)
    write_json(out/"dispersion.json", config, {
        "tau_star": curve.tau_star,
        "n_rows": len(curve.rows),
        "unstable_rows": sum(r.lambda_star is not None for r in curve.rows),
        "failures": failures,
        "pass": not failures})
    return not failures


def default_lambda0(p, samples=64):
    """
    Twice the largest real growth rate on (0, tau*), or 1e-3 when the
    stratification is stable.
    """
    if not _unstable(p):
        return 1e-3
    tau_star = critical_wavenumber(p)
    rates = [find_growth_rate(p, t) for t in np.geomspace(1e-3*tau_star, tau_star, samples + 1)[:-1]]
    rates = [r for r in rates if r is not None]
    return max(2*max(rates), 1e-3) if rates else 1e-3


def cmd_verify_bounds(config):
    (p, o) = (config.params, config.options)
    lambda0 = o["lambda0"] if o["lambda0"] is not None else default_lambda0(p)
    if not 0 < o["eta"] < math.pi/6:
        raise ConfigError(f"verify-bounds: eta = {o['eta']} must lie in (0, pi/6)")
    grid = SweepGrid(
        lambda0=lambda0, eta=o["eta"], beta=o["beta"], delta=o["delta"],
        lambda_max=o["lambda_max"], tau_min=o["tau_min"], tau_max=o["tau_max"],
        per_decade=o["per_decade"], n_rays=o["n_rays"], n_zeta=o["n_zeta"])
    points = []

    def collect(chunk):
        for (lam, tau, zeta, k, s, ratio) in zip(chunk["lambda"], chunk["tau"], chunk["zeta"], chunk["k"], chunk["s"], chunk["ratio"]):
            points.append((lam.real, lam.imag, tau.real, tau.imag, zeta.real, zeta.imag, k.real, k.imag, s.real, s.imag, ratio))

    report = verify_sandwich(p, grid, threads=config.threads, rows=collect if o["points"] else None)
    passed = report.passed and report.upper_violations == 0
    out = output_dir(config)
    if o["points"]:
        header = ["lambda_re", "lambda_im", "tau_re", "tau_im", "zeta_re", "zeta_im", "k_re", "k_im", "s_re", "s_im", "ratio"]
        write_csv(out/"verify-bounds.csv", config, header, points)
    body = report.to_dict()
    body["lambda0"] = lambda0
    body["pass"] = passed
    write_json(out/"verify-bounds.json", config, body)
    return passed


def cmd_mode_response(config):
    (p, o) = (config.params, config.options)
    tau = o["tau"]
    if not tau > 0:
        raise ConfigError(f"mode-response: tau = {tau} must be positive")
    lam = find_growth_rate(p, tau) if _unstable(p) else None
    if o["times"] is not None:
        times = np.asarray(o["times"], dtype=float)
    else:
        t_end = o["t_end"] if o["t_end"] is not None else (20/lam if lam else 20.0)
        times = np.linspace(t_end/o["n_times"], t_end, o["n_times"])
    response = mode_response(p, tau, times, nodes=o["nodes"])
    initial = mode_response(p, tau, [1e-6*times[0]], nodes=o["nodes"], check_radius=False).values[0]
    checks = {"initial": abs(initial - 1) <= INITIAL_TOL}
    if lam is not None:
        checks["rate"] = response.fitted_rate is not None and abs(response.fitted_rate - lam) <= RATE_TOL*lam
    else:
        magnitude = np.abs(response.values)
        checks["bounded"] = bool(np.max(magnitude) <= 1 + STABLE_OVERSHOOT)
        checks["decays"] = bool(magnitude[-1] < magnitude[0])
    passed = all(checks.values())
    out = output_dir(config)
    write_csv(out/"mode-response.csv", config, ["t", "h_re", "h_im"], response.csv_rows())
    body = response.header()
    body.update({"initial_value": {"re": initial.real, "im": initial.imag}, "checks": checks, "pass": passed})
    write_json(out/"mode-response.json", config, body)
    return passed


def curvature_cases(m):
    """
    The curvature identity test set: two 1D profiles and a 2D analog.
    """
    (g1, g2) = (Grid(n=1, m=m), Grid(n=2, m=m))
    (x,) = g1.coordinates()
    (X, Y) = g2.coordinates()
    return {
        "0.3 sin x": ScalarField(0.3*torch.sin(x), g1),
        "0.2 sin x + 0.1 cos 2x": ScalarField(0.2*torch.sin(x) + 0.1*torch.cos(2*x), g1),
        "0.2 sin x cos y + 0.1 cos 2y": ScalarField(0.2*torch.sin(X)*torch.cos(Y) + 0.1*torch.cos(2*Y), g2)}


def cmd_kernel_check(config):
    (p, o) = (config.params, config.options)
    names = o["kernels"] if o["kernels"] is not None else list(KERNELS)
    for name in names:
        if name not in KERNELS:
            raise ConfigError(f"kernel-check: unrecognized kernel {name!r}, expected some of {sorted(KERNELS)}")
    curvature = [{"h": label, "max_error": curvature_defect(h), "tolerance": CURVATURE_TOL}
        for (label, h) in curvature_cases(o["m"]).items()]
    for c in curvature:
        c["pass"] = c["max_error"] <= CURVATURE_TOL
    grid = Grid(n=o["n"], m=o["frechet_m"], levels=o["levels"], dy=o["dy"])
    base = trigonometric_state(p, grid, config.seed)
    direction = trigonometric_state(p, grid, config.seed + 1)
    rest = base.zeros_like()
    checks = []
    for name in names:
        result = check_frechet(name, base, direction, with_jvp=o["jvp"]).to_dict()
        result["zero_state"] = float(get_kernel(name, p)(rest).abs().max()) == 0.0
        result["pass"] = result["pass"] and result["zero_state"]
        checks.append(result)
    passed = all(c["pass"] for c in curvature) and all(c["pass"] for c in checks)
    out = output_dir(config)
    header = ["kernel", "max_error", "error_eps1", "error_eps2", "ratio", "exact", "jvp_error", "zero_state", "pass"]
    rows = [(c["kernel"], c["max_error"], c["errors"][0], c["errors"][1], c["ratio"], c["exact"], c["jvp_error"],
        c["zero_state"], c["pass"]) for c in checks]
    write_csv(out/"kernel-check.csv", config, header, rows)
    write_json(out/"kernel-check.json", config, {"curvature": curvature, "frechet": checks, "pass": passed})
    return passed


def seeded_bumps(gen, count, box, m):
    """
    Sums of two Gaussians with random amplitude, center and width.
    """
    bumps = []
    for _ in range(count):
        (a, c, w) = (gen.uniform(0.5, 1.5, 2), gen.uniform(-2, 2, 2), gen.uniform(0.5, 1.5, 2))
        fn = lambda X, a=a, c=c, w=w: sum(a[i]*np.exp(-((X[0] - c[i])/w[i])**2) for i in range(2))
        bumps.append(SampledFunction.from_function(fn, -box, box, m))
    return bumps


def norms_seminorms(o, gen, threads):
    (s, p, m, box) = (o["s"], o["p"], o["m"], o["box"])
    gauss = SampledFunction.from_function(lambda X: np.exp(-X[0]**2), -box, box, m)
    slob = slobodeckij_seminorm(gauss, s, p, threads)
    poisson = poisson_seminorm(gauss, s, p)
    section = {"gaussian": {"slobodeckij": slob.to_dict(), "poisson": poisson.to_dict()}, "checks": {}}
    if p == 2:
        fourier = riesz_seminorm(gauss, s)
        section["gaussian"]["fourier"] = fourier.to_dict()
        section["gaussian"]["slobodeckij_over_fourier"] = slob.value/fourier.value
    homogeneity = {}
    for c in (0.5, 2.0):
        expected = c**(s - 1/p)
        for (name, fn) in (("slobodeckij", lambda g: slobodeckij_seminorm(g, s, p, threads)), ("poisson", lambda g: poisson_seminorm(g, s, p))):
            base = slob if name == "slobodeckij" else poisson
            measured = fn(dilate(gauss, c)).value/base.value
            homogeneity[f"{name}@{c}"] = abs(measured/expected - 1)
    section["homogeneity"] = homogeneity
    section["checks"]["homogeneity"] = max(homogeneity.values()) <= HOMOGENEITY_TOL
    ratios = []
    for g in seeded_bumps(gen, o["bumps"], box, m):
        ratios.append(poisson_seminorm(g, s, p).value/slobodeckij_seminorm(g, s, p, threads).value)
    band = max(ratios)/min(ratios)
    section["equivalence"] = {"ratios": ratios, "min": min(ratios), "max": max(ratios), "band": band}
    section["checks"]["equivalence"] = band <= BAND_LIMIT
    return (section, ratios)


def norms_riesz(o, gen):
    m = o["m"]
    x = 2*np.pi*np.arange(m)/m
    coefficients = gen.standard_normal((2, 4))
    values = sum(coefficients[0, j]*np.cos((j + 1)*x) + coefficients[1, j]*np.sin((j + 1)*x) for j in range(4))
    g = SampledFunction(values, 2*np.pi/m, 0.0, periodic=True)
    s = o["s"]
    back = riesz_potential(riesz_potential(g, s), -s)
    round_trip = float(np.max(np.abs(back.values - values))/np.max(np.abs(values)))
    mode = riesz_potential(SampledFunction(np.cos(3*x), 2*np.pi/m, 0.0, periodic=True), s)
    eigen = float(np.max(np.abs(mode.values - 3**s*np.cos(3*x))))
    return {"round_trip": round_trip, "cos3x": eigen, "checks": {"round_trip": round_trip <= ROUND_TRIP_TOL}}


def norms_hardy(o):
    m = o["hardy_m"]
    uniformity = hardy_uniformity(m=m)
    single = {f"t^{k}": hardy_ratio(IntervalFunction.from_function(lambda t: t**k, 1.0, m), 0.5, 2.0) for k in (1, 2)}
    return {"ratios": single, "uniformity": uniformity, "checks": {"uniformity": uniformity["pass"]}}


def norms_extension(o, gen, count=5):
    m = o["hardy_m"]
    worst = {"sup": 0.0, "derivative": 0.0, "seam_value": 0.0, "seam_slope": 0.0}
    exact = True
    for _ in range(count):
        c = gen.uniform(-1, 1, 3)
        h = IntervalFunction.from_function(lambda t: t**2*(c[0] + c[1]*t + c[2]*t**2), 1.0, m)
        dh = IntervalFunction.from_function(lambda t: 2*c[0]*t + 3*c[1]*t**2 + 4*c[2]*t**3, 1.0, m)
        Eh = extend_c1(h)
        dEh = extend_c1_derivative(dh)
        exact = exact and np.array_equal(Eh.values[:m + 1], h.values)
        worst["sup"] = max(worst["sup"], np.max(np.abs(Eh.values))/np.max(np.abs(h.values)))
        worst["derivative"] = max(worst["derivative"], np.max(np.abs(dEh.values))/np.max(np.abs(dh.values)))
        (value, slope) = seam_mismatch(h)
        worst["seam_value"] = max(worst["seam_value"], value)
        worst["seam_slope"] = max(worst["seam_slope"], slope)
    checks = {
        "exact_on_interval": bool(exact),
        "sup_bound": worst["sup"] <= 5,
        "derivative_bound": worst["derivative"] <= 7,
        "seam_value": worst["seam_value"] <= 1e-10,
        "seam_slope": worst["seam_slope"] <= 1e-8}
    return {"worst": worst, "checks": checks}


def norms_partition(o):
    epsilon = o["epsilon"]
    result = {}
    for n in (1, 2):
        pou = partition_of_unity(epsilon, (-epsilon, epsilon), n=n, m=33)
        result[f"n={n}"] = {"cubes": len(pou), "deviation": pou.deviation()}
    deviation = max(r["deviation"] for r in result.values())
    result["checks"] = {"sum_of_squares": deviation <= PARTITION_TOL}
    return result


def cmd_norms(config):
    o = config.options
    gen = np.random.default_rng(config.seed)
    (seminorms, ratios) = norms_seminorms(o, gen, config.threads)
    sections = {
        "seminorms": seminorms,
        "riesz": norms_riesz(o, gen),
        "hardy": norms_hardy(o),
        "extension": norms_extension(o, gen),
        "partition": norms_partition(o)}
    passed = all(all(section["checks"].values()) for section in sections.values())
    out = output_dir(config)
    write_csv(out/"norms.csv", config, ["bump", "poisson_over_slobodeckij"], list(enumerate(ratios)))
    write_json(out/"norms.json", config, {**sections, "pass": passed})
    return passed


COMMANDS = {
    "k-profile": cmd_k_profile,
    "dispersion": cmd_dispersion,
    "verify-bounds": cmd_verify_bounds,
    "mode-response": cmd_mode_response,
    "kernel-check": cmd_kernel_check,
    "norms": cmd_norms}
