"""End-to-end acceptance checks, shared by the test suite and the CLI.

Each numbered check evaluates one acceptance criterion at its stated
tolerance and reports expected value, observed value and verdict. Checks
are honest: where a quoted reference figure is not reproduced by the
mathematics, the check fails and says what was found instead.

The module also houses the independent oracles used by those checks: a
Crank-Nicolson solver for the 1D absorbing-boundary density, a radial
finite-difference solver for the driftless sphere exit time, and direct
quadrature of survival curves for the mean/survival identity.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field as dataclass_field

import numpy as np
from scipy.integrate import quad, simpson
from scipy.linalg import solve_banded

from . import analytic, field, mc
from .params import (
    AtomModel,
    DEFAULT_SEED,
    DetectorParams,
    SeriesControl,
    params_for_intensity,
)


# ---------------------------------------------------------------------------
# independent oracles

def pde_survival_1d(t_target: float, drift: float, params: DetectorParams,
                    nx: int = 4001, dt_hint: float = 2.5e-4) -> float:
    """Survival at t_target from a Crank-Nicolson solve of the density
    equation df/dt = (sigma^2/2) f'' - drift f' with absorbing ends +-e_m.

    The delta initial condition is replaced by the exact free Gaussian at a
    small warm-up time t0 = e_m^2/(32 sigma^2); the march then uses an
    integer number of steps landing exactly on t_target.
    """
    a = params.e_m
    diff = 0.5 * params.sigma ** 2
    t0 = a * a / (32.0 * params.sigma ** 2)
    if t_target <= 2.0 * t0:
        raise ValueError(f"t_target must exceed the warm-up time {t0:g}")
    x = np.linspace(-a, a, nx)
    dx = x[1] - x[0]
    var0 = params.sigma ** 2 * t0
    f = np.exp(-(x - drift * t0) ** 2 / (2.0 * var0)) / math.sqrt(2.0 * math.pi * var0)
    f[0] = f[-1] = 0.0

    nsteps = max(64, int(math.ceil((t_target - t0) / dt_hint)))
    dt = (t_target - t0) / nsteps
    al = diff * dt / (2.0 * dx * dx)
    be = drift * dt / (4.0 * dx)
    m = nx - 2
    ab = np.empty((3, m))
    ab[0, :] = -al + be
    ab[1, :] = 1.0 + 2.0 * al
    ab[2, :] = -al - be
    for _ in range(nsteps):
        mid = f[1:-1]
        rhs = mid + al * (f[2:] - 2.0 * mid + f[:-2]) - be * (f[2:] - f[:-2])
        f[1:-1] = solve_banded((1, 1), ab, rhs)
    return float(simpson(f, x=x))


def radial_mean_exit_time(e_m: float, sigma: float, nr: int = 4001) -> float:
    """Driftless mean exit time from the centered sphere of radius e_m by a
    finite-difference solve of (sigma^2/2)(u'' + 2u'/r) = -1, u(e_m) = 0,
    u'(0) = 0. Returns u(0)."""
    diff = 0.5 * sigma * sigma
    dr = e_m / (nr - 1)
    m = nr - 1
    ab = np.zeros((3, m))
    rhs = np.full(m, -1.0)
    # r = 0: the radial Laplacian degenerates to 3 u''(0) with symmetric ghost
    ab[1, 0] = -6.0 * diff / dr ** 2
    ab[0, 1] = 6.0 * diff / dr ** 2
    for j in range(1, m):
        r = j * dr
        c_lap = diff / dr ** 2
        c_drv = diff / (r * dr)
        ab[2, j - 1] = c_lap - c_drv
        ab[1, j] = -2.0 * c_lap
        if j + 1 < m:
            ab[0, j + 1] = c_lap + c_drv
    u = solve_banded((1, 1), ab, rhs)
    return float(u[0])


def mean_fpt_quadrature(params: DetectorParams, ctrl: SeriesControl | None,
                        dimension: int) -> float:
    """Mean first-passage time as the integral of the survival curve."""
    if dimension == 1:
        def surv(t: float) -> float:
            return analytic.axis_survival_image(t, params.i_s, params, ctrl)
    elif dimension == 3:
        def surv(t: float) -> float:
            return analytic.survival_3d(t, params, ctrl).survival
    else:
        raise ValueError(f"dimension must be 1 or 3, got {dimension}")
    hi = params.time_scale
    while surv(hi) > 1e-13:
        hi *= 2.0
    val, _ = quad(surv, 0.0, hi, epsabs=1e-12, epsrel=1e-8, limit=300)
    return float(val)


# ---------------------------------------------------------------------------
# report plumbing

@dataclass
class CheckResult:
    cid: int
    name: str
    expected: str
    observed: str
    tolerance: str
    passed: bool
    source: str
    detail: str = ""
    elapsed_s: float = 0.0

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (f"[{self.cid:2d}] {verdict}  {self.name}: observed {self.observed}"
                f" | expected {self.expected} (tol {self.tolerance})")


@dataclass
class ValidationReport:
    checks: list[CheckResult] = dataclass_field(default_factory=list)
    seed: int = DEFAULT_SEED

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def render_text(self) -> str:
        lines = [c.line() for c in self.checks]
        n_fail = sum(not c.passed for c in self.checks)
        lines.append(f"{len(self.checks) - n_fail}/{len(self.checks)} checks passed"
                     + ("" if not n_fail else f", {n_fail} FAILED"))
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "passed": self.passed,
            "checks": [vars(c) for c in self.checks],
        }


# ---------------------------------------------------------------------------
# the thirteen checks

def _z_line(pairs) -> str:
    return ", ".join(f"x={x:g}: z={z:+.2f}" for x, z in pairs)


def check_01_interval_mc(seed: int) -> CheckResult:
    xs = (0.0, 0.5, 1.0, 2.0, 5.0)
    zs = []
    for i, x in enumerate(xs):
        params = params_for_intensity(x)
        config = mc.MCConfig(params=params, dt=1e-3, n_paths=100_000,
                             seed=seed + i, dimension=1, boundary="interval")
        rich = mc.simulate_fpt_richardson(config)
        zs.append((x, mc.zscore(analytic.mean_fpt_1d(params), rich.extrapolated)))
    worst = max(abs(z) for _, z in zs)
    return CheckResult(
        cid=1, name="1D closed form vs simulation",
        expected="|z| <= 3 at x in {0, 0.5, 1, 2, 5}",
        observed=f"max |z| = {worst:.2f}",
        tolerance="3 standard errors", passed=worst <= 3.0,
        source="closed form (e_m/i_s) tanh(x)",
        detail=_z_line(zs) + "; Richardson pairs at dt = 1e-3 and 5e-4, 1e5 paths")


def check_02_cube_mc(seed: int) -> CheckResult:
    xs = (0.0, 1.0, 3.0)
    zs = []
    for i, x in enumerate(xs):
        params = params_for_intensity(x)
        config = mc.MCConfig(params=params, dt=5e-4, n_paths=100_000,
                             seed=seed + 100 + i, dimension=3, boundary="cube")
        rich = mc.simulate_fpt_richardson(config)
        zs.append((x, mc.zscore(analytic.mean_fpt_3d(params), rich.extrapolated)))
    worst = max(abs(z) for _, z in zs)
    return CheckResult(
        cid=2, name="3D cube series vs simulation",
        expected="|z| <= 3 at x in {0, 1, 3}",
        observed=f"max |z| = {worst:.2f}",
        tolerance="3 standard errors", passed=worst <= 3.0,
        source="double series (128/pi^4) F(x)",
        detail=_z_line(zs) + "; Richardson pairs at dt = 5e-4 and 2.5e-4, 1e5 paths")


def check_03_dark_3d_constants(seed: int) -> CheckResult:
    params = params_for_intensity(0.0)
    mean = analytic.mean_fpt_3d(params)
    rate = analytic.rate_3d(params)
    ok = abs(mean - 0.49) <= 0.005 and abs(rate - 2.0) <= 0.02
    return CheckResult(
        cid=3, name="zero-intensity 3D mean and rate",
        expected="mean 0.490 +- 0.005, rate 2.00 +- 0.02 (units e_m^2/sigma^2 and its inverse)",
        observed=f"mean {mean:.6f}, rate {rate:.6f}",
        tolerance="+-0.005 / +-0.02", passed=ok,
        source="reference constants",
        detail="the exact series gives 128/pi^4 * F(0) = 0.4497026, not 0.49; the "
               "simulation (check 2, x=0) confirms the series, so the quoted rounding "
               "is not reproducible from the stated model")


def check_04_asymptote(seed: int) -> CheckResult:
    scale = 128.0 / math.pi ** 4
    e50 = abs(50.0 * analytic.f3_series(50.0) * scale - 1.0)
    e500 = abs(500.0 * analytic.f3_series(500.0, SeriesControl(kl_max=160)) * scale - 1.0)
    ok = e50 < 0.01 and e500 < 0.001
    return CheckResult(
        cid=4, name="large-x series asymptote",
        expected="x F(x) -> pi^4/128: rel err < 1% at x=50, < 0.1% at x=500",
        observed=f"rel err {e50:.2e} at x=50, {e500:.2e} at x=500",
        tolerance="1% / 0.1%", passed=ok,
        source="series limit",
        detail="x=500 evaluated at kl_max=160 so the saturation edge of the double "
               "series is fully inside the truncation")


def check_05_high_rate(seed: int) -> CheckResult:
    worst = 0.0
    for x in (8.0, 10.0, 12.0, 16.0):
        params = params_for_intensity(x)
        worst = max(worst, abs(analytic.rate_1d(params) / (params.i_s / params.e_m)
                               - (1.0 + 2.0 * math.exp(-2.0 * x))))
    return CheckResult(
        cid=5, name="high-intensity 1D rate expansion",
        expected="|rate/(i_s/e_m) - (1 + 2 exp(-2x))| < 1e-6 for x >= 8",
        observed=f"max deviation {worst:.2e}",
        tolerance="1e-6", passed=worst < 1e-6,
        source="coth expansion")


def check_06_dark_threshold(seed: int) -> CheckResult:
    val = analytic.dark_fraction(1.5, dimension=1)
    ok = 0.10 < val < 0.11
    return CheckResult(
        cid=6, name="10% excess at x = 1.5",
        expected="coth(1.5) - 1 in (0.10, 0.11)",
        observed=f"{val:.6f}",
        tolerance="open interval (0.10, 0.11)", passed=ok,
        source="closed form")


def check_07_representations(seed: int) -> CheckResult:
    params = params_for_intensity(0.0)
    ts = np.geomspace(0.05, 10.0, 60)
    gap = max(abs(analytic.axis_survival_image(t, 0.0, params)
                  - analytic.axis_survival_spectral(t, params)) for t in ts)

    idents = []
    for x in (0.0, 1.0, 5.0):
        p = params_for_intensity(x)
        for dim, series in ((1, analytic.mean_fpt_1d(p)), (3, analytic.mean_fpt_3d(p))):
            q = mean_fpt_quadrature(p, None, dim)
            idents.append((dim, x, abs(q - series) / series))
    worst_ident = max(rel for _, _, rel in idents)
    ok = gap < 1e-10 and worst_ident < 1e-3
    return CheckResult(
        cid=7, name="survival representations and mean identity",
        expected="image/spectral gap < 1e-10 on t in [0.05, 10]; mean = integral of survival to rel 1e-3",
        observed=f"max gap {gap:.2e}; worst identity rel err {worst_ident:.2e}",
        tolerance="1e-10 / 1e-3", passed=ok,
        source="dual representations",
        detail="; ".join(f"{d}D x={x:g}: rel {r:.1e}" for d, x, r in idents))


def check_08_pde(seed: int) -> CheckResult:
    diffs = []
    for x in (0.0, 2.0):
        params = params_for_intensity(x)
        t = 0.5 * params.time_scale
        pde = pde_survival_1d(t, params.i_s, params)
        img = analytic.axis_survival_image(t, params.i_s, params)
        diffs.append((x, abs(pde - img)))
    worst = max(d for _, d in diffs)
    return CheckResult(
        cid=8, name="finite-difference solver pins the 1D survival",
        expected="|pde - image| < 1e-5 at x in {0, 2}, t = 0.5 e_m^2/sigma^2",
        observed=f"max |diff| = {worst:.2e}",
        tolerance="1e-5", passed=worst < 1e-5,
        source="Crank-Nicolson oracle",
        detail=", ".join(f"x={x:g}: {d:.2e}" for x, d in diffs)
               + "; fixes the tanh(i_s e_m/sigma^2) argument convention")


def check_09_field_correlation(seed: int) -> CheckResult:
    g0 = field.g_tau(0.0)
    d0 = abs(g0 - field.G0)

    taus = np.linspace(0.005, 0.05, 10)
    vals = np.array([field.g_tau(float(t)) for t in taus])
    t2 = taus ** 2
    curv = float(np.dot(vals / g0 - 1.0, t2) / np.dot(t2, t2))

    tail_taus = np.linspace(10.0, 20.0, 41)
    tail = np.array([field.g_tau(float(t)) for t in tail_taus])
    crossings = np.nonzero(tail[:-1] * tail[1:] < 0)[0]
    if crossings.size >= 2:
        spacing = float(np.mean(np.diff(tail_taus[crossings])))
        freq = math.pi / spacing
        freq_ok = abs(freq - math.sqrt(0.6)) / math.sqrt(0.6) < 0.01
        freq_txt = f"frequency {freq:.4f}"
    else:
        freq_ok = False
        freq_txt = f"{crossings.size} sign changes on [10, 20] (>= 2 needed for a frequency)"
    env_slope = float(np.polyfit(tail_taus, np.log(np.abs(tail)), 1)[0])
    env_ok = abs(env_slope - (-2.0 * math.sqrt(2.0) / 5.0)) <= 0.02 * (2.0 * math.sqrt(2.0) / 5.0)

    ok = d0 < 1e-8 and abs(curv + 1.0) < 0.01 and freq_ok and env_ok
    return CheckResult(
        cid=9, name="correlation value, curvature and tail shape",
        expected="g(0) = 1/(18 pi) +- 1e-8; curvature -1 +- 1%; tail frequency "
                 "sqrt(3/5) +- 1% and log-envelope slope -2 sqrt(2)/5 +- 2%",
        observed=f"g(0) diff {d0:.1e}; curvature {curv:+.4f}; {freq_txt}; "
                 f"envelope slope {env_slope:+.4f}",
        tolerance="1e-8 / 1% / 1% / 2%", passed=ok,
        source="oscillatory quadrature",
        detail="the tail on [10, 20] is positive and algebraic, leading term "
               "(2/3pi) 6/tau^4 from the integrand endpoint, so the quoted damped "
               "cosine (no zeros, slope -4/tau = -0.27 at tau = 15) cannot be matched; "
               "g(12) = 1.17e-4, g(20) = 1.03e-5 from quadrature")


def check_10_moment(seed: int) -> CheckResult:
    quad_val, exact = field.moment_integral()
    diff = abs(quad_val - exact)
    return CheckResult(
        cid=10, name="spectral moment dual evaluation",
        expected=f"5 pi / 4096 = {5.0 * math.pi / 4096.0:.12e}",
        observed=f"quadrature {quad_val:.12e}, closed form {exact:.12e}",
        tolerance="1e-10", passed=diff < 1e-10,
        source="half-Beta identity B(7/2, 9/2)/2")


def check_11_sigma(seed: int) -> CheckResult:
    est = field.sigma_const(AtomModel())
    return CheckResult(
        cid=11, name="noise amplitude dual routes",
        expected="time-domain and Parseval routes agree to 1e-6 relative",
        observed=f"sigma = {est.sigma_time:.6e} (time) vs {est.sigma_freq:.6e} "
                 f"(Parseval), rel diff {est.rel_disagreement:.1e}",
        tolerance="1e-6 relative", passed=est.consistent,
        source="dual-route computation",
        detail=est.note)


def check_12_renewal(seed: int) -> CheckResult:
    zs = []
    for i, x in enumerate((0.0, 2.0)):
        params = params_for_intensity(x)
        mean_ref = analytic.mean_fpt_1d(params)
        config = mc.MCConfig(params=params, dt=2e-5, n_paths=100,
                             seed=seed + 200 + i, dimension=1, boundary="interval")
        stream = mc.simulate_event_stream(config, horizon=1e4 * mean_ref)
        gaps = stream.interarrivals()
        se_rate = gaps.std(ddof=1) / (gaps.mean() ** 2 * math.sqrt(gaps.size))
        zs.append((x, (stream.rate - 1.0 / mean_ref) / se_rate))
    worst = max(abs(z) for _, z in zs)
    return CheckResult(
        cid=12, name="event-stream rate equals inverse mean",
        expected="|z| <= 3 at x in {0, 2}, horizon 1e4 mean interarrivals",
        observed=f"max |z| = {worst:.2f}",
        tolerance="3 standard errors", passed=worst <= 3.0,
        source="renewal identity rate = 1/mean",
        detail=_z_line(zs) + "; dt = 2e-5 keeps the step bias below one standard error")


def check_13_sphere_cube(seed: int) -> CheckResult:
    mean_ok = True
    pathwise_ok = True
    ratios = []
    for i, x in enumerate((0.0, 2.0)):
        params = params_for_intensity(x)
        base = mc.MCConfig(params=params, dt=5e-4, n_paths=30_000,
                           seed=seed + 300 + i, dimension=3, boundary="cube")
        comp = mc.simulate_fpt_sphere_vs_cube(params, base)
        mean_ok &= comp.sphere.mean <= comp.cube.mean
        pathwise_ok &= comp.pathwise_sphere_le_cube
        ratios.append((x, comp.ratio, comp.ratio_err))

    params0 = params_for_intensity(0.0)
    sphere_cfg = mc.MCConfig(params=params0, dt=5e-4, n_paths=30_000,
                             seed=seed + 310, dimension=3, boundary="sphere")
    rich = mc.simulate_fpt_richardson(sphere_cfg)
    oracle = radial_mean_exit_time(params0.e_m, params0.sigma)
    z = mc.zscore(oracle, rich.extrapolated)

    ok = mean_ok and pathwise_ok and abs(z) <= 3.0
    return CheckResult(
        cid=13, name="sphere vs cube boundaries",
        expected="sphere mean <= cube mean at every tested x; driftless sphere matches "
                 "the radial solver within 3 standard errors",
        observed=f"pathwise ordering {'held' if pathwise_ok else 'VIOLATED'}; "
                 f"sphere oracle z = {z:+.2f}",
        tolerance="ordering exact; 3 standard errors", passed=ok,
        source="containment + radial finite-difference oracle",
        detail="; ".join(f"x={x:g}: sphere/cube = {r:.2f} +- {e:.2f}" for x, r, e in ratios)
               + f"; radial oracle mean {oracle:.6f} e_m^2/sigma^2")


CRITERIA: tuple[tuple[int, str, object], ...] = (
    (1, "1D closed form vs simulation", check_01_interval_mc),
    (2, "3D cube series vs simulation", check_02_cube_mc),
    (3, "zero-intensity 3D mean and rate", check_03_dark_3d_constants),
    (4, "large-x series asymptote", check_04_asymptote),
    (5, "high-intensity 1D rate expansion", check_05_high_rate),
    (6, "10% excess at x = 1.5", check_06_dark_threshold),
    (7, "survival representations and mean identity", check_07_representations),
    (8, "finite-difference solver pins the 1D survival", check_08_pde),
    (9, "correlation value, curvature and tail shape", check_09_field_correlation),
    (10, "spectral moment dual evaluation", check_10_moment),
    (11, "noise amplitude dual routes", check_11_sigma),
    (12, "event-stream rate equals inverse mean", check_12_renewal),
    (13, "sphere vs cube boundaries", check_13_sphere_cube),
)


def run_check(cid: int, seed: int = DEFAULT_SEED) -> CheckResult:
    for num, _, fn in CRITERIA:
        if num == cid:
            start = time.perf_counter()
            result = fn(seed)
            result.elapsed_s = time.perf_counter() - start
            return result
    raise ValueError(f"no check numbered {cid}")


def run_all(seed: int = DEFAULT_SEED, progress=None) -> ValidationReport:
    report = ValidationReport(seed=seed)
    for cid, _, _ in CRITERIA:
        result = run_check(cid, seed)
        report.checks.append(result)
        if progress is not None:
            progress(result)
    return report
