"""Vacuum-field autocorrelation seen by an exponentially smeared detector,
and the white-noise amplitude it induces.

All values are dimensionless (hbar = c = a = 1) unless an AtomModel carries
explicit units: lags tau are in units a/c, correlation values in hbar*c/a**4
and the noise amplitude in hbar*c**1.5/a**3.5.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import beta as _beta

from .params import AtomModel, QuadratureError, SeriesControl

_PREF = 2.0 / (3.0 * math.pi)
G0 = 1.0 / (18.0 * math.pi)
# stationary-phase point of the correlation integrand x^3/(x^2+1)^4
KERNEL_PEAK = math.sqrt(3.0 / 5.0)
FORM_FACTOR_PEAK = 1.0 / math.sqrt(3.0)

# reference figures quoted elsewhere for the natural-unit noise amplitude;
# kept for reporting, not used in any computation
REPORTED_SIGMA_CONSTANT = 2.12e-4
REPORTED_SIGMA_ORDER = 1e-3


@dataclass(frozen=True)
class CorrelationSample:
    """One evaluated lag of the correlation function, natural units."""
    tau: float
    g: float


@dataclass(frozen=True)
class FormFactor:
    """Frequency form factor value/(1/a) at dimensionless frequency x."""
    x: float
    value: float


def form_factor(x: float) -> float:
    """x / (4 pi (x^2+1)^2), the frequency weight of the exponential
    density; vanishes at 0 and infinity with its maximum at 1/sqrt(3)."""
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    return x / (4.0 * math.pi * (x * x + 1.0) ** 2)


def _kernel(x: float) -> float:
    return _PREF * x ** 3 / (x * x + 1.0) ** 4


def _check_quad(result, what: str, ctrl: SeriesControl, value: float) -> None:
    if len(result) > 3:
        raise QuadratureError(f"{what}: {result[3]}")
    if result[1] > ctrl.tolerance_for(value):
        raise QuadratureError(
            f"{what}: reported error {result[1]:.3e} exceeds tolerance")


def g_tau(tau: float, ctrl: SeriesControl | None = None) -> float:
    """Correlation value (2/3pi) int_0^inf x^3 cos(tau x)/(x^2+1)^4 dx.

    Even in tau by the cosine kernel; only tau >= 0 is accepted. Small lags
    use plain adaptive quadrature; from tau = 0.5 the cosine weight is
    handed to the oscillatory (Fourier) integrator, which sums the
    between-zeros panels with series acceleration internally.
    """
    ctrl = ctrl or SeriesControl()
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    if tau < 0.5:
        res = quad(lambda x: _kernel(x) * math.cos(tau * x), 0.0, np.inf,
                   epsabs=ctrl.abs_tol, epsrel=ctrl.rel_tol, limit=200,
                   full_output=True)
    else:
        res = quad(_kernel, 0.0, np.inf, weight="cos", wvar=tau,
                   epsabs=ctrl.abs_tol, limlst=200, limit=200,
                   full_output=True)
    _check_quad(res, f"g_tau(tau={tau})", ctrl, res[0])
    return float(res[0])


def g_tau_small(tau: float) -> float:
    """Quadratic small-lag approximation (1/18pi)(1 - tau^2)."""
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    return G0 * (1.0 - tau * tau)


def g_tau_large(tau: float) -> float:
    """Damped-cosine large-lag approximation
    (25/512) sqrt(3/10) exp(-2 sqrt(2) tau / 5) cos(sqrt(3/5) tau).

    Kept as the quoted closed form. Direct quadrature shows the true tail is
    instead algebraic and positive, dominated by the integrand endpoint
    (leading term (2/3pi) 6/tau^4); see the validation report.
    """
    if not tau > 0:
        raise ValueError(f"tau must be > 0, got {tau}")
    return (25.0 / 512.0) * math.sqrt(0.3) * math.exp(-2.0 * math.sqrt(2.0) * tau / 5.0) \
        * math.cos(math.sqrt(0.6) * tau)


def correlation_table(taus, ctrl: SeriesControl | None = None) -> list[CorrelationSample]:
    return [CorrelationSample(tau=float(t), g=g_tau(float(t), ctrl)) for t in taus]


def moment_integral_exact() -> float:
    """int_0^inf x^6/(x^2+1)^8 dx = B(7/2, 9/2)/2 = 5 pi / 4096."""
    return 0.5 * float(_beta(3.5, 4.5))


def moment_integral(ctrl: SeriesControl | None = None) -> tuple[float, float]:
    """The spectral moment int_0^inf x^6/(x^2+1)^8 dx by quadrature and by
    the half-Beta closed form, asserting they agree to 1e-10.

    Returns (quadrature, closed_form).
    """
    ctrl = ctrl or SeriesControl()
    res = quad(lambda x: x ** 6 / (x * x + 1.0) ** 8, 0.0, np.inf,
               epsabs=ctrl.abs_tol, epsrel=ctrl.rel_tol, full_output=True)
    _check_quad(res, "moment_integral", ctrl, res[0])
    exact = moment_integral_exact()
    if abs(res[0] - exact) > 1e-10:
        raise QuadratureError(
            f"moment integral routes disagree: quadrature {res[0]!r} vs closed form {exact!r}")
    return float(res[0]), exact


@dataclass(frozen=True)
class SigmaEstimate:
    """Dual-route evaluation of the induced white-noise amplitude.

    sigma_time comes from integrating the squared lag correlation,
    sigma_freq from the Parseval reduction to the spectral moment; both are
    in natural units (multiply by unit_scale for physical units).
    consistent is the internal cross-check, independent of the reference
    figures quoted alongside.
    """
    sigma_sq_time: float
    sigma_sq_freq: float
    sigma_time: float
    sigma_freq: float
    rel_disagreement: float
    consistent: bool
    unit_scale: float
    unit: str
    reported_constant: float
    reported_order: float
    note: str

    @property
    def sigma(self) -> float:
        return self.sigma_freq

    @property
    def sigma_physical(self) -> float:
        return self.sigma_freq * self.unit_scale


def sigma_const(atom: AtomModel, ctrl: SeriesControl | None = None) -> SigmaEstimate:
    """Noise amplitude sigma from the correlation function, two ways.

    Time domain: sigma^2 = (1/4 pi^2) int_0^inf g(tau)^2 dtau.
    Frequency domain: the same by Parseval,
    sigma^2 = (1/4 pi^2) (pi/2) (2/3pi)^2 int_0^inf x^6/(x^2+1)^8 dx.
    The two must agree to 1e-6 relative; neither is fitted to the reference
    figures, which are merely reported for comparison.
    """
    ctrl = ctrl or SeriesControl()

    def g_sq(tau: float) -> float:
        v = g_tau(tau, ctrl)
        return v * v

    near = quad(g_sq, 0.0, 2.0, epsabs=ctrl.abs_tol, epsrel=ctrl.rel_tol,
                limit=200, full_output=True)
    _check_quad(near, "sigma_const near lag", ctrl, near[0])
    # by tau = 200 the integrand has fallen below 1e-17 of the total
    far = quad(g_sq, 2.0, 200.0, epsabs=ctrl.abs_tol, epsrel=ctrl.rel_tol,
               limit=200, full_output=True)
    _check_quad(far, "sigma_const far lag", ctrl, far[0])
    g2_integral = float(near[0] + far[0])
    sigma_sq_time = g2_integral / (4.0 * math.pi ** 2)

    moment, _ = moment_integral(ctrl)
    sigma_sq_freq = (math.pi / 2.0) * _PREF ** 2 * moment / (4.0 * math.pi ** 2)

    rel = abs(sigma_sq_time - sigma_sq_freq) / sigma_sq_freq
    sigma_freq = math.sqrt(sigma_sq_freq)
    note = (
        f"computed sigma = {sigma_freq:.4e} (natural units); the quoted reference "
        f"figures {REPORTED_SIGMA_CONSTANT:.3g} and order {REPORTED_SIGMA_ORDER:.0e} "
        "disagree both with this value and with each other; the acceptance anchor "
        "is the internal agreement of the two computation routes"
    )
    return SigmaEstimate(
        sigma_sq_time=sigma_sq_time,
        sigma_sq_freq=sigma_sq_freq,
        sigma_time=math.sqrt(sigma_sq_time),
        sigma_freq=sigma_freq,
        rel_disagreement=rel,
        consistent=rel < 1e-6,
        unit_scale=atom.sigma_unit,
        unit="hbar * c**1.5 / a**3.5",
        reported_constant=REPORTED_SIGMA_CONSTANT,
        reported_order=REPORTED_SIGMA_ORDER,
        note=note,
    )
