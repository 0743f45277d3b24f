"""Closed-form and series evaluation of the threshold-detector model.

The accumulator diffuses with coefficient sigma**2/2 per axis and drifts at
i_s along the third axis; a count fires when it first reaches the absorbing
boundary, the interval ends +-e_m in 1D or the cube faces |E_i| = e_m in 3D.
Detection rates are inverse mean first-passage times times the cross section.

Two representations of the per-axis survival factor are provided: an image
sum (accurate at small times) and a spectral eigenfunction series (driftless
axes only, accurate at large times). Both are checked against each other and
against an independent finite-difference solver in the validation module.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.special import log_ndtr

from .params import (
    DetectorParams,
    QuantumDetectorParams,
    SeriesControl,
    SurvivalFactors,
    TruncationError,
    dimensionless_intensity,
    params_for_intensity,
)

_SMALL_X = 1e-4
_LN2 = math.log(2.0)


def _tanh_over_x(x: float) -> float:
    # series branch keeps the x -> 0 limit exact instead of dividing 0/0
    if abs(x) < _SMALL_X:
        x2 = x * x
        return 1.0 - x2 / 3.0 + 2.0 * x2 * x2 / 15.0
    return math.tanh(x) / x


def mean_fpt_1d(params: DetectorParams) -> float:
    """Mean first-passage time out of (-e_m, e_m) for the drifted accumulator.

    Equals (e_m/i_s)*tanh(i_s*e_m/sigma**2); the driftless limit
    e_m**2/sigma**2 is taken analytically through the tanh(x)/x branch.
    """
    return params.time_scale * _tanh_over_x(dimensionless_intensity(params))


def rate_1d(params: DetectorParams) -> float:
    """1D detection rate, the exact reciprocal of mean_fpt_1d times the
    cross section. rate_1d * mean_fpt_1d == cross_section to round-off."""
    return params.cross_section / mean_fpt_1d(params)


def rate_1d_asymptotic(params: DetectorParams, regime: str) -> float:
    """Limiting 1D rates, for cross-checks only.

    regime "high": (i_s/e_m)(1 + 2 exp(-2x)), the strong-signal expansion.
    regime "low": sigma**2/e_m**2, the dark rate at zero intensity.
    """
    x = dimensionless_intensity(params)
    if regime == "high":
        return params.cross_section * (params.i_s / params.e_m) * (1.0 + 2.0 * math.exp(-2.0 * x))
    if regime == "low":
        return params.cross_section * params.sigma ** 2 / params.e_m ** 2
    raise ValueError(f"regime must be 'high' or 'low', got {regime!r}")


def _accelerated_alternating_sum(signed_terms: np.ndarray) -> tuple[float, float]:
    """Sum an alternating series by iterated averaging of its partial sums.

    Works on the cumulative-sum sequence, halving its length by pairwise
    averaging until two entries remain; their mean is the accelerated value
    and half their gap estimates the remaining truncation error. For
    alternating series with smoothly decreasing terms this converges far
    below the first-omitted-term bound of the plain partial sum.
    """
    s = np.cumsum(np.asarray(signed_terms, dtype=float))
    if s.size == 1:
        # no acceleration possible; the single term is also the only
        # available scale for the unknown tail
        return float(s[0]), abs(float(s[0]))
    while s.size > 2:
        s = 0.5 * (s[1:] + s[:-1])
    return float(0.5 * (s[0] + s[1])), float(0.5 * abs(s[1] - s[0]))


def axis_survival_image(t: float, drift: float, params: DetectorParams,
                        ctrl: SeriesControl | None = None) -> float:
    """Survival probability of one axis by the method of images.

    Probability that a diffusion with the given drift and diffusion
    coefficient sigma**2/2, started at 0, has not reached +-e_m by time t.
    Each image term is the exact Gaussian integral over (-e_m, e_m), so no
    quadrature over the state is involved; weights and normal CDFs are
    combined in log space to keep large-drift terms finite.
    """
    ctrl = ctrl or SeriesControl()
    if not t > 0:
        raise ValueError(f"t must be > 0, got {t}")
    a = params.e_m
    sig2 = params.sigma ** 2
    root_t = params.sigma * math.sqrt(t)

    n = np.arange(-ctrl.n_images, ctrl.n_images + 1)
    centers = 2.0 * a * n
    log_weight = -centers * drift / sig2
    upper = (centers + a - drift * t) / root_t
    lower = (centers - a - drift * t) / root_t
    terms = np.exp(log_weight + log_ndtr(upper)) - np.exp(log_weight + log_ndtr(lower))
    signed = np.where(n % 2 == 0, terms, -terms)
    value = float(signed.sum())

    # alternating image shells decrease once past the direct term, so the
    # first omitted shell is bounded by the last kept one
    mags = np.abs(terms)
    shells = mags[ctrl.n_images:].copy()
    shells[1:] += mags[:ctrl.n_images][::-1]
    tail = float(shells[-1])
    if shells.size >= 3 and tail > shells[-2] and tail > ctrl.abs_tol:
        raise TruncationError(
            f"image shells still growing at n_images={ctrl.n_images} (t={t}, drift={drift})")
    if tail > ctrl.tolerance_for(value):
        raise TruncationError(
            f"image tail {tail:.3e} exceeds tolerance at n_images={ctrl.n_images}")
    return min(1.0, max(0.0, value))


def axis_survival_spectral(t: float, params: DetectorParams,
                           ctrl: SeriesControl | None = None,
                           drift: float = 0.0) -> float:
    """Driftless-axis survival by the absorbing-interval eigenfunction series.

    K(t) = (4/pi) sum_k (-1)^k/(2k+1) exp(-(2k+1)^2 pi^2 sigma^2 t / (8 e_m^2)),
    Euler-accelerated so the slowly alternating small-t regime still meets
    tolerance at the default truncation.
    """
    if drift != 0.0:
        raise ValueError("spectral survival factor exists for driftless axes only")
    ctrl = ctrl or SeriesControl()
    if not t > 0:
        raise ValueError(f"t must be > 0, got {t}")
    k = np.arange(ctrl.kl_max)
    odd = 2.0 * k + 1.0
    decay = np.exp(-odd ** 2 * math.pi ** 2 * params.sigma ** 2 * t / (8.0 * params.e_m ** 2))
    signed = (4.0 / math.pi) * np.where(k % 2 == 0, 1.0, -1.0) / odd * decay
    value, residual = _accelerated_alternating_sum(signed)
    if residual > ctrl.tolerance_for(value):
        raise TruncationError(
            f"spectral tail estimate {residual:.3e} exceeds tolerance at kl_max={ctrl.kl_max}")
    return min(1.0, max(0.0, value))


def survival_3d(t: float, params: DetectorParams,
                ctrl: SeriesControl | None = None) -> SurvivalFactors:
    """Cube survival factors at time t: K for each driftless axis (image form
    at drift 0) and L for the drift axis; survival = K**2 * L."""
    k_fac = axis_survival_image(t, 0.0, params, ctrl)
    l_fac = axis_survival_image(t, params.i_s, params, ctrl)
    return SurvivalFactors(l_axis=l_fac, k_axis=k_fac, t=t)


def _log_cosh(z: np.ndarray) -> np.ndarray:
    # log(cosh z) for z >= 0 without overflowing cosh itself
    z = np.asarray(z, dtype=float)
    return z + np.log1p(np.exp(-2.0 * z)) - _LN2


def f3_series(x: float, ctrl: SeriesControl | None = None) -> float:
    """The cube-model double series F(x).

    F(x) = sum_{k,l>=0} (-1)^(k+l) G_kl(x) / (S_kl (2k+1)(2l+1)) with
    S_kl = (2k+1)^2 + (2l+1)^2 and
    G_kl(x) = 1 - cosh(x)/cosh(sqrt(x^2 + pi^2 S_kl / 4)),
    evaluated per (k, l) term; the cosh ratio is formed in log space so large
    x and large indices cannot overflow. Rows are summed over l with Euler
    acceleration, then the alternating row sums are accelerated over k; the
    acceleration residual is the reported tail estimate.
    """
    ctrl = ctrl or SeriesControl()
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    odd = 2.0 * np.arange(ctrl.kl_max) + 1.0
    ok = odd[:, None]
    ol = odd[None, :]
    s = ok ** 2 + ol ** 2
    y = np.sqrt(x * x + 0.25 * math.pi ** 2 * s)
    g = -np.expm1(_log_cosh(np.float64(x)) - _log_cosh(y))
    mag = g / (s * ok * ol)

    inner = np.where(np.arange(ctrl.kl_max)[None, :] % 2 == 0, mag, -mag)
    rows = np.cumsum(inner, axis=1)
    if rows.shape[1] == 1:
        row_val = rows[:, 0]
        row_res = np.abs(row_val)
    else:
        while rows.shape[1] > 2:
            rows = 0.5 * (rows[:, 1:] + rows[:, :-1])
        row_val = 0.5 * (rows[:, 0] + rows[:, 1])
        row_res = 0.5 * np.abs(rows[:, 1] - rows[:, 0])

    outer = np.where(np.arange(ctrl.kl_max) % 2 == 0, row_val, -row_val)
    value, outer_res = _accelerated_alternating_sum(outer)
    tail = outer_res + float(row_res.max())
    if tail > ctrl.tolerance_for(value):
        raise TruncationError(
            f"double-series tail estimate {tail:.3e} exceeds tolerance at kl_max={ctrl.kl_max}")
    return value


def mean_fpt_3d(params: DetectorParams, ctrl: SeriesControl | None = None) -> float:
    """Mean first-passage time to the cube surface:
    (128/pi^4) (e_m^2/sigma^2) F(i_s e_m/sigma^2)."""
    x = dimensionless_intensity(params)
    return (128.0 / math.pi ** 4) * params.time_scale * f3_series(x, ctrl)


def rate_3d(params: DetectorParams, ctrl: SeriesControl | None = None) -> float:
    """Cube-model detection rate, cross_section / mean_fpt_3d."""
    return params.cross_section / mean_fpt_3d(params, ctrl)


def dark_fraction(x: float, dimension: int = 1,
                  ctrl: SeriesControl | None = None) -> float:
    """Fractional excess of the model rate over the linear rate i_s/e_m.

    Returns rate*e_m/i_s - 1 at unit cross section for the interval
    (dimension 1) or cube (dimension 3) model. Diverges as x -> 0 even
    though the dark rate itself stays finite, so x = 0 is rejected.
    """
    if not x > 0:
        raise ValueError(f"the excess fraction diverges as x -> 0; need x > 0, got {x}")
    if dimension not in (1, 3):
        raise ValueError(f"dimension must be 1 or 3, got {dimension}")
    params = params_for_intensity(float(x))
    rate = rate_1d(params) if dimension == 1 else rate_3d(params, ctrl)
    return rate * params.e_m / params.i_s - 1.0


def quantum_rate(i_s: float, q: QuantumDetectorParams) -> float:
    """Idealized linear detector rate eta * k_const * i_s. The classical model
    matching its strong-signal slope has threshold q.threshold_equivalent."""
    if i_s < 0:
        raise ValueError(f"i_s must be >= 0, got {i_s}")
    return q.eta * q.k_const * i_s
