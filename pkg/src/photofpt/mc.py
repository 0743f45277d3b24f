"""Monte Carlo first-passage sampling for the accumulator process.

Euler-Maruyama paths from the origin with per-axis increments
drift_i*dt + sigma*sqrt(dt)*N(0,1); the drift acts on the third axis (the
only axis in 1D). Absorption is checked after each full step against the
configured boundary: interval ends +-e_m, cube faces |E_i| = e_m, or the
sphere |E| = e_m.

Every path draws from its own counter-derived Philox substream, so results
are a pure function of (config, seed): any path subset, evaluation order or
worker layout reproduces the single-threaded ensemble bit for bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, Philox

from .params import DetectorParams

_BOUNDARIES = ("interval", "cube", "sphere")

# one-level Richardson weights for the O(sqrt(dt)) first-passage bias:
# ext = C_FINE*m(dt/2) - C_COARSE*m(dt)
C_FINE = math.sqrt(2.0) / (math.sqrt(2.0) - 1.0)
C_COARSE = 1.0 / (math.sqrt(2.0) - 1.0)


@dataclass(frozen=True)
class MCConfig:
    """Simulation layout; fully determines a reproducible ensemble."""

    params: DetectorParams
    dt: float
    n_paths: int
    seed: int
    dimension: int = 1
    boundary: str = "interval"
    max_time: float | None = None

    def __post_init__(self):
        ts = self.params.time_scale
        if self.dimension not in (1, 3):
            raise ValueError(f"dimension must be 1 or 3, got {self.dimension}")
        if self.boundary not in _BOUNDARIES:
            raise ValueError(f"boundary must be one of {_BOUNDARIES}, got {self.boundary!r}")
        if (self.boundary == "interval") != (self.dimension == 1):
            raise ValueError("interval boundary pairs with dimension 1, cube/sphere with 3")
        if not self.dt > 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.dt > 0.01 * ts * (1.0 + 1e-12):
            raise ValueError(
                f"dt={self.dt:g} too coarse; need dt <= 0.01*e_m**2/sigma**2 = {0.01 * ts:g}")
        if self.n_paths < 100:
            raise ValueError(f"n_paths must be >= 100, got {self.n_paths}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must fit in 64 bits")
        if self.max_time is None:
            object.__setattr__(self, "max_time", 100.0 * ts)
        if self.max_time < 100.0 * ts * (1.0 - 1e-12):
            raise ValueError(
                f"max_time={self.max_time:g} too short; need >= 100*e_m**2/sigma**2 = {100.0 * ts:g}")

    def steps_cap(self, dt: float) -> int:
        return int(math.ceil(self.max_time / dt))


@dataclass(frozen=True)
class FPTEstimate:
    """Sample mean and standard error of absorption times; censored paths
    (still alive at max_time) are excluded from the moments and counted."""

    mean: float
    std_err: float
    n_absorbed: int
    n_censored: int
    dt_used: float

    @property
    def n_paths(self) -> int:
        return self.n_absorbed + self.n_censored

    @property
    def censored_fraction(self) -> float:
        return self.n_censored / self.n_paths

    @property
    def unreliable(self) -> bool:
        return self.censored_fraction > 1e-3

    @classmethod
    def from_samples(cls, samples: np.ndarray, n_censored: int, dt_used: float) -> "FPTEstimate":
        n = samples.size
        if n < 2:
            raise ValueError("need at least 2 absorbed paths for a standard error")
        return cls(mean=float(samples.mean()),
                   std_err=float(samples.std(ddof=1) / math.sqrt(n)),
                   n_absorbed=n, n_censored=n_censored, dt_used=dt_used)


@dataclass(frozen=True)
class RichardsonFPT:
    """Paired-seed estimates at dt and dt/2 plus their extrapolation."""

    coarse: FPTEstimate
    fine: FPTEstimate
    extrapolated: FPTEstimate


@dataclass(frozen=True)
class SphereCubeComparison:
    """Common-random-number comparison of the two 3D boundaries."""

    sphere: FPTEstimate
    cube: FPTEstimate
    ratio: float
    ratio_err: float
    pathwise_sphere_le_cube: bool


@dataclass(frozen=True)
class EventStream:
    """Detection times over a horizon; the accumulator restarts from the
    origin after each event, so interarrivals are i.i.d. first passages."""

    event_times: tuple[float, ...]
    horizon: float

    def __post_init__(self):
        if not self.horizon > 0:
            raise ValueError(f"horizon must be > 0, got {self.horizon}")
        times = np.asarray(self.event_times, dtype=float)
        if times.size:
            if times[0] <= 0 or np.any(np.diff(times) <= 0):
                raise ValueError("event times must be strictly increasing and positive")
            if times[-1] > self.horizon:
                raise ValueError("event beyond horizon")

    @property
    def count(self) -> int:
        return len(self.event_times)

    @property
    def rate(self) -> float:
        return self.count / self.horizon

    def interarrivals(self) -> np.ndarray:
        return np.diff(np.concatenate(([0.0], np.asarray(self.event_times))))


def _stream(seed: int, index: int) -> Generator:
    # substream index lives in the top counter word; a path would have to
    # consume 2**192 blocks to collide with its neighbor
    return Generator(Philox(key=seed, counter=[0, 0, 0, index]))


def _first_chunk(params: DetectorParams, dt: float, cap: int) -> int:
    t_ref = params.time_scale
    if params.i_s > 0:
        t_ref = min(t_ref, params.e_m / params.i_s)
    return max(256, min(cap, int(math.ceil(0.75 * t_ref / dt))))


def _path_time_1d(rng: Generator, em: float, sig_step: float, drift_step: float,
                  dt: float, cap: int, chunk: int) -> float:
    done = 0
    carry = 0.0
    while done < cap:
        m = min(chunk, cap - done)
        pos = carry + np.cumsum(rng.standard_normal(m) * sig_step + drift_step)
        hit = np.abs(pos) >= em
        idx = int(np.argmax(hit))
        if hit[idx]:
            return (done + idx + 1) * dt
        done += m
        carry = float(pos[-1])
        chunk = min(2 * chunk, cap)
    return math.nan


def _path_time_3d(rng: Generator, em: float, sig_step: float, drift_step: float,
                  dt: float, cap: int, chunk: int, sphere: bool) -> float:
    em2 = em * em
    done = 0
    carry = np.zeros(3)
    while done < cap:
        m = min(chunk, cap - done)
        steps = rng.standard_normal((m, 3)) * sig_step
        steps[:, 2] += drift_step
        pos = carry + np.cumsum(steps, axis=0)
        if sphere:
            hit = (pos * pos).sum(axis=1) >= em2
        else:
            hit = (np.abs(pos) >= em).any(axis=1)
        idx = int(np.argmax(hit))
        if hit[idx]:
            return (done + idx + 1) * dt
        done += m
        carry = pos[-1].copy()
        chunk = min(2 * chunk, cap)
    return math.nan


def _sample_times(config: MCConfig, dt: float) -> np.ndarray:
    """Absorption time per path (nan where censored at max_time)."""
    p = config.params
    sig_step = p.sigma * math.sqrt(dt)
    drift_step = p.i_s * dt
    cap = config.steps_cap(dt)
    chunk = _first_chunk(p, dt, cap)
    out = np.empty(config.n_paths)
    sphere = config.boundary == "sphere"
    for path in range(config.n_paths):
        rng = _stream(config.seed, path)
        if config.dimension == 1:
            out[path] = _path_time_1d(rng, p.e_m, sig_step, drift_step, dt, cap, chunk)
        else:
            out[path] = _path_time_3d(rng, p.e_m, sig_step, drift_step, dt, cap, chunk, sphere)
    return out


def simulate_fpt(config: MCConfig) -> FPTEstimate:
    """Estimate the mean first-passage time at the configured step size."""
    times = _sample_times(config, config.dt)
    alive = np.isnan(times)
    return FPTEstimate.from_samples(times[~alive], int(alive.sum()), config.dt)


def simulate_fpt_richardson(config: MCConfig) -> RichardsonFPT:
    """Run at dt and dt/2 from the same per-path substreams and extrapolate
    away the leading O(sqrt(dt)) discretization bias.

    The shared streams correlate the two legs path by path, so the
    extrapolated standard error comes from the per-path combination
    C_FINE*t_fine - C_COARSE*t_coarse rather than from independent errors.
    """
    coarse_t = _sample_times(config, config.dt)
    fine_t = _sample_times(config, config.dt / 2.0)
    paired = ~(np.isnan(coarse_t) | np.isnan(fine_t))
    combo = C_FINE * fine_t[paired] - C_COARSE * coarse_t[paired]

    coarse = FPTEstimate.from_samples(coarse_t[~np.isnan(coarse_t)],
                                      int(np.isnan(coarse_t).sum()), config.dt)
    fine = FPTEstimate.from_samples(fine_t[~np.isnan(fine_t)],
                                    int(np.isnan(fine_t).sum()), config.dt / 2.0)
    extrapolated = FPTEstimate.from_samples(combo, int((~paired).sum()), config.dt)
    return RichardsonFPT(coarse=coarse, fine=fine, extrapolated=extrapolated)


def simulate_fpt_sphere_vs_cube(params: DetectorParams, base: MCConfig) -> SphereCubeComparison:
    """Evaluate both 3D boundaries on the same trajectories.

    The inscribed sphere |E| = e_m lies inside the cube |E_i| = e_m, so on a
    common path the sphere absorbs no later; both hit conditions are checked
    on identical increments, making the comparison exactly paired.
    """
    if base.dimension != 3:
        raise ValueError("sphere/cube comparison requires a 3D base config")
    p = params
    dt = base.dt
    sig_step = p.sigma * math.sqrt(dt)
    drift_step = p.i_s * dt
    cap = base.steps_cap(dt)
    first = _first_chunk(p, dt, cap)
    em = p.e_m
    em2 = em * em

    t_sphere = np.full(base.n_paths, math.nan)
    t_cube = np.full(base.n_paths, math.nan)
    for path in range(base.n_paths):
        rng = _stream(base.seed, path)
        done = 0
        carry = np.zeros(3)
        chunk = first
        got_sphere = False
        while done < cap:
            m = min(chunk, cap - done)
            steps = rng.standard_normal((m, 3)) * sig_step
            steps[:, 2] += drift_step
            pos = carry + np.cumsum(steps, axis=0)
            if not got_sphere:
                hit_s = (pos * pos).sum(axis=1) >= em2
                idx = int(np.argmax(hit_s))
                if hit_s[idx]:
                    t_sphere[path] = (done + idx + 1) * dt
                    got_sphere = True
            hit_c = (np.abs(pos) >= em).any(axis=1)
            idx = int(np.argmax(hit_c))
            if hit_c[idx]:
                t_cube[path] = (done + idx + 1) * dt
                break
            done += m
            carry = pos[-1].copy()
            chunk = min(2 * chunk, cap)

    sphere_est = FPTEstimate.from_samples(t_sphere[~np.isnan(t_sphere)],
                                          int(np.isnan(t_sphere).sum()), dt)
    cube_est = FPTEstimate.from_samples(t_cube[~np.isnan(t_cube)],
                                        int(np.isnan(t_cube).sum()), dt)

    paired = ~(np.isnan(t_sphere) | np.isnan(t_cube))
    ts = t_sphere[paired]
    tc = t_cube[paired]
    n = ts.size
    ms, mc = ts.mean(), tc.mean()
    cov = np.cov(ts, tc, ddof=1)
    ratio = ms / mc
    ratio_var = (cov[0, 0] / mc ** 2 + ms ** 2 * cov[1, 1] / mc ** 4
                 - 2.0 * ms * cov[0, 1] / mc ** 3) / n
    pathwise = bool(np.all(ts <= tc))
    return SphereCubeComparison(sphere=sphere_est, cube=cube_est,
                                ratio=float(ratio),
                                ratio_err=float(math.sqrt(max(ratio_var, 0.0))),
                                pathwise_sphere_le_cube=pathwise)


def simulate_event_stream(config: MCConfig, horizon: float) -> EventStream:
    """Renewal detection record: successive first passages, accumulator reset
    to the origin after each event, until the horizon is passed.

    Interval i draws from substream i, so the stream is reproducible and
    its prefix does not depend on the horizon. A censored interval (no
    absorption within max_time) advances the clock without an event.
    """
    if not horizon > 0:
        raise ValueError(f"horizon must be > 0, got {horizon}")
    p = config.params
    dt = config.dt
    sig_step = p.sigma * math.sqrt(dt)
    drift_step = p.i_s * dt
    cap = config.steps_cap(dt)
    chunk = _first_chunk(p, dt, cap)
    sphere = config.boundary == "sphere"

    events: list[float] = []
    clock = 0.0
    index = 0
    while True:
        rng = _stream(config.seed, index)
        index += 1
        if config.dimension == 1:
            t = _path_time_1d(rng, p.e_m, sig_step, drift_step, dt, cap, chunk)
        else:
            t = _path_time_3d(rng, p.e_m, sig_step, drift_step, dt, cap, chunk, sphere)
        clock += config.max_time if math.isnan(t) else t
        if clock > horizon:
            break
        if not math.isnan(t):
            events.append(clock)
    return EventStream(event_times=tuple(events), horizon=horizon)


def zscore(analytic: float, est: FPTEstimate) -> float:
    """Standardized deviation (est.mean - analytic)/est.std_err."""
    if est.n_absorbed < 2:
        raise ValueError("z-score needs at least 2 absorbed paths")
    return (est.mean - analytic) / est.std_err
