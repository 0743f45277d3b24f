"""Command-line front end: rates, sweeps, simulations, field tables and the
acceptance suite. Curves go out as CSV (17 significant digits, '.' decimal
separator), single results and reports as JSON; every command that draws
random numbers honors --seed and falls back to the fixed documented default.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import __version__, analytic, field, mc, validation
from .params import (
    AtomModel,
    DEFAULT_SEED,
    DetectorParams,
    QuantumDetectorParams,
    SeriesControl,
    dimensionless_intensity,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_QUALITY = 3


@dataclass(frozen=True)
class RateCurve:
    """Sweep rows (i_s, rate_1d, rate_3d, rate_quantum, dark_fraction_1d,
    dark_fraction_3d), sorted by i_s, plus run metadata."""

    rows: list[tuple[float, float, float, float, float, float]]
    metadata: dict

    HEADER = ("i_s", "rate_1d", "rate_3d", "rate_quantum",
              "dark_fraction_1d", "dark_fraction_3d")


def _fmt(v: float) -> str:
    return format(v, ".17g")


def _write_csv(path, header, rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _print_json(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _add_param_flags(sub) -> None:
    sub.add_argument("--em", type=float, default=1.0, help="absorption threshold e_m (default 1)")
    sub.add_argument("--sigma", type=float, default=1.0, help="noise amplitude (default 1)")
    sub.add_argument("--is", dest="i_s", type=float, default=0.0,
                     help="signal intensity i_s (default 0; equals x when em=sigma=1)")
    sub.add_argument("--cross-section", type=float, default=1.0,
                     help="area factor on rates (default 1)")


def _params(args) -> DetectorParams:
    return DetectorParams(e_m=args.em, sigma=args.sigma, i_s=args.i_s,
                          cross_section=args.cross_section)


def _rate_payload(params: DetectorParams, ctrl: SeriesControl) -> dict:
    x = dimensionless_intensity(params)
    payload = {
        "x": x,
        "mean_fpt_1d": analytic.mean_fpt_1d(params),
        "mean_fpt_3d": analytic.mean_fpt_3d(params, ctrl),
        "rate_1d": analytic.rate_1d(params),
        "rate_3d": analytic.rate_3d(params, ctrl),
        "dark_fraction_1d": analytic.dark_fraction(x, 1) if x > 0 else None,
        "dark_fraction_3d": analytic.dark_fraction(x, 3, ctrl) if x > 0 else None,
    }
    return payload


def cmd_rate(args) -> int:
    params = _params(args)
    _print_json(_rate_payload(params, SeriesControl()))
    return EXIT_OK


def build_rate_curve(e_m: float, sigma: float, cross_section: float,
                     xs, ctrl: SeriesControl) -> RateCurve:
    quantum = QuantumDetectorParams(eta=1.0, k_const=1.0 / e_m)
    rows = []
    for x in sorted(float(v) for v in xs):
        i_s = x * sigma ** 2 / e_m
        params = DetectorParams(e_m=e_m, sigma=sigma, i_s=i_s, cross_section=cross_section)
        rows.append((
            i_s,
            analytic.rate_1d(params),
            analytic.rate_3d(params, ctrl),
            analytic.quantum_rate(i_s, quantum),
            analytic.dark_fraction(x, 1) if x > 0 else math.nan,
            analytic.dark_fraction(x, 3, ctrl) if x > 0 else math.nan,
        ))
    metadata = {
        "e_m": e_m, "sigma": sigma, "cross_section": cross_section,
        "n_images": ctrl.n_images, "kl_max": ctrl.kl_max,
        "abs_tol": ctrl.abs_tol, "rel_tol": ctrl.rel_tol,
        "version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }
    return RateCurve(rows=rows, metadata=metadata)


def _grid(args) -> np.ndarray:
    if args.points < 1:
        raise ValueError("--points must be >= 1")
    if args.x_max < args.x_min:
        raise ValueError("--x-max must be >= --x-min")
    if args.points == 1:
        return np.array([args.x_min])
    if args.grid == "log":
        if args.x_min <= 0:
            raise ValueError("log grid needs --x-min > 0")
        return np.geomspace(args.x_min, args.x_max, args.points)
    return np.linspace(args.x_min, args.x_max, args.points)


def cmd_sweep(args) -> int:
    curve = build_rate_curve(args.em, args.sigma, args.cross_section,
                             _grid(args), SeriesControl())
    if args.format == "csv":
        _write_csv(args.out, RateCurve.HEADER, curve.rows)
        sidecar = {"columns": list(RateCurve.HEADER), **curve.metadata}
        if args.out is not None:
            with open(args.out + ".meta.json", "w") as fh:
                json.dump(sidecar, fh, indent=2)
                fh.write("\n")
    else:
        payload = {"columns": list(RateCurve.HEADER),
                   "rows": [[None if isinstance(v, float) and math.isnan(v) else v
                             for v in row] for row in curve.rows],
                   "metadata": curve.metadata}
        if args.out is None:
            _print_json(payload)
        else:
            with open(args.out, "w") as fh:
                json.dump(payload, fh, indent=2)
                fh.write("\n")
    return EXIT_OK


def _estimate_payload(est: mc.FPTEstimate) -> dict:
    return {
        "mean": est.mean, "std_err": est.std_err,
        "n_absorbed": est.n_absorbed, "n_censored": est.n_censored,
        "censored_fraction": est.censored_fraction, "dt_used": est.dt_used,
    }


def cmd_mc(args) -> int:
    params = _params(args)
    boundary = args.boundary
    if boundary is None:
        boundary = "interval" if args.dim == 1 else "cube"
    config = mc.MCConfig(params=params, dt=args.dt, n_paths=args.paths,
                         seed=args.seed, dimension=args.dim, boundary=boundary,
                         max_time=args.max_time)
    rich = mc.simulate_fpt_richardson(config)

    if config.dimension == 1:
        ref = analytic.mean_fpt_1d(params)
    elif boundary == "cube":
        ref = analytic.mean_fpt_3d(params)
    elif params.i_s == 0:
        ref = validation.radial_mean_exit_time(params.e_m, params.sigma)
    else:
        ref = None  # no analytic value for the drifted sphere
    payload = {
        "boundary": boundary, "dimension": config.dimension,
        "x": dimensionless_intensity(params),
        "coarse": _estimate_payload(rich.coarse),
        "fine": _estimate_payload(rich.fine),
        "extrapolated": _estimate_payload(rich.extrapolated),
        "analytic_mean": ref,
        "z_extrapolated": None if ref is None else mc.zscore(ref, rich.extrapolated),
    }
    _print_json(payload)
    if rich.coarse.unreliable or rich.fine.unreliable:
        print("censoring above 0.1%: estimates unreliable, raise --max-time",
              file=sys.stderr)
        return EXIT_QUALITY
    return EXIT_OK


def cmd_field(args) -> int:
    ctrl = SeriesControl()
    taus = _grid(args)
    rows = [(t, field.g_tau(t, ctrl), field.g_tau_small(t),
             field.g_tau_large(t) if t > 0 else math.nan) for t in taus]
    _write_csv(args.out, ("tau", "g", "g_small", "g_large"), rows)

    est = field.sigma_const(AtomModel(), ctrl)
    report = {
        "sigma_natural_time_domain": est.sigma_time,
        "sigma_natural_frequency_domain": est.sigma_freq,
        "rel_disagreement": est.rel_disagreement,
        "consistent_1e-6": est.consistent,
        "unit": est.unit,
        "reference_figures": {
            "quoted constant": est.reported_constant,
            "quoted order of magnitude": est.reported_order,
        },
        "note": est.note,
    }
    # keep stdout parseable when the table goes there too
    out = sys.stdout if args.out is not None else sys.stderr
    json.dump(report, out, indent=2)
    out.write("\n")
    return EXIT_OK


def cmd_validate(args) -> int:
    def progress(result):
        print(result.line(), flush=True)

    report = validation.run_all(seed=args.seed, progress=progress)
    print(report.render_text().splitlines()[-1])
    if args.out is not None:
        with open(args.out, "w") as fh:
            json.dump(report.to_dict(), fh, indent=2)
            fh.write("\n")
    return EXIT_OK if report.passed else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="photofpt",
        description="Threshold photodetector model: analytic rates, first-passage "
                    "Monte Carlo, vacuum-field correlations and the acceptance suite.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_rate = sub.add_parser("rate", help="print rates and mean FPTs for one parameter point")
    _add_param_flags(p_rate)
    p_rate.set_defaults(fn=cmd_rate)

    p_sweep = sub.add_parser("sweep", help="rate curve over an intensity grid")
    _add_param_flags(p_sweep)
    p_sweep.add_argument("--x-min", type=float, default=0.01)
    p_sweep.add_argument("--x-max", type=float, default=100.0)
    p_sweep.add_argument("--points", type=int, default=50)
    p_sweep.add_argument("--grid", choices=("log", "lin"), default="log")
    p_sweep.add_argument("--out", default=None, help="output path (default stdout)")
    p_sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    p_sweep.set_defaults(fn=cmd_sweep)

    p_mc = sub.add_parser("mc", help="Richardson-extrapolated first-passage simulation")
    _add_param_flags(p_mc)
    p_mc.add_argument("--dim", type=int, choices=(1, 3), default=1)
    p_mc.add_argument("--boundary", choices=("interval", "cube", "sphere"), default=None,
                      help="default: interval for --dim 1, cube for --dim 3")
    p_mc.add_argument("--dt", type=float, default=1e-3)
    p_mc.add_argument("--paths", type=int, default=10_000)
    p_mc.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_mc.add_argument("--max-time", type=float, default=None,
                      help="censoring cap per path (default 100 e_m^2/sigma^2)")
    p_mc.set_defaults(fn=cmd_mc)

    p_field = sub.add_parser("field", help="correlation table and noise-amplitude report")
    p_field.add_argument("--x-min", type=float, default=0.0, help="first lag tau")
    p_field.add_argument("--x-max", type=float, default=20.0, help="last lag tau")
    p_field.add_argument("--points", type=int, default=81)
    p_field.add_argument("--grid", choices=("log", "lin"), default="lin")
    p_field.add_argument("--out", default=None, help="CSV path (default stdout; the "
                         "noise report then goes to stderr)")
    p_field.set_defaults(fn=cmd_field)

    p_val = sub.add_parser("validate", help="run the full acceptance suite")
    p_val.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_val.add_argument("--out", default=None, help="also write the report as JSON")
    p_val.set_defaults(fn=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
