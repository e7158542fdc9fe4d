"""Command-line front end.

Subcommands:

* ``visibility``: closed-form fringe report for one configuration.
* ``sweep {purcell|delay|map2d|jitter}``: CSV dataset plus a rendered figure.
* ``validate {mc|quadrature|correlator}``: numerical oracles against the
  closed forms, with a pass/fail exit code.
* ``threshold``: Bell-test Purcell threshold and arm-length tolerance window.

Exit codes: 0 success, 1 validation or threshold failure, 2 bad input,
3 output I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from ._version import __version__
from .analytic import (
    EmptyWindowError,
    UnreachableTargetError,
    chsh_threshold_purcell,
    coincidence_probability,
    delay_tolerance_window,
    max_visibility,
    visibility,
)
from .config import DEFAULTS, ConfigError, RunConfig, load_config_file
from .model import C_MM_PER_PS, ParameterError, derive_rates, validate_config
from .oracle import (
    GridTooCoarseError,
    correlator_check,
    default_correlator_lags,
    default_grid,
    fitted_decay_rate,
    mc_coincidence,
    quadrature_coincidence,
)
from .sweeps import KINDS, SweepSpec, run_sweep

_AXIS_DEFAULTS = {
    "purcell": (1.0, 200.0, 200),
    "delay": (-30.0, 30.0, 601),
    "map2d": (-20.0, 20.0, 201),
    "jitter": (0.0, 2.0, 201),
}

# flag destination -> configuration key
_OVERRIDES = (
    ("t1vac_ps", "t1_vac_ps"),
    ("t2star_ps", "t2_star_ps"),
    ("purcell", "purcell_factor"),
    ("delay_T_ps", "emission_delay_ps"),
    ("dtau1_ps", "dtau1_ps"),
    ("dtau2_ps", "dtau2_ps"),
    ("rbs", "r_bs"),
    ("tbs", "t_bs"),
    ("phase_rad", "phase_rad"),
    ("wavelength_nm", "wavelength_nm"),
    ("jitter_ps", "jitter_ps"),
    ("seed", "seed"),
    ("samples", "samples"),
    ("target", "target"),
)


def _fmt(value) -> str:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return str(value)
    if isinstance(value, int):
        return str(value)
    return f"{value:.9g}"


def _emit(payload: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(payload))
        return
    width = max(len(k) for k in payload)
    for key, value in payload.items():
        if key == "warnings":
            continue
        print(f"{key:<{width}} = {_fmt(value)}")
    for warning in payload.get("warnings", ()):
        print(f"warning: {warning}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("configuration")
    group.add_argument("--config", metavar="PATH", help="key = value config file")
    group.add_argument("--json", action="store_true", help="machine-readable output")
    group.add_argument("--t1vac-ps", type=float, dest="t1vac_ps", metavar="PS",
                       help="radiative lifetime without enhancement")
    group.add_argument("--t2star-ps", type=float, dest="t2star_ps", metavar="PS",
                       help="pure dephasing time")
    group.add_argument("--purcell", type=float, metavar="F",
                       help="Purcell enhancement factor, >= 1")
    group.add_argument("--delay-T-ps", type=float, dest="delay_T_ps", metavar="PS",
                       help="emission delay between the two photons")
    group.add_argument("--dtau1-ps", type=float, dest="dtau1_ps", metavar="PS",
                       help="arm imbalance of interferometer 1")
    group.add_argument("--dtau2-ps", type=float, dest="dtau2_ps", metavar="PS",
                       help="arm imbalance of interferometer 2")
    group.add_argument("--rbs", type=float, metavar="R",
                       help="beamsplitter intensity reflection")
    group.add_argument("--tbs", type=float, metavar="T",
                       help="beamsplitter intensity transmission")
    group.add_argument("--phase-rad", type=float, dest="phase_rad", metavar="RAD",
                       help="fringe phase supplied directly")
    group.add_argument("--wavelength-nm", type=float, dest="wavelength_nm",
                       metavar="NM", help="carrier wavelength")
    group.add_argument("--jitter-ps", type=float, dest="jitter_ps", metavar="PS",
                       help="emission-delay jitter half-amplitude")
    group.add_argument("--seed", type=int, metavar="U64",
                       help="master seed for stochastic validation")
    group.add_argument("--samples", type=int, metavar="N",
                       help="Monte Carlo sample count")
    group.add_argument("--target", type=float, metavar="V",
                       help="visibility target, default 1/sqrt(2)")

    parser = argparse.ArgumentParser(
        prog="timebin",
        description="Two-photon time-bin interference: closed forms, sweeps, "
                    "and numerical validation.")
    parser.add_argument("--version", action="version", version=f"timebin {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_vis = sub.add_parser("visibility", parents=[common],
                           help="fringe visibility report for one configuration")
    p_vis.set_defaults(handler=cmd_visibility)

    p_sweep = sub.add_parser("sweep", parents=[common],
                             help="write a sweep dataset as CSV plus a figure")
    p_sweep.add_argument("kind", choices=KINDS)
    p_sweep.add_argument("--out", metavar="PATH",
                         help="CSV output path, default sweep_<kind>.csv")
    p_sweep.add_argument("--axis-min", type=float, dest="axis_min", metavar="X")
    p_sweep.add_argument("--axis-max", type=float, dest="axis_max", metavar="X")
    p_sweep.add_argument("--axis-steps", type=int, dest="axis_steps", metavar="N")
    p_sweep.add_argument("--axis2-min", type=float, dest="axis2_min", metavar="X",
                         help="second axis (map2d only)")
    p_sweep.add_argument("--axis2-max", type=float, dest="axis2_max", metavar="X")
    p_sweep.add_argument("--axis2-steps", type=int, dest="axis2_steps", metavar="N")
    p_sweep.add_argument("--no-figure", action="store_true",
                         help="skip the rendered figure")
    p_sweep.set_defaults(handler=cmd_sweep)

    p_val = sub.add_parser("validate", parents=[common],
                           help="check a numerical oracle against the closed forms")
    p_val.add_argument("mode", choices=("mc", "quadrature", "correlator"))
    p_val.set_defaults(handler=cmd_validate)

    p_thr = sub.add_parser("threshold", parents=[common],
                           help="Bell-test Purcell threshold and delay window")
    p_thr.set_defaults(handler=cmd_threshold)
    return parser


def _load(args: argparse.Namespace) -> RunConfig:
    values = load_config_file(args.config) if args.config else {}
    cfg = RunConfig(values)
    for dest, key in _OVERRIDES:
        value = getattr(args, dest, None)
        if value is not None:
            cfg.override(key, value)
    # force early validation so bad values exit 2 before any work happens
    cfg.emitter()
    cfg.optics()
    return cfg


def cmd_visibility(args: argparse.Namespace, cfg: RunConfig) -> int:
    rates = derive_rates(cfg.emitter())
    optics = cfg.optics()
    result = visibility(rates, optics)
    payload = {
        "v": result.v,
        "envelope_prefactor": result.envelope_prefactor,
        "bracket": result.bracket,
        "max_visibility": max_visibility(rates),
        "p12_phase_0": coincidence_probability(rates, optics, 0.0).p12,
        "p12_phase_half_pi": coincidence_probability(rates, optics, math.pi / 2).p12,
        "p12_phase_pi": coincidence_probability(rates, optics, math.pi).p12,
        "warnings": validate_config(optics, rates),
    }
    _emit(payload, args.json)
    return 0


def _axis_override(kind: str, args: argparse.Namespace):
    lo, hi, n = _AXIS_DEFAULTS[kind]
    lo = args.axis_min if args.axis_min is not None else lo
    hi = args.axis_max if args.axis_max is not None else hi
    n = args.axis_steps if args.axis_steps is not None else n
    axis = (lo, hi, n)
    axis2 = None
    if kind == "map2d":
        lo2 = args.axis2_min if args.axis2_min is not None else axis[0]
        hi2 = args.axis2_max if args.axis2_max is not None else axis[1]
        n2 = args.axis2_steps if args.axis2_steps is not None else axis[2]
        axis2 = (lo2, hi2, n2)
    return axis, axis2


def cmd_sweep(args: argparse.Namespace, cfg: RunConfig) -> int:
    axis, axis2 = _axis_override(args.kind, args)
    spec = SweepSpec(kind=args.kind, emitter=cfg.emitter(), optics=cfg.optics(),
                     axis=axis, axis2=axis2, threshold_line=cfg.target)
    result = run_sweep(spec)
    out = Path(args.out) if args.out else Path(f"sweep_{args.kind}.csv")
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            for key, value in result.metadata.items():
                fh.write(f"# {key} = {_fmt(value)}\n")
            fh.write(",".join(result.columns) + "\n")
            for record in result.records:
                fh.write(",".join(f"{x:.9g}" for x in record) + "\n")
    except OSError as exc:
        print(f"error: cannot write {out}: {exc}", file=sys.stderr)
        return 3
    print(f"wrote {len(result.records)} records to {out}")
    if not args.no_figure:
        from . import plotting  # deferred: pulls in matplotlib

        fig_path = out.with_suffix(".png")
        try:
            plotting.render_sweep_figure(result, fig_path)
        except OSError as exc:
            print(f"error: cannot write {fig_path}: {exc}", file=sys.stderr)
            return 3
        print(f"wrote figure to {fig_path}")
    return 0


def cmd_validate(args: argparse.Namespace, cfg: RunConfig) -> int:
    rates = derive_rates(cfg.emitter())
    optics = cfg.optics()
    if args.mode == "correlator":
        if rates.gamma == 0.0:
            raise ConfigError("correlator validation needs a finite t2_star")
        lags = default_correlator_lags(rates.gamma)
        reports = correlator_check(rates.gamma, lags, cfg.samples, cfg.seed)
        fitted = fitted_decay_rate(lags, [r.estimate for r in reports],
                                   [r.std_error for r in reports])
        payload = {
            "lags_ps": [f"{l:.9g}" for l in lags],
            "estimates": [r.estimate for r in reports],
            "std_errors": [r.std_error for r in reports],
            "closed_forms": [r.closed_form for r in reports],
            "z_scores": [r.z_score for r in reports],
            "fitted_gamma": fitted,
            "gamma": rates.gamma,
            "n_samples": cfg.samples,
        }
        ok = all(abs(r.z_score) < 4.0 for r in reports)
        if args.json:
            print(json.dumps(payload))
        else:
            print(f"{'lag_ps':>14} {'estimate':>13} {'std_error':>12} "
                  f"{'closed':>13} {'z':>8}")
            for lag, rep in zip(lags, reports):
                print(f"{lag:>14.6g} {rep.estimate:>13.6g} {rep.std_error:>12.3g} "
                      f"{rep.closed_form:>13.6g} {rep.z_score:>8.2f}")
            print(f"fitted_gamma = {fitted:.9g} (true {rates.gamma:.9g}, "
                  f"rel err {abs(fitted - rates.gamma) / rates.gamma:.3g})")
            print(f"correlator check: {'PASS' if ok else 'FAIL'}")
        return 0 if ok else 1

    grid = default_grid(rates, optics, cfg.grid_divisor, cfg.grid_span_lifetimes)
    phase = cfg.fringe_phase()
    if args.mode == "quadrature":
        value = quadrature_coincidence(rates, optics, phase, grid)
        closed = coincidence_probability(rates, optics, phase).p12
        if closed != 0.0:
            rel = abs(value - closed) / abs(closed)
        else:
            rel = 0.0 if value == closed else math.inf
        ok = rel < 1e-4
        payload = {"p12_quadrature": value, "p12_closed_form": closed,
                   "relative_error": rel, "phase": phase,
                   "grid_points": grid.n_points, "passed": ok}
        _emit(payload, args.json)
        return 0 if ok else 1

    report = mc_coincidence(rates, optics, phase, grid, cfg.samples, cfg.seed)
    ok = abs(report.z_score) < 4.0
    payload = {"estimate": report.estimate, "std_error": report.std_error,
               "closed_form": report.closed_form, "z_score": report.z_score,
               "n_samples": report.n_samples, "phase": phase,
               "seed": cfg.seed, "passed": ok}
    _emit(payload, args.json)
    return 0 if ok else 1


def cmd_threshold(args: argparse.Namespace, cfg: RunConfig) -> int:
    emitter = cfg.emitter()
    rates = derive_rates(emitter)
    f_star = chsh_threshold_purcell(emitter, cfg.target)
    payload = {
        "purcell_threshold": f_star,
        "target": cfg.target,
        "max_visibility_at_f": max_visibility(rates),
        "wavelength_nm": cfg.wavelength_nm,
        "window_ps": None,
        "window_mm": None,
        "window_wavelengths": None,
    }
    status = 0
    if cfg.wavelength_nm is not None:
        try:
            delta, n_wavelengths = delay_tolerance_window(
                rates, cfg.optics(), cfg.target, cfg.wavelength_nm)
            payload["window_ps"] = delta
            payload["window_mm"] = delta * C_MM_PER_PS
            payload["window_wavelengths"] = n_wavelengths
        except EmptyWindowError as exc:
            payload["window_ps"] = 0.0
            payload["window_mm"] = 0.0
            payload["window_wavelengths"] = 0.0
            if not args.json:
                print(f"warning: {exc}", file=sys.stderr)
            status = 1
    if args.json:
        print(json.dumps(payload))
    else:
        _emit({k: v for k, v in payload.items() if v is not None}, False)
    return status


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load(args)
        return args.handler(args, cfg)
    except (ConfigError, ParameterError, GridTooCoarseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (UnreachableTargetError, EmptyWindowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
