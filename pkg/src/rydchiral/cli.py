"""Command-line entry point: ``rydchiral <command> --config run.yaml``.

Exit codes: 0 success, 1 configuration error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import cmath
import json
import math
import sys

import numpy as np

from . import chiral_shift as cs
from .config import ConfigError, load_config
from .dressed_states import TWO_PI, AmbiguousMatch, DegenerateEigenvectors
from .ramsey_sim import InsufficientSpan, SequenceSpec, export_trace, fringe_metrics, simulate_sequence
from .scan import EmptyScan, ScanGrid, export_scan, find_optimal_regions, run_scan

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2

GREEN_RTOL = 1e-4


class NumericalFailure(RuntimeError):
    pass


def _fmt(x) -> str:
    return "inf" if x == math.inf else ("nan" if x != x else f"{x:.6g}")


def cmd_dressed_scan(args) -> int:
    cfg = load_config(args.config)
    cfg.require("dressing", "scan")
    sc = cfg.scan
    grid = ScanGrid(tuple(sc.delta1_hz), tuple(sc.delta2_hz), cfg.dressing_config(), sc.delta_rm_hz,
                    fringe_period=sc.fom_convention == "fringe_period")
    result = run_scan(grid, workers=args.workers)
    if args.out:
        export_scan(result, args.out)
    try:
        best = find_optimal_regions(result, sc.top_fraction)
    except EmptyScan as exc:
        raise NumericalFailure(str(exc)) from None
    n_bad = int((~result.ok).sum())
    if args.json:
        print(json.dumps({"n_points": int(result.ok.size), "n_masked": n_bad,
                          "n_optimal": len(best),
                          "optimal": [dict(delta1_hz=a, delta2_hz=b, fom=f) for a, b, f in best[:5]]}))
    else:
        print(f"# {result.ok.size} points, {n_bad} masked, {len(best)} within "
              f"{sc.top_fraction:g} of the maximum figure of merit")
        print("delta1_hz,delta2_hz,fom")
        for a, b, f in best[:5]:
            print(f"{a!r},{b!r},{f!r}")
    return EXIT_OK


def chiral_report(cfg) -> dict:
    cfg.require("chiral")
    ch = cfg.chiral
    r = cmath.rect(ch.r_mag, ch.r_phase_rad)
    try:
        setup = cs.ChiralSetup(ch.v_mps, ch.d_cm, TWO_PI * ch.omega_nk_hz, ch.z_a_m, r)
    except ValueError as exc:
        raise ConfigError(f"chiral: {exc}") from None
    d_nk = cs.canonical_dipole(ch.d_cm).conj()
    closed = cs.closed_form_shift(setup)
    analytic = cs.resonant_chiral_shift(setup, d_nk, "analytic")
    try:
        numeric = cs.resonant_chiral_shift(setup, d_nk, "numeric")
    except cs.QuadratureNotConverged as exc:
        raise NumericalFailure(f"Green tensor quadrature failed: {exc}") from None
    ordinary = cs.ordinary_electric_shift(ch.d_cm, ch.z_a_m)
    ratio = closed / ordinary if ordinary else math.nan
    rel = abs(numeric - analytic) / abs(analytic) if analytic else abs(numeric - analytic)
    return {
        "closed_form_shift_hz": closed / TWO_PI,
        "resonant_shift_analytic_hz": analytic / TWO_PI,
        "resonant_shift_numeric_hz": numeric / TWO_PI,
        "numeric_analytic_rel_diff": rel,
        "ordinary_shift_hz": ordinary / TWO_PI,
        "ratio_chiral_to_ordinary": ratio,
        "ratio_4v_over_c": 4.0 * ch.v_mps / setup.constants.c,
        "helix_orbital_speed_n1_mps": cs.orbital_speed(1),
        "retardation_parameter": setup.retardation,
        "nonretarded": setup.nonretarded,
    }


def cmd_chiral_shift(args) -> int:
    report = chiral_report(load_config(args.config))
    if args.json:
        print(json.dumps(report))
    else:
        width = max(map(len, report))
        for k, v in report.items():
            print(f"{k:<{width}}  {v if isinstance(v, bool) else _fmt(v)}")
    return EXIT_OK


def cmd_verify_green(args) -> int:
    cfg = load_config(args.config)
    cfg.require("chiral")
    ch = cfg.chiral
    r = cmath.rect(ch.r_mag, ch.r_phase_rad)
    omega = TWO_PI * ch.omega_nk_hz
    try:
        num = cs.curl_green_numeric(ch.z_a_m, omega, r)
    except cs.QuadratureNotConverged as exc:
        raise NumericalFailure(str(exc)) from None
    ana = cs.curl_green_analytic(ch.z_a_m, omega, r)
    scale = np.abs(ana).max()
    if scale == 0:
        diag_err = float(np.abs(num).max())
        off = 0.0
    else:
        d_num, d_ana = np.diag(num), np.diag(ana)
        diag_err = float(np.max(np.abs(d_num - d_ana) / np.abs(d_ana)))
        off = float(np.abs(num - np.diag(d_num)).max() / np.abs(d_num).max())
    ok = diag_err <= GREEN_RTOL and off <= 1e-6
    out = {"max_rel_diag_error": diag_err, "max_offdiag_ratio": off,
           "retardation_parameter": ch.z_a_m * omega / cs.CONSTANTS.c, "agree": ok}
    if args.json:
        print(json.dumps(out))
    else:
        for k, v in out.items():
            print(f"{k}: {v}")
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_ramsey(args) -> int:
    cfg = load_config(args.config)
    cfg.require("dressing", "ramsey")
    rs = cfg.ramsey
    times = np.linspace(rs.t_max_s / rs.n_points, rs.t_max_s, rs.n_points)
    spec = SequenceSpec(cfg.dressing_config(rs.delta1_hz, rs.delta2_hz), rs.delta_rm_hz,
                        rs.delta_achiral_hz, times, achiral_mode=rs.achiral_mode)
    trace = simulate_sequence(spec)
    if args.out:
        export_trace(trace, args.out)
    try:
        period, contrast = fringe_metrics(trace)
    except InsufficientSpan as exc:
        raise NumericalFailure(f"{exc}; raise ramsey.t_max_s (currently {rs.t_max_s!r} s)") from None
    expected = 2.0 * math.pi / trace.fringe_rate if trace.fringe_rate else math.inf
    if args.json:
        print(json.dumps({"fringe_period_s": _fmt(period) if math.isinf(period) else period,
                          "contrast_ratio": None if contrast != contrast else contrast,
                          "analytic_period_s": _fmt(expected) if math.isinf(expected) else expected}))
    else:
        print(f"fringe_period_s: {_fmt(period)}")
        print(f"contrast_ratio: {_fmt(contrast)}")
        print(f"analytic_period_s: {_fmt(expected)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rydchiral", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    def add(name, func, help, out=False):
        s = sub.add_parser(name, help=help)
        s.add_argument("--config", required=True, help="YAML run configuration")
        if out:
            s.add_argument("--out", help="CSV output path")
        s.add_argument("--json", action="store_true", help="machine-readable output")
        s.set_defaults(func=func)
        return s

    s = add("dressed-scan", cmd_dressed_scan, "detuning scan of shift and figure of merit", out=True)
    s.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    add("chiral-shift", cmd_chiral_shift, "chiral mirror shift estimates")
    add("ramsey", cmd_ramsey, "spin-echo Ramsey sequence", out=True)
    add("verify-green", cmd_verify_green, "quadrature vs nonretarded Green tensor check")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalFailure, DegenerateEigenvectors, AmbiguousMatch, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
