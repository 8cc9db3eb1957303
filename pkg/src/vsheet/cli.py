"""Command line entry point (``vsheet``)."""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .background import ConstantBackground, check_constraints, classify_regime, make_constant_background
from .config import load_background
from .errors import ConstraintViolation, DomainError, NumericalCheckFailure
from .modal import (
    _regime_of,
    _roots_for_pair,
    curves_for_pair,
    find_roots,
    trace_curves,
)
from .oracle import angle_scan, oracle_check
from .scans import count_scan_zeros, det_scan, region_csv, region_map, rows_to_csv, separation_report
from .symbols import Frequency, boundary_symbols, matrix_to_json, principal_symbol
from .triangular import case1_lower_bound, triangular_sweep

EXIT_OK, EXIT_CONSTRAINT, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    return x


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_json(args, obj) -> None:
    _emit(args, json.dumps(_jsonable(obj), indent=2) + "\n")


def _background(args) -> tuple[ConstantBackground, object]:
    if args.config:
        return load_background(args.config)
    return ConstantBackground(1.0, 3.0, 1.0, 0.0), None


def _freq(args) -> Frequency:
    g, d, e = args.freq
    return Frequency(g, d, e).normalized()


# ---------------------------------------------------------------------------
# Subcommands


def cmd_classify(args):
    cb, _ = _background(args)
    rc = classify_regime(cb, args.tol if args.tol is not None else 1e-8)
    bp = make_constant_background(cb)
    rep = check_constraints(bp)
    _emit_json(args, {
        "regime": rc.label, "stable": rc.stable, "c": cb.c, "v_bar": cb.v_bar, "F_bar": cb.F,
        "exclusion_values_v2": list(rc.exclusion_values), "supersonic_threshold_v2": 2 * cb.c**2 + cb.F**2,
        "constraints": {"max_rh": rep.max_rh, "max_eikonal": rep.max_eikonal, "passed": rep.passed},
    })


def cmd_roots(args):
    cb, _ = _background(args)
    rs = find_roots(make_constant_background(cb), cb.pressure)
    _emit_json(args, {
        "regime": classify_regime(cb).label,
        "velocity": list(rs.velocity),
        "elastic": [asdict(r) for r in rs.elastic],
        "expected_elastic": rs.expected_elastic,
        "anomaly": rs.anomaly,
    })


def cmd_poles(args):
    cb, _ = _background(args)
    bp = make_constant_background(cb)
    rs = _roots_for_pair(bp.right, bp.left, cb.pressure, _regime_of(bp))
    curves = [c for c in curves_for_pair(bp.right, bp.left, cb.pressure, rs) if c.family != "RootElastic"]
    _emit_json(args, {"curves": [asdict(c) for c in curves]})


def cmd_det_scan(args):
    cb, _ = _background(args)
    n = args.grid if args.grid is not None else 4096
    rows = det_scan(cb, cb.pressure, n=n, gamma=args.gamma, workers=args.workers,
                    tol=args.tol if args.tol is not None else 1e-6)
    if args.format == "json":
        zeros = count_scan_zeros(cb, rows, cb.pressure)
        _emit_json(args, {"rows": rows, "zeros": zeros})
    else:
        _emit(args, rows_to_csv(rows))


def cmd_region_map(args):
    from .svg import region_svg

    nv = args.grid if args.grid is not None else 161
    rm = region_map(tuple(args.v_range), tuple(args.F_range), (nv, args.F_grid),
                    rho_bar=args.rho_bar, tol=args.tol if args.tol is not None else 1e-8)
    if args.format == "svg":
        _emit(args, region_svg(rm))
    elif args.format == "json":
        _emit_json(args, {"v": rm.v, "F": rm.F, "labels": rm.labels(), "curves": rm.curves})
    else:
        _emit(args, region_csv(rm))


def cmd_separation(args):
    cb, pert = _background(args)
    _emit_json(args, separation_report(cb, pert, cb.pressure,
                                       tol=args.tol if args.tol is not None else 1e-6))


def cmd_triangular_check(args):
    cb, _ = _background(args)
    bp = make_constant_background(cb)
    n = args.grid if args.grid is not None else 1000
    res = triangular_sweep(bp, cb.pressure, n=n, seed=args.seed)
    c_lb = min(case1_lower_bound(bp.right, cb.pressure, 0.05), case1_lower_bound(bp.left, cb.pressure, 0.05))
    _emit_json(args, {
        "samples": res.samples, "skipped": res.skipped,
        "max_pattern_residual": res.max_pattern_residual, "worst_point": res.worst_point,
        "per_neighbourhood": res.per_kind, "measured_c_lower_bound": c_lb,
    })
    if not res.passed:
        raise NumericalCheckFailure(f"pattern residual {res.max_pattern_residual:.3e} above tolerance")


def cmd_oracle_check(args):
    cb, _ = _background(args)
    gamma = args.gamma if args.gamma > 0 else 0.05
    n = args.grid if args.grid is not None else 2048
    res = oracle_check(cb, cb.pressure, gamma=gamma, n=n)
    angle, skipped = angle_scan(cb, cb.pressure, n=500, seed=args.seed)
    _emit_json(args, {
        "gamma": gamma,
        "zero_match_report": [{"algebraic": a, "oracle": o, "distance": d} for a, o, d in res.zero_match_report],
        "max_zero_distance": res.max_zero_distance,
        "max_subspace_angle": angle, "abstentions": skipped,
    })


def cmd_trace(args):
    cb, pert = _background(args)
    if pert is None:
        from .background import PerturbationSpec

        pert = PerturbationSpec()
    n = args.grid if args.grid is not None else 21
    x2 = np.linspace(args.x2_range[0], args.x2_range[1], n)
    b = trace_curves(cb, pert, cb.pressure, x2, tuple(args.at))
    if args.format == "json":
        _emit_json(args, {"x2": x2, "at": b.at, "families": b.families, "speeds": b.speeds,
                          "anomalies": b.anomalies})
    else:
        labels = list(b.speeds)
        lines = [",".join(["x2"] + labels)]
        for j, h in enumerate(x2):
            lines.append(",".join([repr(float(h))] + [repr(float(b.speeds[k][j])) for k in labels]))
        _emit(args, "\n".join(lines) + "\n")


def _dump_symbols(args) -> None:
    cb, _ = _background(args)
    bp = make_constant_background(cb)
    f = _freq(args)
    freq = {"gamma": f.gamma, "delta": f.delta, "eta": f.eta}
    out = {"frequency": freq, "symbols": []}
    for side in ("r", "l"):
        sym = principal_symbol(bp.side(side), cb.pressure, f, bp.kappa0)
        out["symbols"].append({"name": f"A_{side}", **matrix_to_json(
            sym.data, side=side, degree=1, location=list(bp.location), frequency=freq)})
    bs = boundary_symbols(bp, f)
    for name, mat in (("b", bs.b), ("M", bs.Mmat), ("Pi", bs.Pi), ("beta", bs.beta)):
        out["symbols"].append({"name": name, **matrix_to_json(
            np.atleast_2d(mat), side=None, degree=None, location=list(bp.location), frequency=freq)})
    Path(args.dump_symbols).write_text(json.dumps(_jsonable(out), indent=1) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="background JSON file (default: supersonic example)")
    common.add_argument("--gamma", type=float, default=0.0, help="Re tau for scans")
    common.add_argument("--grid", type=int, help="number of grid points")
    common.add_argument("--tol", type=float, help="classification tolerance")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json", "svg"), default=None)
    common.add_argument("--dump-symbols", nargs="?", const="symbols.json", default=None, metavar="PATH",
                        help="also write the symbol matrices at --freq as JSON")
    common.add_argument("--freq", type=float, nargs=3, default=(0.2, 0.1, 1.0),
                        metavar=("GAMMA", "DELTA", "ETA"), help="frequency for --dump-symbols")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=1)

    p = argparse.ArgumentParser(prog="vsheet", description="Elastic vortex sheet stability toolkit")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn, helptext in (
        ("classify", cmd_classify, "regime report"),
        ("roots", cmd_roots, "velocity roots and elastic speeds"),
        ("poles", cmd_poles, "pole and glancing curves"),
        ("det-scan", cmd_det_scan, "Lopatinskii determinant scan"),
        ("region-map", cmd_region_map, "regime map over (v, |F|)"),
        ("separation", cmd_separation, "curve separation report"),
        ("triangular-check", cmd_triangular_check, "sampled triangularization check"),
        ("oracle-check", cmd_oracle_check, "independent ODE cross-check"),
        ("trace", cmd_trace, "curve speeds along x2"),
    ):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.set_defaults(func=fn)
        if name == "region-map":
            sp.add_argument("--v-range", type=float, nargs=2, default=(0.0, 4.0))
            sp.add_argument("--F-range", type=float, nargs=2, default=(0.0, 2.0))
            sp.add_argument("--F-grid", type=int, default=81)
            sp.add_argument("--rho-bar", type=float, default=1.0)
        if name == "trace":
            sp.add_argument("--x2-range", type=float, nargs=2, default=(0.0, 2.0))
            sp.add_argument("--at", type=float, nargs=2, default=(0.0, 0.0), metavar=("T", "X1"))
    return p


_DEFAULT_FORMAT = {"det-scan": "csv", "region-map": "svg", "trace": "csv"}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.format is None:
        args.format = _DEFAULT_FORMAT.get(args.command, "json")
    try:
        args.func(args)
        if args.dump_symbols:
            _dump_symbols(args)
    except (ConstraintViolation, DomainError) as exc:
        print(f"vsheet: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT
    except NumericalCheckFailure as exc:
        print(f"vsheet: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, json.JSONDecodeError) as exc:
        print(f"vsheet: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
