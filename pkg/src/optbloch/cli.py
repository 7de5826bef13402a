"""Command-line front end.

Exit status: 0 on success, 1 on a domain/validation failure or I/O error,
2 on a usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import analytic, numeric, output, presets, sweep
from .core import GROUND, BlochError, BlochVector, SystemParams, validate_physicality

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _initial(text: str) -> BlochVector:
    if text == "ground":
        return GROUND
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad initial state {text!r}") from None
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("initial state needs three comma-separated numbers")
    return BlochVector(*parts)


def _add_params(ap, omega_required=True):
    ap.add_argument("--t1", type=float, required=True, help="population-relaxation time T1")
    ap.add_argument("--t2", type=float, required=True, help="decoherence time T2")
    ap.add_argument("--omega", type=float, required=omega_required, default=0.0, help="Rabi frequency")
    ap.add_argument("--delta", type=float, default=0.0, help="detuning")
    ap.add_argument("--r3tilde", type=float, default=0.0, help="field-free equilibrium R3")
    ap.add_argument("--phi", type=float, default=0.0, help="field phase (radians)")


def _params(args) -> SystemParams:
    return SystemParams.make(args.t1, args.t2, args.omega, args.r3tilde, args.delta, args.phi)


def _paths(prefix: str, *suffixes: str) -> list[Path]:
    base = Path(prefix)
    if base.parent and not base.parent.exists():
        raise OSError(f"output directory {str(base.parent)!r} does not exist")
    return [base.with_name(base.name + s) for s in suffixes]


def _regime(p: SystemParams):
    return analytic.classify_regime(p).value if p.Delta == 0.0 else None


def _equilibrium_meta(p: SystemParams) -> dict:
    R_lin = numeric.steady_state(p)
    meta = {"R_eq_linear_solve": list(R_lin)}
    if p.Delta == 0.0:
        R, rho = analytic.equilibrium_state(p)
        meta.update(
            R_eq=list(R),
            rho11_eq=rho.rho11,
            rho22_eq=rho.rho22,
            rho12_eq=rho.rho12,
            abs_rho12_eq=abs(rho.rho12),
            zeta_eq=abs(rho.rho12) ** 2,
        )
    return meta


def cmd_simulate(args) -> int:
    p = _params(args)
    R0 = args.initial
    if args.backend == "analytic" and p.Delta != 0.0:
        raise BlochError("the analytic backend requires --delta 0; use --backend numeric")
    axis = sweep.GridAxis.linear(0.0, args.t_max, args.n_time)
    table = sweep.time_series(p, R0, axis, sweep.SERIES_COLUMNS, backend=args.backend)
    if args.backend == "analytic":
        c = analytic.solve_coefficients(p, R0)

        def refine(s):
            return float(sweep.measure(analytic.evaluate_array(c, p, R0, [s]), "zeta")[0])

    else:
        refine = None
    revivals = sweep.detect_revivals(table["t"], table["zeta"], args.threshold, refine=refine)
    csv_path, json_path = _paths(args.out or "simulate", ".csv", ".json")
    output.write_csv(csv_path, table)
    meta = {
        "command": "simulate",
        "backend": args.backend,
        "params": p.as_dict(),
        "initial": list(R0),
        "physicality": validate_physicality(p).as_dict(),
        "regime": _regime(p),
        "equilibrium": _equilibrium_meta(p),
        "revivals": revivals.as_dict(),
        "time_axis": axis.as_dict(),
    }
    output.write_json(json_path, meta)
    print(f"wrote {csv_path} and {json_path}")
    return EXIT_OK


def _map_outputs(fmap, prefix, levels, v_min, v_max, meta):
    d_lo, d_hi = sweep.DEFAULT_SCALES[fmap.observable]
    v_min = d_lo if v_min is None else v_min
    v_max = d_hi if v_max is None else v_max
    shades = sweep.quantize_grayscale(fmap, levels, v_min, v_max)
    csv_path, pgm_path, json_path = _paths(prefix, ".csv", ".pgm", ".json")
    output.write_csv(csv_path, output.field_map_columns(fmap))
    output.write_pgm(pgm_path, sweep.gray_values(shades, levels))
    meta.update(
        observable=fmap.observable,
        params=fmap.params,
        grid={
            "x": {"name": "t", **fmap.x_axis.as_dict()},
            "y": {"name": fmap.y_name, **fmap.y_axis.as_dict()},
            "shape": list(fmap.values.shape),
        },
        quantization={
            "levels": levels,
            "v_min": v_min,
            "v_max": v_max,
            "shade_0": "darkest (value >= v_max)",
            "gray": "round(255*k/levels), 0 = black",
        },
        pgm={"format": "P5", "maxval": 255, "row_major": True, "y_axis": "increasing upward"},
    )
    output.write_json(json_path, meta)
    print(f"wrote {csv_path}, {pgm_path} and {json_path}")


def cmd_sweep(args) -> int:
    p = _params(args)
    if p.Delta != 0.0:
        raise BlochError("sweeps use the closed-form solution and require --delta 0")
    n = args.grid
    time_axis = sweep.GridAxis.linear(0.0, args.t_max, n)
    if args.axis == "omega":
        lo = args.y_min if args.y_min is not None else 0.0
        y_axis = sweep.GridAxis.linear(lo, args.y_max if args.y_max is not None else 6.0, n)
        fmap = sweep.sweep_omega_time(p, y_axis, time_axis, args.observable, args.initial, args.workers)
    else:
        hi = args.y_max if args.y_max is not None else sweep.logT2_cap(p.T1)
        y_axis = sweep.GridAxis.log10(args.y_min if args.y_min is not None else -2.0, hi, n)
        fmap = sweep.sweep_logT2_time(p, y_axis, time_axis, args.observable, args.initial, args.workers)
    meta = {"command": "sweep", "backend": "analytic", "initial": list(args.initial)}
    _map_outputs(fmap, args.out or "sweep", args.levels, args.v_min, args.v_max, meta)
    return EXIT_OK


def cmd_figure(args) -> int:
    preset = presets.PRESETS.get(args.name)
    if preset is None:
        print(f"unknown figure {args.name!r}; choose from {', '.join(presets.PRESETS)}", file=sys.stderr)
        return EXIT_USAGE
    prefix = args.out or args.name
    meta = {
        "command": "figure",
        "figure": preset.name,
        "description": preset.description,
        "initial": list(GROUND),
    }
    y_range = tuple(args.y_range) if args.y_range else None
    t_range = tuple(args.t_range) if args.t_range else None
    if preset.kind == "time_series":
        table = presets.render(
            preset.name, n_time=args.n_time, backend=args.backend, t_range=t_range
        )
        csv_path, json_path = _paths(prefix, ".csv", ".json")
        output.write_csv(csv_path, table)
        meta.update(
            backend=args.backend,
            params=preset.base,
            curves=list(preset.curves),
            columns=list(table),
            time_axis={"min": float(table["t"][0]), "max": float(table["t"][-1]), "n": len(table["t"])},
        )
        output.write_json(json_path, meta)
        print(f"wrote {csv_path} and {json_path}")
        return EXIT_OK
    if args.backend != "analytic":
        raise BlochError("map figures are evaluated with the analytic backend only")
    fmap = presets.render(
        preset.name, grid=args.grid, workers=args.workers, y_range=y_range, t_range=t_range
    )
    meta["backend"] = "analytic"
    _map_outputs(fmap, prefix, args.levels, None, None, meta)
    return EXIT_OK


def cmd_steady_state(args) -> int:
    p = _params(args)
    meta = {
        "command": "steady-state",
        "params": p.as_dict(),
        "physicality": validate_physicality(p).as_dict(),
        "regime": _regime(p),
        **_equilibrium_meta(p),
    }
    omega_r, max_coh = analytic.optimal_rabi(p.T1, p.T2, p.R3_tilde)
    meta.update(Omega_r=omega_r, max_abs_rho12_eq=max_coh)
    if p.Delta == 0.0:
        meta["relation_residual"] = analytic.equilibrium_relation_residual(p)
    text = output.dumps(meta)
    if args.out:
        (path,) = _paths(args.out, "")
        path.write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_validate(args) -> int:
    report = validate_physicality(args.t1, args.t2, args.r3tilde)
    text = output.dumps({"command": "validate", **report.as_dict()})
    if args.out:
        (path,) = _paths(args.out, "")
        path.write_text(text)
    sys.stdout.write(text)
    for v in report.violations:
        print(v, file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAIL


def _positive_int(text):
    n = int(text)
    if n < 2:
        raise argparse.ArgumentTypeError("must be >= 2")
    return n


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="optbloch",
        description="Driven, damped two-level system: closed-form and RK4 trajectories plus parameter maps.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="time series of one parameter set (CSV + JSON)")
    _add_params(sim)
    sim.add_argument("--initial", type=_initial, default=GROUND, help="'ground' or R1,R2,R3")
    sim.add_argument("--backend", choices=("analytic", "numeric"), default="analytic")
    sim.add_argument("--t-max", type=float, default=10.0)
    sim.add_argument("--n-time", type=_positive_int, default=1001)
    sim.add_argument("--threshold", type=float, default=sweep.DEFAULT_REVIVAL_THRESHOLD,
                     help="zeta level for revival detection")
    sim.add_argument("--out", help="output path prefix (default: ./simulate)")
    sim.set_defaults(func=cmd_simulate)

    sw = sub.add_parser("sweep", help="parameter x time map (CSV + PGM + JSON)")
    _add_params(sw, omega_required=False)
    sw.add_argument("--axis", choices=("omega", "logT2"), default="omega")
    sw.add_argument("--y-min", type=float, default=None)
    sw.add_argument("--y-max", type=float, default=None)
    sw.add_argument("--t-max", type=float, default=4.0)
    sw.add_argument("--grid", type=_positive_int, default=200, help="samples per axis")
    sw.add_argument("--observable", choices=sweep.MAP_OBSERVABLES, default="zeta")
    sw.add_argument("--initial", type=_initial, default=GROUND)
    sw.add_argument("--levels", type=_positive_int, default=sweep.DEFAULT_LEVELS)
    sw.add_argument("--v-min", type=float, default=None)
    sw.add_argument("--v-max", type=float, default=None)
    sw.add_argument("--workers", type=int, default=1)
    sw.add_argument("--out", help="output path prefix (default: ./sweep)")
    sw.set_defaults(func=cmd_sweep)

    fig = sub.add_parser("figure", help="regenerate a built-in figure preset")
    fig.add_argument("--name", required=True, help=", ".join(presets.PRESETS))
    fig.add_argument("--grid", type=_positive_int, default=200)
    fig.add_argument("--n-time", type=_positive_int, default=1001)
    fig.add_argument("--y-range", type=float, nargs=2, metavar=("LO", "HI"))
    fig.add_argument("--t-range", type=float, nargs=2, metavar=("LO", "HI"))
    fig.add_argument("--levels", type=_positive_int, default=sweep.DEFAULT_LEVELS)
    fig.add_argument("--workers", type=int, default=1)
    fig.add_argument("--backend", choices=("analytic", "numeric"), default="analytic")
    fig.add_argument("--out", help="output path prefix (default: ./<name>)")
    fig.set_defaults(func=cmd_figure)

    ss = sub.add_parser("steady-state", help="equilibrium state and optimal Rabi frequency (JSON)")
    _add_params(ss)
    ss.add_argument("--out", help="also write the JSON here")
    ss.set_defaults(func=cmd_steady_state)

    val = sub.add_parser("validate", help="physicality report (JSON); exit 1 on violation")
    val.add_argument("--t1", type=float, required=True)
    val.add_argument("--t2", type=float, required=True)
    val.add_argument("--r3tilde", type=float, default=0.0)
    val.add_argument("--out", help="also write the JSON here")
    val.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except (BlochError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
