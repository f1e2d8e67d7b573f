"""Command-line front end.

Subcommands:
    limit-cycle   print the designed gait cycle and its open-loop spectrum
    design-gains  print stabilizer gains and write a flat gains JSON file
    simulate      run the scenario; write trace/steps CSVs, SVG figures,
                  and a summary
    analyze       regenerate figures and summary from existing CSVs

Exit codes: 0 success, 2 validation/configuration, 3 solver failure,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import glob
import os
import sys
from typing import Optional, Sequence

from .config import OUTPUT_FORMATS, ControllerSpec, ScenarioConfig, load_config
from .errors import (
    ConfigError,
    ConstraintViolationError,
    InvalidArgumentError,
    InvalidPolesError,
    SolverFailureError,
    UncontrollableError,
)
from .figures import render_com_figure, render_phase_figure, render_steplen_figure
from .output import (
    read_csv_columns,
    run_summary,
    write_gains_json,
    write_steps_csv,
    write_text,
    write_trace_csv,
)
from .stabilizer import Gains, lqr_gains, pole_place, solve_dare
from .step_map import build_step_matrices, is_controllable, open_loop_eigenvalues


def _r_label(R: float) -> str:
    return format(R, "g").replace("+", "")


def _parse_formats(arg: Optional[str], default: tuple[str, ...]) -> tuple[str, ...]:
    if arg is None:
        return default
    formats = tuple(dict.fromkeys(part.strip() for part in arg.split(",") if part.strip()))
    if not formats or any(f not in OUTPUT_FORMATS for f in formats):
        raise ConfigError(f"--format must be a comma list from {OUTPUT_FORMATS}")
    return formats


def _poles_str(z: complex) -> str:
    if z.imag == 0.0:
        return f"{z.real:.4f}"
    return f"{z.real:.4f}{z.imag:+.4f}j"


def _cmd_limit_cycle(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    out, formats = _resolve_out(args, cfg)
    cycle, params = cfg.cycle, cfg.params
    M = build_step_matrices(params, cycle.T_c)
    lam_hi, lam_lo = open_loop_eigenvalues(M)
    ctrb = is_controllable(M)
    print("limit cycle design")
    print(f"  L_c   = {cycle.L_c:.4f} m")
    print(f"  T_c   = {cycle.T_c:.4f} s")
    print(f"  omega = {params.omega:.4f} 1/s")
    print(f"  x_c   = ({cycle.x_c.x:.4f} m, {cycle.x_c.xdot:.4f} m/s)")
    print(f"  open-loop eigenvalues = ({lam_hi:.4f}, {lam_lo:.4f})")
    print(f"  controllable: {'yes' if ctrb else 'no'} (det[B, AB] = {ctrb.determinant:.4f})")
    if args.out is not None and "csv" in formats:
        rows = [
            ("L_c", cycle.L_c),
            ("T_c", cycle.T_c),
            ("omega", params.omega),
            ("x_c", cycle.x_c.x),
            ("xdot_c", cycle.x_c.xdot),
            ("eig_max", lam_hi),
            ("eig_min", lam_lo),
            ("ctrb_det", ctrb.determinant),
        ]
        text = "quantity,value\n" + "\n".join(f"{k},{repr(float(v))}" for k, v in rows) + "\n"
        write_text(os.path.join(out, "limit_cycle.csv"), text)
        print(f"  wrote {os.path.join(out, 'limit_cycle.csv')}")
    return 0


def _design_one(
    spec: ControllerSpec, M, R: Optional[float]
) -> tuple[Gains, dict, list[str]]:
    if spec.kind == "pole-place":
        assert spec.poles is not None
        gains = pole_place(M, spec.poles[0], spec.poles[1])
        payload = {"kind": "pole-place"}
        extra: list[str] = []
    else:
        weights = spec.weights(R if R is not None else spec.R_values[0])
        sol = solve_dare(M, weights)
        gains = lqr_gains(M, weights)
        payload = {
            "kind": "lqr",
            "R": weights.R,
            "q11": weights.Q[0, 0],
            "q12": weights.Q[0, 1],
            "q21": weights.Q[1, 0],
            "q22": weights.Q[1, 1],
            "dare_residual": sol.residual,
            "dare_iterations": sol.iterations,
        }
        extra = [
            f"  DARE residual   = {sol.residual:.3e} after {sol.iterations} iterations"
        ]
    l1, l2 = gains.closed_loop_poles
    payload.update(
        {
            "k1": gains.k1,
            "k2": gains.k2,
            "lambda1_real": l1.real,
            "lambda1_imag": l1.imag,
            "lambda2_real": l2.real,
            "lambda2_imag": l2.imag,
        }
    )
    return gains, payload, extra


def _cmd_design_gains(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    spec = cfg.controller
    if spec.kind == "none":
        raise ConfigError("controller.kind is 'none'; nothing to design")
    M = build_step_matrices(cfg.params, cfg.cycle.T_c)
    out, formats = _resolve_out(args, cfg)
    r_values: tuple[Optional[float], ...] = (
        spec.R_values if spec.kind == "lqr" else (None,)
    )
    multi = len(r_values) > 1
    for R in r_values:
        gains, payload, extra = _design_one(spec, M, R)
        l1, l2 = gains.closed_loop_poles
        radius = max(abs(l1), abs(l2))
        print(spec.describe(R))
        print(f"  k1 = {gains.k1:.4f}, k2 = {gains.k2:.4f}")
        print(
            f"  closed-loop eigenvalues = ({_poles_str(l1)}, {_poles_str(l2)}),"
            f" spectral radius = {radius:.4f}"
        )
        for line in extra:
            print(line)
        name = f"gains_R{_r_label(R)}.json" if multi else "gains.json"
        path = os.path.join(out, name)
        write_gains_json(path, payload)
        print(f"  wrote {path}")
    return 0


def _controller_runs(cfg: ScenarioConfig, M) -> list[tuple[Optional[str], Optional[Gains], str]]:
    """(R label, gains, descriptor) per run; one entry unless lqr has many R."""
    spec = cfg.controller
    if spec.kind == "none":
        return [(None, None, "none")]
    if spec.kind == "pole-place":
        assert spec.poles is not None
        gains = pole_place(M, spec.poles[0], spec.poles[1])
        return [(None, gains, spec.describe())]
    runs = []
    for R in spec.R_values:
        gains = lqr_gains(M, spec.weights(R))
        runs.append((_r_label(R), gains, spec.describe(R)))
    return runs


def _cmd_simulate(args: argparse.Namespace) -> int:
    from .simulation import simulate

    cfg = load_config(args.config)
    out, formats = _resolve_out(args, cfg)
    M = build_step_matrices(cfg.params, cfg.cycle.T_c)
    runs = _controller_runs(cfg, M)
    multi = len(runs) > 1

    step_files: list[tuple[str, str]] = []  # (label, path)
    for idx, (label, gains, descriptor) in enumerate(runs):
        trace = simulate(
            cfg.params,
            cfg.cycle,
            gains,
            disturbances=cfg.disturbances,
            n_steps=cfg.run.n_steps,
            sample_rate=cfg.run.sample_rate_hz,
            controller_label=descriptor,
        )
        if idx == 0:
            write_trace_csv(os.path.join(out, "trace.csv"), trace)
            write_steps_csv(os.path.join(out, "steps.csv"), trace)
        if multi:
            assert label is not None
            path = os.path.join(out, f"steps_R{label}.csv")
            write_steps_csv(path, trace)
            step_files.append((f"R={label}", path))
        print(f"run: {descriptor} ({cfg.run.n_steps} steps)")

    _emit_figures(out, formats, step_files)
    steps = read_csv_columns(os.path.join(out, "steps.csv"))
    summary = run_summary(steps)
    write_text(os.path.join(out, "summary.txt"), summary)
    print(summary, end="")
    return 0


def _emit_figures(out: str, formats: tuple[str, ...], step_files: list[tuple[str, str]]) -> None:
    if "svg" not in formats:
        return
    trace = read_csv_columns(os.path.join(out, "trace.csv"))
    steps = read_csv_columns(os.path.join(out, "steps.csv"))
    write_text(os.path.join(out, "fig2_com.svg"), render_com_figure(trace))
    write_text(os.path.join(out, "fig3_phase.svg"), render_phase_figure(trace, steps))
    if len(step_files) > 1:
        series = [(label, read_csv_columns(path)) for label, path in step_files]
        write_text(os.path.join(out, "fig4_steplen.svg"), render_steplen_figure(series))


def _find_step_files(out: str) -> list[tuple[str, str]]:
    found = []
    for path in glob.glob(os.path.join(out, "steps_R*.csv")):
        base = os.path.basename(path)
        label = base[len("steps_R") : -len(".csv")]
        found.append((float(label), f"R={label}", path))
    found.sort()
    return [(label, path) for _value, label, path in found]


def _cmd_analyze(args: argparse.Namespace) -> int:
    out = args.out
    if out is None:
        raise ConfigError("analyze requires --out pointing at a simulate output directory")
    formats = _parse_formats(args.format, ("csv", "svg"))
    _emit_figures(out, formats, _find_step_files(out))
    steps = read_csv_columns(os.path.join(out, "steps.csv"))
    summary = run_summary(steps)
    write_text(os.path.join(out, "summary.txt"), summary)
    print(summary, end="")
    return 0


def _resolve_out(args: argparse.Namespace, cfg: ScenarioConfig) -> tuple[str, tuple[str, ...]]:
    out = args.out if args.out is not None else cfg.run.output_dir
    formats = _parse_formats(args.format, cfg.run.formats)
    return out, formats


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lipgait",
        description="Limit-cycle walking of a linear inverted pendulum: "
        "cycle design, step-length stabilizers, push-recovery simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func, needs_config in (
        ("limit-cycle", _cmd_limit_cycle, True),
        ("design-gains", _cmd_design_gains, True),
        ("simulate", _cmd_simulate, True),
        ("analyze", _cmd_analyze, False),
    ):
        p = sub.add_parser(name)
        if needs_config:
            p.add_argument("--config", required=True, help="scenario TOML file")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--format", default=None, help="comma list: csv,svg")
        p.set_defaults(func=func)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (
        ConfigError,
        ConstraintViolationError,
        InvalidArgumentError,
        InvalidPolesError,
        UncontrollableError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverFailureError as exc:
        print(f"solver failure: {exc} (residual {exc.residual:.3e})", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
