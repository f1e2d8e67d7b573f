"""Scenario configuration: a single TOML file describing walker, cycle,
controller, disturbances and run settings.

Loading is strict: unknown keys are rejected, every referenced domain
invariant (positive parameters, step-length bound, disturbance windows)
is checked immediately, and the gait cycle is designed up front so a bad
scenario fails before anything runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import ConfigError
from .lipm import WalkerParams
from .simulation import Disturbance
from .stabilizer import LqrWeights
from .step_map import GaitCycle, design_cycle

__all__ = ["ControllerSpec", "RunSpec", "ScenarioConfig", "load_config"]

CONTROLLER_KINDS = ("pole-place", "lqr", "none")
OUTPUT_FORMATS = ("csv", "svg")


def _check_keys(table: dict, allowed: tuple[str, ...], context: str) -> None:
    unknown = sorted(set(table) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) in {context}: {', '.join(unknown)}")


def _number(table: dict, key: str, context: str) -> float:
    try:
        value = table[key]
    except KeyError:
        raise ConfigError(f"missing key '{key}' in {context}") from None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{context}.{key} must be a number, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class ControllerSpec:
    """Which stabilizer to use and its design parameters.

    For "lqr" more than one R value may be given; commands then run one
    design (or one simulation) per value, which is how the step-length /
    convergence-speed trade-off figure is produced.
    """

    kind: str
    poles: Optional[tuple[complex, complex]] = None
    Q: Optional[np.ndarray] = None
    R_values: tuple[float, ...] = ()

    def weights(self, R: float) -> LqrWeights:
        assert self.Q is not None
        return LqrWeights(Q=self.Q.copy(), R=R)

    def describe(self, R: Optional[float] = None) -> str:
        if self.kind == "pole-place":
            assert self.poles is not None
            return f"pole-place poles=({_pole_str(self.poles[0])}, {_pole_str(self.poles[1])})"
        if self.kind == "lqr":
            q = self.Q
            assert q is not None
            qs = f"[[{q[0,0]:g}, {q[0,1]:g}], [{q[1,0]:g}, {q[1,1]:g}]]"
            return f"lqr Q={qs} R={R:g}"
        return "none"


def _pole_str(z: complex) -> str:
    if z.imag == 0.0:
        return f"{z.real:g}"
    return f"{z.real:g}{z.imag:+g}j"


@dataclass(frozen=True)
class RunSpec:
    n_steps: int = 20
    sample_rate_hz: float = 1000.0
    output_dir: str = "out"
    formats: tuple[str, ...] = ("csv", "svg")


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully validated scenario: every piece is ready to hand to the
    library (the cycle is already designed against the walker bounds)."""

    params: WalkerParams
    cycle: GaitCycle
    controller: ControllerSpec
    disturbances: tuple[Disturbance, ...] = ()
    run: RunSpec = field(default_factory=RunSpec)


def _parse_walker(table: dict) -> WalkerParams:
    _check_keys(table, ("h", "g", "m", "L_max"), "walker")
    return WalkerParams(
        h=_number(table, "h", "walker"),
        g=_number(table, "g", "walker"),
        m=_number(table, "m", "walker"),
        L_max=_number(table, "L_max", "walker"),
    )


def _parse_pole(entry: Any, context: str) -> complex:
    if isinstance(entry, bool):
        raise ConfigError(f"{context} must be a number or [re, im] pair")
    if isinstance(entry, (int, float)):
        return complex(float(entry), 0.0)
    if (
        isinstance(entry, list)
        and len(entry) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)
    ):
        return complex(float(entry[0]), float(entry[1]))
    raise ConfigError(f"{context} must be a number or [re, im] pair, got {entry!r}")


def _parse_controller(table: dict) -> ControllerSpec:
    _check_keys(table, ("kind", "poles", "Q", "R"), "controller")
    kind = table.get("kind")
    if kind not in CONTROLLER_KINDS:
        raise ConfigError(
            f"controller.kind must be one of {CONTROLLER_KINDS}, got {kind!r}"
        )
    if kind == "none":
        if set(table) - {"kind"}:
            raise ConfigError("controller.kind 'none' takes no other keys")
        return ControllerSpec(kind="none")
    if kind == "pole-place":
        if "Q" in table or "R" in table:
            raise ConfigError("Q/R are LQR settings; pole-place takes 'poles'")
        poles = table.get("poles")
        if not isinstance(poles, list) or len(poles) != 2:
            raise ConfigError("controller.poles must be a list of two poles")
        p1 = _parse_pole(poles[0], "controller.poles[0]")
        p2 = _parse_pole(poles[1], "controller.poles[1]")
        return ControllerSpec(kind="pole-place", poles=(p1, p2))
    # lqr
    if "poles" in table:
        raise ConfigError("'poles' is a pole-place setting; lqr takes Q and R")
    q_raw = table.get("Q", [[1.0, 0.0], [0.0, 1.0]])
    try:
        Q = np.array(q_raw, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError(f"controller.Q must be a 2x2 matrix, got {q_raw!r}") from None
    if Q.shape != (2, 2):
        raise ConfigError(f"controller.Q must be 2x2, got shape {Q.shape}")
    r_raw = table.get("R", 1.0)
    if isinstance(r_raw, bool):
        raise ConfigError("controller.R must be a number or list of numbers")
    if isinstance(r_raw, (int, float)):
        r_values: tuple[float, ...] = (float(r_raw),)
    elif isinstance(r_raw, list) and r_raw:
        for v in r_raw:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError(f"controller.R entries must be numbers, got {v!r}")
        r_values = tuple(float(v) for v in r_raw)
    else:
        raise ConfigError("controller.R must be a number or non-empty list of numbers")
    spec = ControllerSpec(kind="lqr", Q=Q, R_values=r_values)
    for r in r_values:
        spec.weights(r)  # validates Q symmetry/PSD and R > 0 now, not at run time
    return spec


def _parse_disturbance(table: dict, context: str) -> Disturbance:
    _check_keys(table, ("step", "phase", "F", "duration", "as_impulse"), context)
    as_impulse = table.get("as_impulse", False)
    if not isinstance(as_impulse, bool):
        raise ConfigError(f"{context}.as_impulse must be a boolean")
    step = table.get("step")
    if isinstance(step, bool) or not isinstance(step, int):
        raise ConfigError(f"{context}.step must be an integer")
    return Disturbance(
        step_index=step,
        phase=_number(table, "phase", context),
        F=_number(table, "F", context),
        duration=_number(table, "duration", context),
        as_impulse=as_impulse,
    )


def _parse_run(table: dict) -> RunSpec:
    _check_keys(table, ("n_steps", "sample_rate_hz", "output_dir", "formats"), "run")
    n_steps = table.get("n_steps", 20)
    if isinstance(n_steps, bool) or not isinstance(n_steps, int) or n_steps < 1:
        raise ConfigError(f"run.n_steps must be a positive integer, got {n_steps!r}")
    rate = table.get("sample_rate_hz", 1000.0)
    if isinstance(rate, bool) or not isinstance(rate, (int, float)) or rate <= 0:
        raise ConfigError(f"run.sample_rate_hz must be positive, got {rate!r}")
    out = table.get("output_dir", "out")
    if not isinstance(out, str):
        raise ConfigError(f"run.output_dir must be a string, got {out!r}")
    formats = table.get("formats", list(OUTPUT_FORMATS))
    if (
        not isinstance(formats, list)
        or not formats
        or any(f not in OUTPUT_FORMATS for f in formats)
    ):
        raise ConfigError(f"run.formats must be a non-empty subset of {OUTPUT_FORMATS}")
    return RunSpec(
        n_steps=n_steps,
        sample_rate_hz=float(rate),
        output_dir=out,
        formats=tuple(dict.fromkeys(formats)),
    )


def load_config(path: str) -> ScenarioConfig:
    """Parse and validate a scenario TOML file.

    Raises ConfigError for syntax problems, unknown keys and type errors;
    domain constructors raise their own validation errors (all of which
    the CLI reports as exit code 2).
    """
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from exc

    _check_keys(raw, ("walker", "cycle", "controller", "disturbances", "run"), "config")
    for section in ("walker", "cycle", "controller"):
        if section not in raw or not isinstance(raw[section], dict):
            raise ConfigError(f"missing [{section}] section")

    params = _parse_walker(raw["walker"])
    _check_keys(raw["cycle"], ("L_c", "T_c"), "cycle")
    cycle = design_cycle(
        params,
        L_c=_number(raw["cycle"], "L_c", "cycle"),
        T_c=_number(raw["cycle"], "T_c", "cycle"),
    )
    controller = _parse_controller(raw["controller"])

    dist_raw = raw.get("disturbances", [])
    if not isinstance(dist_raw, list) or any(not isinstance(d, dict) for d in dist_raw):
        raise ConfigError("disturbances must be an array of tables")
    disturbances = tuple(
        _parse_disturbance(d, f"disturbances[{i}]") for i, d in enumerate(dist_raw)
    )
    seen: set[int] = set()
    for d in disturbances:
        if not d.window_fits(cycle.T_c):
            raise ConfigError(
                f"disturbance window (phase={d.phase}, duration={d.duration}) "
                f"does not fit in a step of {cycle.T_c} s"
            )
        if d.step_index in seen:
            raise ConfigError(f"multiple disturbances target step {d.step_index}")
        seen.add(d.step_index)

    run = _parse_run(raw.get("run", {})) if isinstance(raw.get("run", {}), dict) else None
    if run is None:
        raise ConfigError("run must be a table")
    if not math.isfinite(cycle.x_c.xdot):
        raise ConfigError("designed cycle is not finite")
    return ScenarioConfig(
        params=params,
        cycle=cycle,
        controller=controller,
        disturbances=disturbances,
        run=run,
    )
