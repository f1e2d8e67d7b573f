"""Closed-loop hybrid walking simulation.

A run starts on the cycle fixed point and advances step by step. At each
step start the controller turns the state error into a step-length
correction, the length is clamped to [0, L_max], the continuous phase is
propagated through up to three exact closed-form segments (before,
during and after an optional constant-force disturbance window), and the
support exchange then shifts the COP forward by the applied length.

Everything is recorded twice: per-step records (states, commanded and
applied lengths, error norms) and a uniformly sampled world-frame
trajectory evaluated from the closed-form flow at exact sample times, so
no integration error accumulates anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError, InvalidArgumentError
from .lipm import GaitState, WalkerParams, flow, flow_forced
from .stabilizer import Gains, control, saturate_step
from .step_map import GaitCycle, StepError

__all__ = [
    "TRACE_COLUMNS",
    "Disturbance",
    "StepRecord",
    "SimTrace",
    "PhasePortrait",
    "simulate",
    "step_sequence_errors",
    "phase_portrait",
]

TRACE_COLUMNS = ("t", "x_world", "x_rel", "xdot", "cop_world", "fx", "fy")


@dataclass(frozen=True)
class Disturbance:
    """A horizontal COM force applied inside one step.

    The window starts at the given fraction of the step time and lasts
    `duration` seconds; it must fit inside the step. With as_impulse=True
    the same momentum F * duration is applied as an instantaneous velocity
    jump at the window midpoint instead of an exact forced flow.
    """

    step_index: int
    phase: float
    F: float
    duration: float
    as_impulse: bool = False

    def __post_init__(self):
        if int(self.step_index) != self.step_index or self.step_index < 1:
            raise ConfigError(
                f"step_index must be a 1-based integer, got {self.step_index!r}"
            )
        object.__setattr__(self, "step_index", int(self.step_index))
        if not (0.0 <= self.phase < 1.0):
            raise ConfigError(f"phase must lie in [0, 1), got {self.phase!r}")
        if not math.isfinite(self.F):
            raise ConfigError(f"force must be finite, got {self.F!r}")
        if not (math.isfinite(self.duration) and self.duration >= 0.0):
            raise ConfigError(f"duration must be >= 0, got {self.duration!r}")

    def window_fits(self, T_c: float) -> bool:
        return self.phase * T_c + self.duration <= T_c * (1.0 + 1e-12)


@dataclass(frozen=True)
class StepRecord:
    """Everything observed about one step of a run."""

    index: int
    t_start: float
    start_state: GaitState
    end_state: GaitState
    L_commanded: float
    L_applied: float
    clamped: bool
    error_norm: float
    cop_world: float
    disturbed: bool


@dataclass(frozen=True)
class SimTrace:
    """Immutable record of a simulation run.

    samples is an (N, 7) array with columns TRACE_COLUMNS on a strictly
    increasing uniform time grid; step_of_sample maps each row to the
    0-based step that produced it. x_world = x_rel + cop_world holds at
    every sample by construction.
    """

    params: WalkerParams
    cycle: GaitCycle
    controller: str
    steps: tuple[StepRecord, ...]
    samples: np.ndarray
    step_of_sample: np.ndarray
    sample_rate: float
    disturbances: tuple[Disturbance, ...]

    def __post_init__(self):
        self.samples.setflags(write=False)
        self.step_of_sample.setflags(write=False)

    def column(self, name: str) -> np.ndarray:
        return self.samples[:, TRACE_COLUMNS.index(name)]


@dataclass(frozen=True)
class PhasePortrait:
    """Phase-plane polyline: one continuous segment per step plus the
    horizontal support-exchange jumps (velocity is continuous across a
    reset, so every jump has zero vertical extent)."""

    segments: tuple[np.ndarray, ...]
    jumps: tuple[np.ndarray, ...]


# segment = (local start time, duration, force, state at segment start)
_Segment = tuple[float, float, float, GaitState]


def _step_segments(
    params: WalkerParams, s0: GaitState, T: float, dist: Optional[Disturbance]
) -> list[_Segment]:
    if dist is None:
        return [(0.0, T, 0.0, s0)]
    t_on = dist.phase * T
    if dist.as_impulse:
        t_mid = t_on + 0.5 * dist.duration
        s_mid = flow(params, s0, t_mid)
        kicked = GaitState(s_mid.x, s_mid.xdot + dist.F * dist.duration / params.m)
        return [(0.0, t_mid, 0.0, s0), (t_mid, T - t_mid, 0.0, kicked)]
    t_off = t_on + dist.duration
    s_on = flow(params, s0, t_on)
    s_off = flow_forced(params, s_on, dist.F, dist.duration)
    return [
        (0.0, t_on, 0.0, s0),
        (t_on, dist.duration, dist.F, s_on),
        (t_off, T - t_off, 0.0, s_off),
    ]


def _end_state(params: WalkerParams, segments: list[_Segment]) -> GaitState:
    t0, dur, F, s = segments[-1]
    return flow_forced(params, s, F, dur)


def _eval_samples(
    params: WalkerParams, segments: list[_Segment], taus: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized closed-form evaluation at local times within one step."""
    w = params.omega
    x = np.empty_like(taus)
    xdot = np.empty_like(taus)
    starts = np.array([seg[0] for seg in segments])
    which = np.clip(np.searchsorted(starts, taus, side="right") - 1, 0, len(segments) - 1)
    for j, (t0, _dur, F, s) in enumerate(segments):
        mask = which == j
        if not mask.any():
            continue
        dt = taus[mask] - t0
        xe = -F / (params.m * w * w)
        c = np.cosh(w * dt)
        sh = np.sinh(w * dt)
        dx = s.x - xe
        x[mask] = xe + (c * dx + (sh / w) * s.xdot)
        xdot[mask] = (w * sh) * dx + c * s.xdot
    return x, xdot


def simulate(
    params: WalkerParams,
    cycle: GaitCycle,
    gains: Optional[Gains],
    disturbances: Sequence[Disturbance] = (),
    n_steps: int = 20,
    sample_rate: float = 1000.0,
    controller_label: Optional[str] = None,
) -> SimTrace:
    """Run the closed-loop walker for n_steps steps of duration T_c.

    The controller acts once per step: at step start the error against
    the cycle fixed point is fed through `gains` (None means no feedback,
    i.e. open loop) and the saturated length is applied at the following
    support exchange. Disturbance windows are integrated exactly.

    Raises:
        ConfigError: a disturbance window does not fit in a step, or two
            disturbances target the same step.
        InvalidArgumentError: n_steps < 1 or sample_rate <= 0.
    """
    if int(n_steps) != n_steps or n_steps < 1:
        raise InvalidArgumentError(f"n_steps must be a positive integer, got {n_steps!r}")
    n_steps = int(n_steps)
    sample_rate = float(sample_rate)
    if not math.isfinite(sample_rate) or sample_rate <= 0.0:
        raise InvalidArgumentError(f"sample_rate must be positive, got {sample_rate!r}")

    by_step: dict[int, Disturbance] = {}
    for d in disturbances:
        if not d.window_fits(cycle.T_c):
            raise ConfigError(
                f"disturbance window (phase={d.phase}, duration={d.duration}) "
                f"does not fit in a step of {cycle.T_c} s"
            )
        if d.step_index in by_step:
            raise ConfigError(f"multiple disturbances target step {d.step_index}")
        by_step[d.step_index] = d

    if controller_label is None:
        controller_label = (
            "none" if gains is None else f"K=({gains.k1!r}, {gains.k2!r})"
        )

    T_c = cycle.T_c
    x_c = cycle.x_c
    n_samples = int(math.floor(n_steps * T_c * sample_rate + 1e-9)) + 1
    ks = np.arange(n_samples)
    t_grid = ks / sample_rate
    step_starts = np.arange(n_steps) * T_c
    step_of_sample = np.clip(
        np.searchsorted(step_starts, t_grid, side="right") - 1, 0, n_steps - 1
    )

    samples = np.empty((n_samples, len(TRACE_COLUMNS)))
    samples[:, 0] = t_grid
    records: list[StepRecord] = []
    s = x_c
    cop = 0.0
    for i in range(1, n_steps + 1):
        e = StepError(s.x - x_c.x, s.xdot - x_c.xdot)
        u = 0.0 if gains is None else control(gains, e)
        L_applied, clamped = saturate_step(cycle, params, u)
        dist = by_step.get(i)
        segments = _step_segments(params, s, T_c, dist)
        end = _end_state(params, segments)

        rows = np.nonzero(step_of_sample == i - 1)[0]
        taus = t_grid[rows] - step_starts[i - 1]
        x_rel, xdot = _eval_samples(params, segments, taus)
        samples[rows, 1] = x_rel + cop
        samples[rows, 2] = x_rel
        samples[rows, 3] = xdot
        samples[rows, 4] = cop
        samples[rows, 5] = params.m * (params.g / params.h) * x_rel
        samples[rows, 6] = params.m * params.g

        records.append(
            StepRecord(
                index=i,
                t_start=float(step_starts[i - 1]),
                start_state=s,
                end_state=end,
                L_commanded=cycle.L_c + u,
                L_applied=L_applied,
                clamped=clamped,
                error_norm=e.norm(),
                cop_world=cop,
                disturbed=dist is not None,
            )
        )
        s = GaitState(end.x - L_applied, end.xdot)
        cop += L_applied

    return SimTrace(
        params=params,
        cycle=cycle,
        controller=controller_label,
        steps=tuple(records),
        samples=samples,
        step_of_sample=step_of_sample,
        sample_rate=sample_rate,
        disturbances=tuple(disturbances),
    )


def step_sequence_errors(trace: SimTrace) -> np.ndarray:
    """Error norms ||e_i|| for each step, in step order."""
    return np.array([rec.error_norm for rec in trace.steps])


def phase_portrait(trace: SimTrace) -> PhasePortrait:
    """Phase-plane view (x_rel, xdot) of a run.

    Each step contributes its sampled arc closed off with the exact
    pre-reset end state; each support exchange contributes a horizontal
    jump of length L_applied, including the one that would start the step
    after the last (so an undisturbed cycle traces a closed curve).
    """
    segments = []
    jumps = []
    for rec in trace.steps:
        rows = np.nonzero(trace.step_of_sample == rec.index - 1)[0]
        arc = trace.samples[rows][:, (2, 3)]
        endpoint = np.array([[rec.end_state.x, rec.end_state.xdot]])
        segments.append(np.vstack([arc, endpoint]))
        jumps.append(
            np.array(
                [
                    [rec.end_state.x, rec.end_state.xdot],
                    [rec.end_state.x - rec.L_applied, rec.end_state.xdot],
                ]
            )
        )
    return PhasePortrait(segments=tuple(segments), jumps=tuple(jumps))
