"""CSV/JSON emission and ingestion for simulation runs.

Numeric cells are written as shortest round-trip decimals (repr of the
Python float), so reading a file back reproduces every sample exactly.
Figures and summaries are derived from these files, never from live
simulation state, which makes regeneration reproducible byte for byte.
"""

from __future__ import annotations

import json
import os
from typing import Optional, Sequence

import numpy as np

from .simulation import TRACE_COLUMNS, SimTrace

__all__ = [
    "STEP_COLUMNS",
    "write_trace_csv",
    "write_steps_csv",
    "read_csv_columns",
    "write_gains_json",
    "write_text",
    "convergence_step",
    "run_summary",
]

STEP_COLUMNS = (
    "index",
    "t_start",
    "start_x",
    "start_xdot",
    "end_x",
    "end_xdot",
    "L_nominal",
    "L_commanded",
    "L_applied",
    "clamped",
    "error_norm",
    "cop_world",
    "disturbed",
)

_INT_COLUMNS = {"index", "clamped", "disturbed"}


def _cell(value) -> str:
    return repr(float(value))


def write_text(path: str, text: str) -> None:
    """Write ASCII text with \\n line endings, creating parent directories."""
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)


def write_trace_csv(path: str, trace: SimTrace) -> None:
    """Sampled trajectory, one row per sample, columns TRACE_COLUMNS."""
    lines = [",".join(TRACE_COLUMNS)]
    for row in trace.samples:
        lines.append(",".join(_cell(v) for v in row))
    write_text(path, "\n".join(lines) + "\n")


def write_steps_csv(path: str, trace: SimTrace) -> None:
    """Per-step records, one row per step, columns STEP_COLUMNS."""
    lines = [",".join(STEP_COLUMNS)]
    for rec in trace.steps:
        lines.append(
            ",".join(
                [
                    str(rec.index),
                    _cell(rec.t_start),
                    _cell(rec.start_state.x),
                    _cell(rec.start_state.xdot),
                    _cell(rec.end_state.x),
                    _cell(rec.end_state.xdot),
                    _cell(trace.cycle.L_c),
                    _cell(rec.L_commanded),
                    _cell(rec.L_applied),
                    str(int(rec.clamped)),
                    _cell(rec.error_norm),
                    _cell(rec.cop_world),
                    str(int(rec.disturbed)),
                ]
            )
        )
    write_text(path, "\n".join(lines) + "\n")


def read_csv_columns(path: str) -> dict[str, np.ndarray]:
    """Parse one of this package's CSV files into named column arrays."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    columns: dict[str, np.ndarray] = {}
    for j, name in enumerate(header):
        values = [row[j] for row in rows]
        if name in _INT_COLUMNS:
            columns[name] = np.array([int(v) for v in values], dtype=int)
        else:
            columns[name] = np.array([float(v) for v in values])
    return columns


def write_gains_json(path: str, payload: dict) -> None:
    """Flat key/value gains file; keys sorted for stable bytes."""
    write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def convergence_step(
    error_norms: Sequence[float],
    disturbed: Sequence[int],
    tol: float = 1e-3,
) -> tuple[Optional[int], Optional[int]]:
    """First step (1-based) after the last disturbance with ||e|| < tol.

    Returns (step index, steps after the disturbed step); the second
    entry is None when the run had no disturbance, both are None when
    the error never crossed the threshold.
    """
    last_dist = 0
    for i, flag in enumerate(disturbed, start=1):
        if flag:
            last_dist = i
    for i in range(last_dist + 1, len(error_norms) + 1):
        if error_norms[i - 1] < tol:
            return i, (i - last_dist) if last_dist else None
    return None, None


def run_summary(steps: dict[str, np.ndarray], tol: float = 1e-3) -> str:
    """Plain-text digest of a steps.csv table (CSV-derived facts only)."""
    n = len(steps["index"])
    dev = np.abs(steps["L_applied"] - steps["L_nominal"])
    conv, after = convergence_step(steps["error_norm"], steps["disturbed"], tol)
    lines = [
        f"steps: {n}",
        f"disturbed steps: "
        + (
            ", ".join(str(int(i)) for i in steps["index"][steps["disturbed"] == 1])
            or "none"
        ),
        f"max |L_applied - L_nominal|: {dev.max():.4f} m",
        f"clamped steps: {int(steps['clamped'].sum())}",
        f"final error norm: {steps['error_norm'][-1]:.4e}",
    ]
    if conv is None:
        lines.append(f"steps to convergence (|e| < {tol:g}): not reached")
    elif after is None:
        lines.append(f"steps to convergence (|e| < {tol:g}): step {conv}")
    else:
        lines.append(
            f"steps to convergence (|e| < {tol:g}): step {conv} "
            f"({after} after last disturbance)"
        )
    return "\n".join(lines) + "\n"
