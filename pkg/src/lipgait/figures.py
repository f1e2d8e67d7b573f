"""Static SVG figures rendered from the CSV outputs.

The renderer is deliberately minimal: polylines, tick marks and text
labels assembled by string formatting, with no plotting library behind
it. Given the same CSV content it produces the same bytes, so figures
can be regenerated and diffed in CI. Data paths are pure geometry; fonts
only affect axis and legend labels.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

__all__ = ["render_com_figure", "render_phase_figure", "render_steplen_figure"]

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd")
_FONT = 'font-family="sans-serif"'


def _fmt(v: float) -> str:
    return f"{v + 0.0:.2f}"


def _label(v: float) -> str:
    if v == 0:
        v = 0.0
    return f"{v:.6g}"


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if not (hi > lo):
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    step = 10.0 * mag
    for mult in (1.0, 2.0, 2.5, 5.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(t)
        t += step
    return ticks


class _Panel:
    """Maps a data rectangle onto a pixel rectangle (y axis flipped)."""

    def __init__(self, px0, py0, width, height, xlim, ylim):
        self.px0, self.py0 = px0, py0
        self.width, self.height = width, height
        self.xmin, self.xmax = xlim
        self.ymin, self.ymax = ylim
        if self.xmax <= self.xmin:
            self.xmax = self.xmin + 1.0
        if self.ymax <= self.ymin:
            self.ymax = self.ymin + 1.0

    def x(self, v: float) -> float:
        return self.px0 + (v - self.xmin) / (self.xmax - self.xmin) * self.width

    def y(self, v: float) -> float:
        return self.py0 + self.height - (v - self.ymin) / (self.ymax - self.ymin) * self.height

    def polyline(self, xs, ys, color: str, width: float = 1.2, dash: str = "") -> str:
        pts = " ".join(f"{_fmt(self.x(a))},{_fmt(self.y(b))}" for a, b in zip(xs, ys))
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        return (
            f'<polyline fill="none" stroke="{color}" stroke-width="{width:g}"'
            f'{dash_attr} points="{pts}"/>'
        )

    def frame_and_ticks(self, xlabel: str, ylabel: str) -> list[str]:
        parts = [
            f'<rect x="{_fmt(self.px0)}" y="{_fmt(self.py0)}" width="{_fmt(self.width)}"'
            f' height="{_fmt(self.height)}" fill="none" stroke="#444444" stroke-width="1"/>'
        ]
        ybase = self.py0 + self.height
        for t in _nice_ticks(self.xmin, self.xmax):
            px = self.x(t)
            parts.append(
                f'<line x1="{_fmt(px)}" y1="{_fmt(ybase)}" x2="{_fmt(px)}"'
                f' y2="{_fmt(ybase + 4)}" stroke="#444444" stroke-width="1"/>'
            )
            parts.append(
                f'<text x="{_fmt(px)}" y="{_fmt(ybase + 16)}" {_FONT} font-size="11"'
                f' text-anchor="middle">{_label(t)}</text>'
            )
        for t in _nice_ticks(self.ymin, self.ymax):
            py = self.y(t)
            parts.append(
                f'<line x1="{_fmt(self.px0 - 4)}" y1="{_fmt(py)}" x2="{_fmt(self.px0)}"'
                f' y2="{_fmt(py)}" stroke="#444444" stroke-width="1"/>'
            )
            parts.append(
                f'<text x="{_fmt(self.px0 - 7)}" y="{_fmt(py + 3.5)}" {_FONT} font-size="11"'
                f' text-anchor="end">{_label(t)}</text>'
            )
        parts.append(
            f'<text x="{_fmt(self.px0 + self.width / 2)}" y="{_fmt(ybase + 32)}" {_FONT}'
            f' font-size="12" text-anchor="middle">{xlabel}</text>'
        )
        parts.append(
            f'<text x="{_fmt(self.px0 - 42)}" y="{_fmt(self.py0 + self.height / 2)}" {_FONT}'
            f' font-size="12" text-anchor="middle" transform="rotate(-90 '
            f'{_fmt(self.px0 - 42)} {_fmt(self.py0 + self.height / 2)})">{ylabel}</text>'
        )
        return parts

    def legend(self, entries: Sequence[tuple[str, str]], dash_last: bool = False) -> list[str]:
        parts = []
        lx = self.px0 + 10
        ly = self.py0 + 14
        for idx, (label, color) in enumerate(entries):
            dash = ' stroke-dasharray="4 3"' if dash_last and idx == len(entries) - 1 else ""
            parts.append(
                f'<line x1="{_fmt(lx)}" y1="{_fmt(ly - 4)}" x2="{_fmt(lx + 22)}"'
                f' y2="{_fmt(ly - 4)}" stroke="{color}" stroke-width="2"{dash}/>'
            )
            parts.append(
                f'<text x="{_fmt(lx + 27)}" y="{_fmt(ly)}" {_FONT} font-size="11">{label}</text>'
            )
            ly += 15
        return parts


def _svg(width: int, height: int, title: str, body: list[str]) -> str:
    head = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}"'
        f' viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
        f'<text x="{width // 2}" y="18" {_FONT} font-size="13" text-anchor="middle">'
        f"{title}</text>",
    ]
    return "\n".join(head + body + ["</svg>"]) + "\n"


def _pad(lo: float, hi: float, frac: float = 0.06) -> tuple[float, float]:
    span = hi - lo
    if span <= 0:
        span = max(abs(hi), 1.0)
    return lo - frac * span, hi + frac * span


def render_com_figure(trace: dict[str, np.ndarray]) -> str:
    """COM position (with the COP staircase) and velocity against time."""
    t = trace["t"]
    body: list[str] = []
    top = _Panel(64, 36, 600, 200, (t[0], t[-1]),
                 _pad(min(trace["x_world"].min(), trace["cop_world"].min()),
                      max(trace["x_world"].max(), trace["cop_world"].max())))
    body += top.frame_and_ticks("time (s)", "position (m)")
    body.append(top.polyline(t, trace["x_world"], _PALETTE[0]))
    body.append(top.polyline(t, trace["cop_world"], _PALETTE[1]))
    body += top.legend([("COM", _PALETTE[0]), ("COP", _PALETTE[1])])
    bot = _Panel(64, 300, 600, 200, (t[0], t[-1]),
                 _pad(trace["xdot"].min(), trace["xdot"].max()))
    body += bot.frame_and_ticks("time (s)", "velocity (m/s)")
    body.append(bot.polyline(t, trace["xdot"], _PALETTE[0]))
    return _svg(720, 560, "COM motion", body)


def _split_steps(trace: dict[str, np.ndarray], steps: dict[str, np.ndarray]) -> list[np.ndarray]:
    starts = steps["t_start"]
    which = np.clip(np.searchsorted(starts, trace["t"], side="right") - 1, 0, len(starts) - 1)
    return [np.nonzero(which == i)[0] for i in range(len(starts))]


def render_phase_figure(
    trace: dict[str, np.ndarray], steps: dict[str, np.ndarray]
) -> str:
    """Phase plane (x_rel, xdot) with support-exchange jumps; the final
    step, by then back on the cycle, is drawn at doubled width."""
    x, v = trace["x_rel"], trace["xdot"]
    xlim = _pad(min(x.min(), steps["end_x"].min()), max(x.max(), steps["end_x"].max()))
    ylim = _pad(v.min(), v.max())
    panel = _Panel(64, 36, 440, 440, xlim, ylim)
    body = panel.frame_and_ticks("x_rel (m)", "xdot (m/s)")
    groups = _split_steps(trace, steps)
    n = len(groups)
    for i, rows in enumerate(groups):
        xs = np.append(x[rows], steps["end_x"][i])
        vs = np.append(v[rows], steps["end_xdot"][i])
        width = 2.8 if i == n - 1 else 1.4
        body.append(panel.polyline(xs, vs, _PALETTE[0], width=width))
        jump_x = (steps["end_x"][i], steps["end_x"][i] - steps["L_applied"][i])
        jump_v = (steps["end_xdot"][i], steps["end_xdot"][i])
        body.append(panel.polyline(jump_x, jump_v, _PALETTE[2], width=1.0, dash="5 3"))
    body += panel.legend(
        [("single support", _PALETTE[0]), ("support exchange", _PALETTE[2])],
        dash_last=True,
    )
    return _svg(560, 540, "phase portrait", body)


def render_steplen_figure(series: Sequence[tuple[str, dict[str, np.ndarray]]]) -> str:
    """Applied step length per step index for one run per series entry."""
    all_idx = np.concatenate([s["index"] for _, s in series])
    all_len = np.concatenate([s["L_applied"] for _, s in series])
    nominal = float(series[0][1]["L_nominal"][0])
    panel = _Panel(
        64,
        36,
        540,
        330,
        (all_idx.min() - 0.5, all_idx.max() + 0.5),
        _pad(min(all_len.min(), nominal), max(all_len.max(), nominal)),
    )
    body = panel.frame_and_ticks("step index", "step length (m)")
    body.append(
        panel.polyline(
            (all_idx.min() - 0.5, all_idx.max() + 0.5), (nominal, nominal),
            "#888888", width=1.0, dash="4 3",
        )
    )
    legend = []
    for k, (label, cols) in enumerate(series):
        color = _PALETTE[k % len(_PALETTE)]
        body.append(panel.polyline(cols["index"], cols["L_applied"], color, width=1.6))
        for i, L in zip(cols["index"], cols["L_applied"]):
            body.append(
                f'<circle cx="{_fmt(panel.x(i))}" cy="{_fmt(panel.y(L))}" r="2.4"'
                f' fill="{color}"/>'
            )
        legend.append((label, color))
    body += panel.legend(legend)
    return _svg(640, 420, "step length per step", body)
