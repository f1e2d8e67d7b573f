"""Linear inverted pendulum dynamics for planar walking.

The walker is reduced to a point mass at constant height h above the
ground. With the total angular momentum about the COM held constant and
the center of pressure (COP) fixed within a step, the horizontal COM
offset x = x_COM - x_COP obeys

    x_ddot = (g/h) * x = omega^2 * x,      omega = sqrt(g/h)

which has the closed-form solution

    x(t)     = cosh(omega t) x0 + sinh(omega t) xdot0 / omega
    xdot(t)  = omega sinh(omega t) x0 + cosh(omega t) xdot0

This module provides the physical parameter set, the exact flow of the
free and constant-force dynamics, the conserved orbital energy, and the
ground-reaction forces consistent with the model assumptions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InvalidArgumentError

__all__ = [
    "WalkerParams",
    "GaitState",
    "GrfSample",
    "flow",
    "flow_forced",
    "grf",
    "orbital_energy",
]


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise InvalidArgumentError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class WalkerParams:
    """Physical constants of the walker.

    Attributes:
        h: average COM height above ground (m)
        g: gravitational acceleration (m/s^2)
        m: total mass (kg)
        L_max: maximum step length magnitude (m)
        omega: natural frequency sqrt(g/h) (1/s), derived at construction
    """

    h: float
    g: float
    m: float
    L_max: float
    omega: float = field(init=False, repr=False)

    def __post_init__(self):
        for name in ("h", "g", "m", "L_max"):
            value = _require_finite(name, getattr(self, name))
            if value <= 0.0:
                raise InvalidArgumentError(f"{name} must be positive, got {value}")
            object.__setattr__(self, name, value)
        # single source of truth: omega is never recomputed elsewhere
        object.__setattr__(self, "omega", math.sqrt(self.g / self.h))


@dataclass(frozen=True)
class GaitState:
    """Horizontal COM state relative to the COP: position x and velocity xdot."""

    x: float
    xdot: float

    def __post_init__(self):
        object.__setattr__(self, "x", _require_finite("x", self.x))
        object.__setattr__(self, "xdot", _require_finite("xdot", self.xdot))


@dataclass(frozen=True)
class GrfSample:
    """Ground reaction forces and the angular-momentum-rate residual.

    fy equals m*g exactly (the COM height is constant) and hdot_residual
    is the moment balance defect fx*h - fy*x, analytically zero.
    """

    fx: float
    fy: float
    hdot_residual: float


def flow(params: WalkerParams, s0: GaitState, t: float) -> GaitState:
    """Propagate the free single-support dynamics for a duration t.

    Exact for any t >= 0; flow(s, 0) returns s and the flow composes as a
    group action: flow(flow(s, a), b) == flow(s, a + b).

    Args:
        params: walker constants
        s0: state at the start of the interval
        t: duration (s), must be >= 0 and finite

    Returns:
        The state after time t.
    """
    t = _require_finite("t", t)
    if t < 0.0:
        raise InvalidArgumentError(f"duration must be >= 0, got {t}")
    w = params.omega
    c = math.cosh(w * t)
    s = math.sinh(w * t)
    return GaitState(
        x=c * s0.x + (s / w) * s0.xdot,
        xdot=(w * s) * s0.x + c * s0.xdot,
    )


def flow_forced(params: WalkerParams, s0: GaitState, F: float, t: float) -> GaitState:
    """Propagate the dynamics with a constant horizontal COM force F.

    The force shifts the unstable equilibrium to x* = -F/(m omega^2); the
    solution is the free flow of the offset state:

        x(t) = x* + cosh(omega t)(x0 - x*) + sinh(omega t) xdot0 / omega

    With F = 0 this reduces bit-for-bit to :func:`flow`.
    """
    t = _require_finite("t", t)
    if t < 0.0:
        raise InvalidArgumentError(f"duration must be >= 0, got {t}")
    F = _require_finite("F", F)
    w = params.omega
    xe = -F / (params.m * w * w)
    dx = s0.x - xe
    c = math.cosh(w * t)
    s = math.sinh(w * t)
    return GaitState(
        x=xe + (c * dx + (s / w) * s0.xdot),
        xdot=(w * s) * dx + c * s0.xdot,
    )


def grf(params: WalkerParams, s: GaitState) -> GrfSample:
    """Ground reaction force consistent with the constant-height model.

    fx = m (g/h) x accelerates the COM, fy carries the weight, and the
    residual fx*h - fy*x closes the angular-momentum balance.
    """
    fx = params.m * (params.g / params.h) * s.x
    fy = params.m * params.g
    return GrfSample(fx=fx, fy=fy, hdot_residual=fx * params.h - fy * s.x)


def orbital_energy(params: WalkerParams, s: GaitState) -> float:
    """Conserved quantity of the free flow, per unit mass.

    E = xdot^2 / 2 - (g / 2h) x^2. Constant along :func:`flow`; positive
    exactly when the COM crosses over the stance foot.
    """
    return 0.5 * s.xdot * s.xdot - (params.g / (2.0 * params.h)) * s.x * s.x
