"""Step-to-step discrete dynamics of the walker.

Sampling the continuous flow at step boundaries and applying the
instantaneous support exchange (the COP jumps forward by one step
length, the COM velocity is untouched) gives a linear map between
consecutive step-initial states:

    x_{i+1,0} = A(T_i) x_{i,0} + B L_i,   B = (-1, 0)

A one-parameter family of period-one gaits follows: for a desired step
length L_c and step time T_c there is a unique fixed point x_c, and the
map linearized about it inherits A's eigenvalues {e^{omega T}, e^{-omega T}},
one of which always exceeds 1. Walking on the bare cycle is unstable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConstraintViolationError, InvalidArgumentError
from .lipm import GaitState, WalkerParams

__all__ = [
    "StepMatrices",
    "GaitCycle",
    "StepError",
    "Controllability",
    "build_step_matrices",
    "apply_step",
    "design_cycle",
    "open_loop_eigenvalues",
    "is_controllable",
]


@dataclass(frozen=True)
class StepMatrices:
    """State-transition pair (A, B) of the step map for step duration T."""

    A: np.ndarray
    B: np.ndarray
    T: float

    def __post_init__(self):
        self.A.setflags(write=False)
        self.B.setflags(write=False)


@dataclass(frozen=True)
class GaitCycle:
    """A period-one gait: step length L_c, step time T_c, fixed point x_c."""

    L_c: float
    T_c: float
    x_c: GaitState


@dataclass(frozen=True)
class StepError:
    """Deviation of a step-initial state from the cycle fixed point."""

    x: float
    xdot: float

    def norm(self) -> float:
        return math.hypot(self.x, self.xdot)


@dataclass(frozen=True)
class Controllability:
    """Controllability verdict with the certifying determinant det[B, AB]."""

    controllable: bool
    determinant: float

    def __bool__(self) -> bool:
        return self.controllable


def build_step_matrices(params: WalkerParams, T: float) -> StepMatrices:
    """Assemble the step map matrices for a step of duration T > 0.

    A = [[cosh(wT), sinh(wT)/w], [w sinh(wT), cosh(wT)]], B = (-1, 0).
    det(A) = 1 and A11 = A22 by construction.
    """
    T = float(T)
    if not math.isfinite(T) or T <= 0.0:
        raise InvalidArgumentError(f"step duration must be positive, got {T!r}")
    w = params.omega
    c = math.cosh(w * T)
    s = math.sinh(w * T)
    A = np.array([[c, s / w], [w * s, c]], dtype=float)
    B = np.array([-1.0, 0.0])
    return StepMatrices(A=A, B=B, T=T)


def apply_step(M: StepMatrices, s0: GaitState, L: float) -> GaitState:
    """One application of the step map: A s0 + B L.

    Equivalent to flowing s0 for M.T and shifting the COP forward by L
    (x decreases by L, xdot is continuous across the exchange).
    """
    L = float(L)
    if not math.isfinite(L):
        raise InvalidArgumentError(f"step length must be finite, got {L!r}")
    A, B = M.A, M.B
    return GaitState(
        x=A[0, 0] * s0.x + A[0, 1] * s0.xdot + B[0] * L,
        xdot=A[1, 0] * s0.x + A[1, 1] * s0.xdot + B[1] * L,
    )


def design_cycle(params: WalkerParams, L_c: float, T_c: float) -> GaitCycle:
    """Fixed point of the step map for nominal step length and time.

    x_c = (L_c/2) * (-1, omega coth(omega T_c / 2)). The coth form is the
    algebraic rewrite of omega (e^{wT}+1)/(e^{wT}-1) and stays accurate
    for small omega T_c.

    Raises:
        ConstraintViolationError: if L_c is outside (0, L_max].
        InvalidArgumentError: if T_c <= 0.
    """
    L_c = float(L_c)
    T_c = float(T_c)
    if not math.isfinite(T_c) or T_c <= 0.0:
        raise InvalidArgumentError(f"cycle step time must be positive, got {T_c!r}")
    if not math.isfinite(L_c) or L_c <= 0.0 or L_c > params.L_max:
        raise ConstraintViolationError(
            f"cycle step length {L_c!r} outside (0, L_max={params.L_max}]"
        )
    w = params.omega
    xdot_c = 0.5 * L_c * w / math.tanh(0.5 * w * T_c)
    return GaitCycle(L_c=L_c, T_c=T_c, x_c=GaitState(x=-0.5 * L_c, xdot=xdot_c))


def open_loop_eigenvalues(M: StepMatrices) -> tuple[float, float]:
    """Eigenvalues of A, sorted descending.

    Solved from the characteristic quadratic z^2 - tr(A) z + det(A); the
    pair is {e^{omega T}, e^{-omega T}} with product 1.
    """
    A = M.A
    tr = float(A[0, 0] + A[1, 1])
    det = float(A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0])
    disc = tr * tr - 4.0 * det
    root = math.sqrt(max(disc, 0.0))
    return (0.5 * (tr + root), 0.5 * (tr - root))


def is_controllable(M: StepMatrices, tol: float = 1e-12) -> Controllability:
    """Check that step length steers both state components.

    The certificate is det[B, AB], which expands to A21 = omega sinh(omega T)
    and is positive for every T > 0.
    """
    A, B = M.A, M.B
    AB = A @ B
    det = float(B[0] * AB[1] - B[1] * AB[0])
    return Controllability(controllable=abs(det) > tol, determinant=det)
