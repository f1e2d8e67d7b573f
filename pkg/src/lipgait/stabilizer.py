"""Step-length feedback for stabilizing a gait cycle.

The error e_i between a step-initial state and the cycle fixed point
evolves as e_{i+1} = A e_i + B u_i, where u_i is the deviation of the
commanded step length from the nominal L_c. Two designs for the static
feedback u_i = -(k1 e_x + k2 e_xdot) are provided:

* closed-form pole placement for the 2x2 single-input pair, and
* infinite-horizon discrete LQR, with the Riccati equation solved by an
  internal backward fixed-point iteration (no external solver).

Commanded lengths are clamped to the physical range [0, L_max] after the
control law; both the commanded and the applied value are reported so
saturation events stay visible.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidArgumentError,
    InvalidPolesError,
    SolverFailureError,
    UncontrollableError,
)
from .lipm import WalkerParams
from .step_map import GaitCycle, StepError, StepMatrices

__all__ = [
    "Gains",
    "LqrWeights",
    "DareSolution",
    "pole_place",
    "solve_dare",
    "lqr_gains",
    "control",
    "saturate_step",
]

DARE_TOL = 1e-12
DARE_MAX_ITER = 10**6


@dataclass(frozen=True)
class Gains:
    """Feedback gains (k1 on position error, k2 on velocity error).

    closed_loop_poles holds the eigenvalues of A - B K^T as computed from
    the assembled closed-loop matrix; for requested complex-conjugate
    poles these come back as a conjugate pair.
    """

    k1: float
    k2: float
    closed_loop_poles: tuple[complex, complex]

    def as_array(self) -> np.ndarray:
        return np.array([self.k1, self.k2])


@dataclass(frozen=True)
class LqrWeights:
    """Quadratic cost weights: symmetric PSD state weight Q, scalar R > 0."""

    Q: np.ndarray
    R: float

    def __post_init__(self):
        Q = np.asarray(self.Q, dtype=float)
        if Q.shape != (2, 2):
            raise InvalidArgumentError(f"Q must be 2x2, got shape {Q.shape}")
        if not np.array_equal(Q, Q.T):
            raise InvalidArgumentError("Q must be symmetric")
        if not np.all(np.isfinite(Q)):
            raise InvalidArgumentError("Q must be finite")
        if np.linalg.eigvalsh(Q).min() < -1e-12:
            raise InvalidArgumentError("Q must be positive semidefinite")
        R = float(self.R)
        if not math.isfinite(R) or R <= 0.0:
            raise InvalidArgumentError(f"R must be positive, got {R!r}")
        Q.setflags(write=False)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "R", R)


@dataclass(frozen=True)
class DareSolution:
    """Stabilizing Riccati solution with iteration count and defect norm."""

    P: np.ndarray
    iterations: int
    residual: float

    def __post_init__(self):
        self.P.setflags(write=False)


def closed_loop_matrix(M: StepMatrices, k1: float, k2: float) -> np.ndarray:
    """A - B K^T for the feedback u = -(k1 e_x + k2 e_xdot)."""
    return M.A - np.outer(M.B, (k1, k2))


def _eig2(A: np.ndarray) -> tuple[complex, complex]:
    """Eigenvalues of a 2x2 matrix from the characteristic quadratic."""
    tr = float(A[0, 0] + A[1, 1])
    det = float(A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0])
    root = cmath.sqrt(complex(tr * tr - 4.0 * det))
    pair = (complex(0.5 * (tr + root)), complex(0.5 * (tr - root)))
    return tuple(sorted(pair, key=lambda z: (z.real, z.imag)))  # type: ignore[return-value]


def pole_place(M: StepMatrices, lambda1: complex, lambda2: complex) -> Gains:
    """Gains that move the closed-loop eigenvalues to {lambda1, lambda2}.

    Both poles must lie strictly inside the unit circle. Complex poles
    must form a conjugate pair, which keeps the two derived quantities
    lambda1 + lambda2 and lambda1 * lambda2 real:

        k1 = lambda1 + lambda2 - 2 A11
        k2 = (k1 A11 - lambda1 lambda2 + 1) / A21

    Raises:
        InvalidPolesError: a pole is on or outside the unit circle, or the
            complex poles are not conjugates.
        UncontrollableError: A21 vanishes (zero-duration step limit).
    """
    l1, l2 = complex(lambda1), complex(lambda2)
    if abs(l1) >= 1.0 or abs(l2) >= 1.0:
        raise InvalidPolesError(
            f"requested poles ({lambda1}, {lambda2}) must be strictly inside "
            "the unit circle"
        )
    if l1.imag != 0.0 or l2.imag != 0.0:
        if abs(l1.conjugate() - l2) > 1e-12 * max(1.0, abs(l1)):
            raise InvalidPolesError(
                f"complex poles must be a conjugate pair, got ({lambda1}, {lambda2})"
            )
    A = M.A
    if A[1, 0] == 0.0:
        raise UncontrollableError("A21 = 0: step length cannot move the velocity")
    pole_sum = (l1 + l2).real
    pole_prod = (l1 * l2).real
    k1 = pole_sum - 2.0 * A[0, 0]
    k2 = (k1 * A[0, 0] - pole_prod + 1.0) / A[1, 0]
    return Gains(k1=k1, k2=k2, closed_loop_poles=_eig2(closed_loop_matrix(M, k1, k2)))


def _dare_rhs(A: np.ndarray, B: np.ndarray, Q: np.ndarray, R: float, P: np.ndarray) -> np.ndarray:
    PB = P @ B
    APB = A.T @ PB
    P_next = A.T @ P @ A - np.outer(APB, APB) / (R + B @ PB) + Q
    return 0.5 * (P_next + P_next.T)


def dare_defect(M: StepMatrices, W: LqrWeights, P: np.ndarray) -> float:
    """Infinity norm of A'PA - A'PB (R + B'PB)^-1 B'PA - P + Q."""
    return float(np.linalg.norm(_dare_rhs(M.A, M.B, W.Q, W.R, P) - P, np.inf))


def solve_dare(M: StepMatrices, W: LqrWeights, max_iter: int = DARE_MAX_ITER) -> DareSolution:
    """Stabilizing solution of the discrete algebraic Riccati equation.

    Backward fixed-point iteration P <- A'PA - A'PB (R + B'PB)^-1 B'PA + Q
    seeded at P0 = Q. Convergence of the value iteration follows from
    controllability of (A, B) and Q >= 0; iterates are re-symmetrized each
    sweep. Stops when successive iterates differ by less than 1e-12 in
    infinity norm (plus a relative guard of 1e-14 * ||P|| so that
    solutions far above unit scale can still terminate in float64).

    Raises:
        SolverFailureError: the iteration cap was reached; the error
            carries the defect of the last iterate.
    """
    A, B, Q, R = M.A, M.B, W.Q, W.R
    P = Q.copy()
    for iteration in range(1, max_iter + 1):
        P_next = _dare_rhs(A, B, Q, R, P)
        diff = float(np.abs(P_next - P).max())
        P = P_next
        if diff < DARE_TOL + 1e-14 * float(np.abs(P).max()):
            return DareSolution(
                P=P, iterations=iteration, residual=dare_defect(M, W, P)
            )
    raise SolverFailureError(
        f"Riccati iteration did not converge within {max_iter} sweeps "
        f"(last successive change {diff:.3e})",
        residual=dare_defect(M, W, P),
        iterations=max_iter,
    )


def lqr_gains(M: StepMatrices, W: LqrWeights) -> Gains:
    """Infinite-horizon LQR feedback K = (R + B'PB)^-1 B'PA.

    The returned closed loop A - B K^T is guaranteed stable (spectral
    radius < 1) for any valid weights.
    """
    sol = solve_dare(M, W)
    PB = sol.P @ M.B
    K = (M.B @ sol.P @ M.A) / (W.R + M.B @ PB)
    k1, k2 = float(K[0]), float(K[1])
    return Gains(k1=k1, k2=k2, closed_loop_poles=_eig2(closed_loop_matrix(M, k1, k2)))


def control(K: Gains, e: StepError) -> float:
    """Step-length correction u = -(k1 e_x + k2 e_xdot)."""
    return -(K.k1 * e.x + K.k2 * e.xdot)


def saturate_step(cycle: GaitCycle, params: WalkerParams, u: float) -> tuple[float, bool]:
    """Clamp the commanded length L_c + u to the feasible range [0, L_max].

    Returns the applied length and whether clamping changed it.
    """
    u = float(u)
    if not math.isfinite(u):
        raise InvalidArgumentError(f"correction must be finite, got {u!r}")
    commanded = cycle.L_c + u
    applied = min(max(commanded, 0.0), params.L_max)
    return applied, applied != commanded
