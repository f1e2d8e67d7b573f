"""Limit-cycle walking on the linear inverted pendulum.

Design a periodic gait from a desired step length and time, stabilize it
against pushes by adjusting step length (pole placement or discrete
LQR), and simulate the hybrid closed loop exactly.
"""

from .errors import (
    ConfigError,
    ConstraintViolationError,
    InvalidArgumentError,
    InvalidPolesError,
    SolverFailureError,
    UncontrollableError,
)
from .lipm import (
    GaitState,
    GrfSample,
    WalkerParams,
    flow,
    flow_forced,
    grf,
    orbital_energy,
)
from .simulation import (
    TRACE_COLUMNS,
    Disturbance,
    PhasePortrait,
    SimTrace,
    StepRecord,
    phase_portrait,
    simulate,
    step_sequence_errors,
)
from .stabilizer import (
    DareSolution,
    Gains,
    LqrWeights,
    closed_loop_matrix,
    control,
    dare_defect,
    lqr_gains,
    pole_place,
    saturate_step,
    solve_dare,
)
from .step_map import (
    Controllability,
    GaitCycle,
    StepError,
    StepMatrices,
    apply_step,
    build_step_matrices,
    design_cycle,
    is_controllable,
    open_loop_eigenvalues,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ConstraintViolationError",
    "InvalidArgumentError",
    "InvalidPolesError",
    "SolverFailureError",
    "UncontrollableError",
    "GaitState",
    "GrfSample",
    "WalkerParams",
    "flow",
    "flow_forced",
    "grf",
    "orbital_energy",
    "TRACE_COLUMNS",
    "Disturbance",
    "PhasePortrait",
    "SimTrace",
    "StepRecord",
    "phase_portrait",
    "simulate",
    "step_sequence_errors",
    "DareSolution",
    "Gains",
    "LqrWeights",
    "closed_loop_matrix",
    "control",
    "dare_defect",
    "lqr_gains",
    "pole_place",
    "saturate_step",
    "solve_dare",
    "Controllability",
    "GaitCycle",
    "StepError",
    "StepMatrices",
    "apply_step",
    "build_step_matrices",
    "design_cycle",
    "is_controllable",
    "open_loop_eigenvalues",
    "__version__",
]
