"""Exception types shared across the package.

The CLI maps these onto its exit-code contract: validation problems
(bad arguments, violated bounds, unusable poles, uncontrollable pairs,
bad configuration) exit with 2, solver failures with 3, and I/O
problems (plain OSError) with 4.
"""


class InvalidArgumentError(ValueError):
    """An argument is non-finite, negative where forbidden, or malformed."""


class ConstraintViolationError(ValueError):
    """A physically meaningful bound was violated (e.g. step length > L_max)."""


class InvalidPolesError(ValueError):
    """Requested closed-loop poles are not strictly inside the unit circle."""


class UncontrollableError(ValueError):
    """The (A, B) pair cannot be stabilized by step-length feedback."""


class SolverFailureError(RuntimeError):
    """An iterative solver did not converge; carries the last residual."""

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class ConfigError(ValueError):
    """A scenario configuration is malformed or internally inconsistent."""
