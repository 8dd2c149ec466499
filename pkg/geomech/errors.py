"""Exception hierarchy shared by every geomech module.

Each error class carries the process exit code that the command-line entry
points use when the error escapes a command.
"""


class GeomechError(Exception):
    """Base class of all errors raised by geomech."""
    exit_code = 1

    def location(self):
        """Human readable location suffix (empty when unknown)."""
        return ""

    def report(self):
        """Format the error for stderr."""
        return f"error: {self}{self.location()}"


class ExprSyntaxError(GeomechError, ValueError):
    """Expression source does not conform to the grammar."""
    exit_code = 2

    def __init__(self, message, offset):
        super().__init__(message)
        self.offset = offset

    def location(self):
        return f" (offset {self.offset})"


class UnknownFunctionError(ExprSyntaxError):
    """Call of a function outside the primitive set."""

    def __init__(self, name, offset):
        super().__init__(f"unknown function '{name}'", offset)
        self.name = name


class EvaluationError(GeomechError, ValueError):
    """Numeric evaluation of an expression failed."""
    exit_code = 2


class UnassignedVariableError(EvaluationError):
    def __init__(self, name):
        super().__init__(f"variable '{name}' has no assigned value")
        self.name = name


class DomainError(EvaluationError):
    """Evaluation left the real domain of a primitive (log, sqrt, real powers)."""

    def __init__(self, message, subexpr=None):
        if subexpr is not None:
            message = f"{message} in '{subexpr}'"
        super().__init__(message)
        self.subexpr = subexpr


class DivisionByZeroError(DomainError):
    def __init__(self, subexpr=None):
        super().__init__("division by zero", subexpr)


class ModelFileError(GeomechError, ValueError):
    """Malformed model file."""
    exit_code = 2

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line

    def location(self):
        return f" (line {self.line})" if self.line is not None else ""


class ModelValidationError(ModelFileError):
    """Model file parsed but its content is inconsistent."""


class OptionError(GeomechError, ValueError):
    """A command or function option has an unsupported value."""
    exit_code = 2


class RankError(GeomechError, ValueError):
    """A basis that must have full rank does not."""
    exit_code = 2


class MetricMissingError(GeomechError, ValueError):
    exit_code = 2


class InconsistentInitialDataError(GeomechError):
    """Initial state violates the algebraic part of an implicit system."""
    exit_code = 3

    def __init__(self, residual):
        super().__init__(f"inconsistent initial data: algebraic residual {residual:.3e} exceeds 1e-8")
        self.residual = residual


class ShapeMismatchError(GeomechError, ValueError):
    exit_code = 4


class BaseMismatchError(ShapeMismatchError):
    """Two tangent objects do not live over the same base point."""


class GridTooSmallError(ShapeMismatchError):
    pass


class NumericsError(GeomechError):
    exit_code = 1


class SingularJacobianError(NumericsError):
    def __init__(self, cond):
        super().__init__(f"singular Jacobian (condition estimate {cond:.3e})")
        self.cond = cond


class ConvergenceError(NumericsError):
    def __init__(self, iterations, residual):
        super().__init__(f"Newton did not converge after {iterations} iterations (residual {residual:.3e})")
        self.iterations = iterations
        self.residual = residual


class IntegrationError(NumericsError):
    """A step of the integrator failed; the trajectory computed so far is attached."""

    def __init__(self, trajectory, cause):
        super().__init__(f"integration stopped at t={trajectory.times[-1]:.6g}: {cause}")
        self.trajectory = trajectory
        self.cause = cause
