"""Newton solver on symbolic residuals."""
import logging
from dataclasses import dataclass

import numpy as np

from geomech.errors import ConvergenceError, OptionError, ShapeMismatchError, SingularJacobianError
from geomech.numerics.finite_diff import fd_jacobian
from geomech.symbolic import CompiledExprs, jacobian

log = logging.getLogger(__name__)

SINGULAR_CONDITION = 1e14


@dataclass(frozen=True)
class NewtonConfig:
    """Newton parameters.

    Args:
        tol (float): Bound on the max-norm of the residual.
        max_iter (int): Iteration budget.
        jacobian (str): ``symbolic`` (via ``diff``) or ``fd``.
        least_squares (bool): Solve each linear step with ``lstsq`` (rectangular or rank-deficient systems).
    """
    tol: float = 1e-10
    max_iter: int = 50
    jacobian: str = "symbolic"
    least_squares: bool = False

    def __post_init__(self):
        if not self.tol > 0:
            raise OptionError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise OptionError(f"max_iter must be at least 1, got {self.max_iter}")
        if self.jacobian not in ("symbolic", "fd"):
            raise OptionError(f"Unknown jacobian mode {self.jacobian}")

    @classmethod
    def from_config(cls, cfg, tol=None):
        """Build from a config node; ``tol`` overrides ``cfg.tol`` when given."""
        return cls(tol=float(tol if tol is not None else cfg.tol),
                   max_iter=int(cfg.max_iter),
                   jacobian=str(cfg.jacobian),
                   least_squares=bool(cfg.get("least_squares", False)))

    def replace(self, **changes):
        values = {"tol": self.tol, "max_iter": self.max_iter, "jacobian": self.jacobian,
                  "least_squares": self.least_squares}
        values.update(changes)
        return NewtonConfig(**values)


@dataclass
class NewtonResult:
    x: np.ndarray
    iterations: int
    residual_norm: float


class NewtonSystem:
    """Residual and Jacobian of ``F(unknowns; params) = 0`` compiled once.

    Args:
        residuals (list[Expr]): Equations ``F = 0``.
        unknowns (list[str]): Names solved for.
        params (list[str]): Names held fixed, supplied on each solve.
        cfg (NewtonConfig): Solver parameters.
    """

    def __init__(self, residuals, unknowns, params=(), cfg=None):
        self.cfg = cfg or NewtonConfig()
        self.unknowns = list(unknowns)
        self.params = list(params)
        if len(residuals) != len(self.unknowns) and not self.cfg.least_squares:
            raise ShapeMismatchError(
                f"Newton needs a square system, got {len(residuals)} equations in {len(self.unknowns)} unknowns")
        names = self.unknowns + self.params
        self.residual = CompiledExprs(residuals, names)
        self._jacobian = None
        if self.cfg.jacobian == "symbolic":
            rows = jacobian(residuals, self.unknowns)
            self._jacobian = CompiledExprs([e for row in rows for e in row], names)
        self.shape = (len(residuals), len(self.unknowns))

    def _values(self, x, params):
        return np.concatenate([x, np.asarray(params, dtype=float)])

    def evaluate(self, x, params=()):
        return self.residual(self._values(x, params))

    def jacobian(self, x, params=()):
        if self._jacobian is None:
            return fd_jacobian(lambda y: self.evaluate(y, params), x)
        return self._jacobian(self._values(x, params)).reshape(self.shape)

    def _step(self, J, r):
        if self.cfg.least_squares:
            return np.linalg.lstsq(J, -r, rcond=None)[0]
        cond = np.linalg.cond(J)
        if not np.isfinite(cond) or cond > SINGULAR_CONDITION:
            raise SingularJacobianError(cond)
        return np.linalg.solve(J, -r)

    def solve(self, guess, params=()):
        """Iterate from ``guess``; zero iterations when the guess already satisfies ``tol``.

        Raises:
            SingularJacobianError: If the Jacobian condition estimate exceeds 1e14.
            ConvergenceError: If ``max_iter`` steps do not reach ``tol``.
        """
        x = np.array(guess, dtype=float)
        for iteration in range(self.cfg.max_iter + 1):
            r = self.evaluate(x, params)
            norm = float(np.max(np.abs(r), initial=0.0))
            if norm <= self.cfg.tol:
                return NewtonResult(x, iteration, norm)
            if iteration == self.cfg.max_iter:
                break
            x = x + self._step(self.jacobian(x, params), r)
        raise ConvergenceError(self.cfg.max_iter, norm)


def newton_solve(residuals, unknowns, guess, cfg=None, params=None):
    """Solve ``residuals = 0`` for ``unknowns`` by Newton's method.

    Args:
        residuals (list[Expr]): Square system.
        unknowns (list[str]): Unknown names, in the order of ``guess``.
        guess (array-like): Starting point.
        cfg (NewtonConfig, optional): Solver parameters.
        params (Mapping[str, float], optional): Values of the remaining free variables.

    Returns:
        NewtonResult: Solution, iteration count and final residual norm.
    """
    params = dict(params or {})
    system = NewtonSystem(residuals, unknowns, list(params), cfg)
    result = system.solve(guess, list(params.values()))
    log.debug("newton converged in %d iterations, residual %.3e", result.iterations, result.residual_norm)
    return result
