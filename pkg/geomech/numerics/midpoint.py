"""Implicit midpoint integration of implicit phase dynamics.

A step from ``z_old`` to ``z_new`` with step ``h`` replaces every state
variable ``s`` by ``(s_new + s_old) / 2`` and its rate by ``(s_new - s_old) / h``
in the equations of the system and solves the result by Newton.

Singular systems keep the velocities as per-step unknowns. The kinematic
relation ``x_new - x_old = h v`` and the primary constraints at ``z_new`` are
appended, and the over-determined step is solved in the least-squares sense.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from tqdm import tqdm

from geomech.errors import (
    GeomechError,
    InconsistentInitialDataError,
    IntegrationError,
    OptionError,
    ShapeMismatchError,
)
from geomech.geometry.forms import canonical_matrix
from geomech.numerics.newton import NewtonConfig, NewtonSystem
from geomech.symbolic import CompiledExprs, Var, jacobian, substitute

log = logging.getLogger(__name__)

STEP = "h__step"
CONSTRAINT_TOL = 1e-8


def _new(name):
    return f"{name}__new"


def _old(name):
    return f"{name}__old"


class MidpointStepper:
    """One implicit midpoint step of an ``ImplicitSystem``.

    Args:
        system (ImplicitSystem): Phase dynamics with ``state``, ``rates``, ``algebraic``,
            ``constraints`` and ``singular``.
        cfg (NewtonConfig): Newton parameters; singular systems switch on least squares.
    """

    def __init__(self, system, cfg=None):
        self.system = system
        self.state = list(system.state)
        self.algebraic = [r for r in system.algebraic] if system.singular else []
        cfg = cfg or NewtonConfig()
        self.cfg = cfg.replace(least_squares=True) if system.singular else cfg
        self.unknowns = [_new(s) for s in self.state] + self.algebraic
        self.params = [_old(s) for s in self.state] + [STEP]
        self.residuals = self._residuals()
        self.newton = NewtonSystem(self.residuals, self.unknowns, self.params, self.cfg)
        self._velocity = np.zeros(len(self.algebraic))
        self._sensitivity = None

    def _residuals(self):
        h = Var(STEP)
        mapping = {}
        for s in self.state:
            new, old = Var(_new(s)), Var(_old(s))
            mapping[s] = (new + old) / 2
            rate = self.system.rates.get(s)
            if rate is not None and rate not in self.algebraic:
                mapping[rate] = (new - old) / h
        residuals = [substitute(eq, mapping) for eq in self.system.equations]
        if self.system.singular:
            rate_of = {r: s for s, r in self.system.rates.items()}
            for v in self.algebraic:
                s = rate_of[v]
                residuals.append(Var(_new(s)) - Var(_old(s)) - h * Var(v))
            at_end = {s: Var(_new(s)) for s in self.state}
            residuals.extend(substitute(c, at_end) for c in self.system.constraints)
        return residuals

    def solve(self, z, h):
        """Newton result of one step of size ``h`` from ``z``."""
        z = np.asarray(z, dtype=float)
        guess = np.concatenate([z, self._velocity])
        result = self.newton.solve(guess, np.concatenate([z, [h]]))
        if self.algebraic:
            self._velocity = result.x[len(self.state):]
        return result

    def step(self, z, h):
        return self.solve(z, h).x[:len(self.state)]


def step_jacobian(stepper, z, h):
    """Jacobian of the step map at ``z`` by implicit differentiation of the step equations.

    With ``F(z_new, z_old) = 0`` the derivative is ``-(dF/dz_new)^-1 dF/dz_old``,
    evaluated at the converged ``z_new``. Only square (regular) steppers qualify.
    """
    if stepper.system.singular:
        raise ShapeMismatchError("step_jacobian needs a regular system")
    if stepper._sensitivity is None:
        names = stepper.unknowns + stepper.params
        rows = jacobian(stepper.residuals, stepper.unknowns + stepper.params[:-1])
        stepper._sensitivity = CompiledExprs([e for row in rows for e in row], names)
    z = np.asarray(z, dtype=float)
    z_new = stepper.step(z, h)
    n = len(stepper.state)
    full = stepper._sensitivity(np.concatenate([z_new, z, [h]])).reshape(n, 2 * n)
    return -np.linalg.solve(full[:, :n], full[:, n:])


def symplecticity_defect(J):
    """Max-norm of J^T Omega J - Omega for a step Jacobian on (x, p)."""
    omega = canonical_matrix(J.shape[0] // 2)
    return float(np.max(np.abs(J.T @ omega @ J - omega)))


@dataclass
class Trajectory:
    """Sampled phase curve: ``states[i]`` is ``x ++ p`` at ``times[i]``."""
    times: np.ndarray
    states: np.ndarray
    names: list
    iterations: list = field(default_factory=list)
    constraint_residuals: list = field(default_factory=list)

    @property
    def n(self):
        return self.states.shape[1] // 2

    def to_frame(self):
        """Table with columns ``t, x1..xn, p1..pn``."""
        columns = [f"x{i + 1}" for i in range(self.n)] + [f"p{i + 1}" for i in range(self.n)]
        frame = pd.DataFrame(self.states, columns=columns)
        frame.insert(0, "t", self.times)
        return frame

    def energy(self, H):
        return CompiledExprs([H], self.names)(self.states.T)[0]

    def energy_drift(self, H):
        """Maximum |H(z_n) - H(z_0)| along the trajectory."""
        values = np.atleast_1d(self.energy(H))
        return float(np.max(np.abs(values - values[0])))


def _step_sizes(t_span, h):
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not h > 0:
        raise OptionError(f"step size must be positive, got {h}")
    if not t1 > t0:
        raise OptionError(f"empty time span [{t0}, {t1}]")
    full = int(np.floor((t1 - t0) / h + 1e-9))
    times = t0 + h * np.arange(full + 1)
    if t1 - times[-1] > 1e-12 * max(1.0, abs(t1)):
        times = np.append(times, t1)
    else:
        times[-1] = t1
    return times


def constraint_residual(system, z):
    if not system.constraints:
        return 0.0
    values = CompiledExprs(list(system.constraints), list(system.state))(np.asarray(z, dtype=float))
    return float(np.max(np.abs(values)))


def integrate_phase(system, z0, t_span, h, cfg=None, progress=False):
    """Integrate implicit phase dynamics with fixed-step implicit midpoint.

    The last step is shortened so that the final time is ``t_span[1]`` exactly.

    Args:
        system (ImplicitSystem): Phase dynamics.
        z0 (array-like): Initial ``x ++ p``.
        t_span (tuple[float, float]): Start and end time.
        h (float): Step size.
        cfg (NewtonConfig, optional): Newton parameters.
        progress (bool): Show a tqdm bar.

    Returns:
        Trajectory: Times, states and per-step diagnostics.

    Raises:
        InconsistentInitialDataError: If ``z0`` violates the constraints by more than 1e-8.
        IntegrationError: If a step fails; carries the trajectory up to the failure.
    """
    z = np.asarray(z0, dtype=float)
    if z.shape != (len(system.state),):
        raise ShapeMismatchError(f"initial state needs {len(system.state)} values, got {z.size}")
    residual = constraint_residual(system, z)
    if residual > CONSTRAINT_TOL:
        raise InconsistentInitialDataError(residual)
    times = _step_sizes(t_span, h)
    stepper = MidpointStepper(system, cfg)
    states, iterations, residuals = [z], [0], [residual]
    for i in tqdm(range(len(times) - 1), disable=not progress, desc="integrate"):
        try:
            result = stepper.solve(states[-1], times[i + 1] - times[i])
        except GeomechError as err:
            partial = Trajectory(times[:i + 1], np.array(states), list(system.state), iterations, residuals)
            raise IntegrationError(partial, err) from err
        z = result.x[:len(system.state)]
        states.append(z)
        iterations.append(result.iterations)
        residuals.append(constraint_residual(system, z))
    log.info("integrated %d steps, max Newton iterations %d", len(times) - 1, max(iterations))
    return Trajectory(times, np.array(states), list(system.state), iterations, residuals)
