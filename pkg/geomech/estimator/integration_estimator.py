import logging

import numpy as np

from geomech.data.grid_io import write_trajectory_csv
from geomech.errors import IntegrationError, ModelValidationError, OptionError, ShapeMismatchError
from geomech.estimator.base_estimator import BaseEstimator
from geomech.mechanics.dynamics import hamiltonian_dynamics, lagrangian_dynamics
from geomech.mechanics.legendre import hamiltonize
from geomech.mechanics.model import MechModel
from geomech.numerics.midpoint import integrate_phase
from geomech.symbolic import Expr

log = logging.getLogger(__name__)


def parse_state(values):
    """Initial state from a list or a comma separated string such as ``"1,0"``."""
    if values is None:
        raise ShapeMismatchError("integrate needs an initial state z0")
    if isinstance(values, str):
        values = [v for v in values.split(",") if v.strip()]
    return np.array([float(v) for v in values])


class IntegrationEstimator(BaseEstimator):
    """Integrates the phase dynamics of a mechanical model with implicit midpoint."""
    command = "integrate"

    def init_model(self):
        super().init_model()
        if not isinstance(self.model, MechModel):
            raise ModelValidationError(f"integrate needs a mechanics model, '{self.model.name}' is a field model")

    def init_system(self):
        """Hamiltonian dynamics when H is given or requested, Lagrangian dynamics otherwise."""
        source = self.args.source
        if source not in ("auto", "lagrangian", "hamiltonian"):
            raise OptionError(f"Unknown dynamics source {source}, expected auto, lagrangian or hamiltonian")
        use_h = source == "hamiltonian" or (source == "auto" and self.model.H is not None)
        if use_h and self.model.H is None:
            raise ModelValidationError(f"model '{self.model.name}' has no H")
        self.system = hamiltonian_dynamics(self.model) if use_h else lagrangian_dynamics(self.model, self.probe)

    def energy(self):
        """The Hamiltonian used for the drift summary, or None."""
        if self.model.H is not None:
            return self.model.H
        if self.system.singular:
            return None
        H = hamiltonize(self.model, self.probe, self.newton_cfg)
        return H if isinstance(H, Expr) else None

    def integrate(self):
        """
        Integrate, write the trajectory CSV and print a summary.

        Returns:
            Trajectory: The sampled phase curve.
        """
        self.init_system()
        z0 = parse_state(self.args.z0)
        out = self.output_path("out", "trajectory.csv")
        try:
            trajectory = integrate_phase(self.system, z0, (self.args.t0, self.args.t1), self.args.h,
                                         self.newton_cfg, progress=self.args.progress)
        except IntegrationError as err:
            write_trajectory_csv(err.trajectory, out)
            raise
        write_trajectory_csv(trajectory, out)
        final = ", ".join(f"{name}={value:.10g}" for name, value in zip(trajectory.names, trajectory.states[-1]))
        lines = [f"steps: {len(trajectory.times) - 1}", f"final: t={trajectory.times[-1]:.10g}, {final}"]
        H = self.energy()
        if H is not None:
            drift = trajectory.energy_drift(H)
            log.info("energy drift %.3e", drift)
            lines.append(f"energy drift: {drift:.3e}")
        if self.system.constraints:
            lines.append(f"max constraint residual: {max(trajectory.constraint_residuals):.3e}")
        lines.append(f"trajectory: {out}")
        self.emit(lines)
        return trajectory
