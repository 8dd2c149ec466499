import logging

from geomech.errors import ModelValidationError
from geomech.estimator.base_estimator import BaseEstimator
from geomech.field.dynamics import field_hamiltonize
from geomech.mechanics.legendre import GeneratingFamilyReport, NumericHamiltonian, hamiltonize
from geomech.mechanics.model import MechModel
from geomech.symbolic import equation_text, to_text

log = logging.getLogger(__name__)


class HamiltonizeEstimator(BaseEstimator):
    """Prints H, or the generating family when no single Hamiltonian exists."""
    command = "hamiltonize"

    def hamiltonize(self):
        if self.model.L is None:
            raise ModelValidationError(f"model '{self.model.name}' has no Lagrangian to hamiltonize")
        if isinstance(self.model, MechModel):
            result = hamiltonize(self.model, self.probe, self.newton_cfg)
            if isinstance(result, (GeneratingFamilyReport, NumericHamiltonian)):
                lines = result.text()
            else:
                lines = [f"H = {to_text(result)}"]
        else:
            result = field_hamiltonize(self.model)
            if result.singular:
                key = self.model.vartable.sort_key
                lines = [f"jet Hessian rank: {result.rank}"]
                lines += [f"constraint: {equation_text(c, key)}" for c in result.constraints]
            else:
                lines = [f"H = {to_text(result.H)}"]
        log.info("hamiltonize of '%s' returned %s", self.model.name, type(result).__name__)
        self.emit(lines)
        return result
