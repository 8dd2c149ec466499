import logging

from geomech.errors import OptionError
from geomech.estimator.base_estimator import BaseEstimator
from geomech.field.dynamics import field_legendre
from geomech.mechanics.legendre import legendre
from geomech.mechanics.model import MechModel
from geomech.models.catalog import derive_texts
from geomech.symbolic import latex_name, to_latex, to_text

log = logging.getLogger(__name__)

SECTIONS = (
    ("dynamics", "phase dynamics"),
    ("el", "Euler-Lagrange equations"),
    ("legendre", "Legendre map"),
    ("constraints", "primary constraints"),
    ("hamilton", "Hamilton equations"),
    ("hamiltonian", "Hamiltonian"),
)


class DerivationEstimator(BaseEstimator):
    """Prints the phase dynamics, Euler-Lagrange equations and Legendre map of a model."""
    command = "derive"

    def legendre_lines(self, fmt):
        key = self.model.vartable.sort_key
        if isinstance(self.model, MechModel):
            leg = legendre(self.model, self.probe)
            if not leg.hyperregular:
                log.info("velocity Hessian rank drops to %d on the probe set", leg.min_rank)
            momenta = leg.momenta
        else:
            momenta = field_legendre(self.model).momenta
        if fmt == "latex":
            return [f"{latex_name(p)} = {to_latex(e)}" for p, e in momenta.items()]
        ordered = sorted(momenta, key=key)
        return [f"{p} = {to_text(momenta[p])}" for p in ordered]

    def derive(self):
        """
        Derive and print every available equation set.

        Returns:
            dict: Section key to printed lines.
        """
        fmt = self.args.format
        if fmt not in ("text", "latex"):
            raise OptionError(f"Unknown format {fmt}, expected text or latex")
        texts = derive_texts(self.model, fmt)
        if self.model.L is not None:
            texts["legendre"] = self.legendre_lines(fmt)
        lines = []
        for key, title in SECTIONS:
            if key not in texts:
                continue
            body = texts[key] if isinstance(texts[key], list) else [texts[key]]
            lines.append(f"# {title}")
            lines.extend(body)
        self.emit(lines)
        return texts
