"""Built-in models with the equations the engine must derive for them.

Each entry carries golden text for the stable printer. ``derive_texts``
rebuilds the same keys from a model so the two can be compared verbatim.
"""
from dataclasses import dataclass, field

import numpy as np

from geomech.field.dynamics import field_dynamics, field_el, field_hamiltonize, hamilton_field_equations
from geomech.field.model import FieldModel
from geomech.mechanics.dynamics import euler_lagrange, hamiltonian_dynamics, lagrangian_dynamics, primary_constraints
from geomech.mechanics.legendre import GeneratingFamilyReport, NumericHamiltonian, hamiltonize
from geomech.mechanics.model import MechModel
from geomech.models.electromagnetics import em_model, scalar_model
from geomech.symbolic import Expr, equation_latex, equation_text, parse, to_latex, to_text

KINDS = ("mechanics", "field")


@dataclass
class ModelCatalogEntry:
    """A named model and its golden derived text.

    ``expected`` maps ``dynamics``, ``el``, ``hamilton``, ``constraints`` (lists
    of ``... = 0`` lines) and ``hamiltonian`` (a single line) to text; absent
    keys are not checked.
    """
    name: str
    kind: str
    model: object
    expected: dict = field(default_factory=dict)
    notes: str = ""


def _harmonic_oscillator():
    m = MechModel(["q"], L=parse("0.5*v_q^2 - 0.5*q^2"), name="harmonic_oscillator")
    return ModelCatalogEntry("harmonic_oscillator", "mechanics", m, {
        "dynamics": ["p_q - v_q = 0", "pdot_q + q = 0"],
        "el": ["qddot + q = 0"],
        "hamiltonian": "0.5*p_q^2 + 0.5*q^2",
    }, "L = 1/2 v^2 - 1/2 q^2; H = 1/2 p^2 + 1/2 q^2")


def _free_particle():
    m = MechModel(["q"], L=parse("0.5*v_q^2"), name="free_particle")
    return ModelCatalogEntry("free_particle", "mechanics", m, {
        "dynamics": ["p_q - v_q = 0", "pdot_q = 0"],
        "el": ["qddot = 0"],
        "hamiltonian": "0.5*p_q^2",
    }, "L = 1/2 v^2")


def _singular_two_velocity():
    m = MechModel(["q1", "q2"], L=parse("0.5*(v_q1 - v_q2)^2"), name="singular_two_velocity")
    return ModelCatalogEntry("singular_two_velocity", "mechanics", m, {
        "dynamics": ["p_q1 - v_q1 + v_q2 = 0", "p_q2 + v_q1 - v_q2 = 0", "pdot_q1 = 0", "pdot_q2 = 0"],
        "el": ["q1ddot - q2ddot = 0", "q1ddot - q2ddot = 0"],
        "constraints": ["p_q1 + p_q2 = 0"],
    }, "velocity Hessian of rank 1; no Hamiltonian, primary constraint p_q1 + p_q2 = 0")


def _quartic_kinetic():
    m = MechModel(["q"], L=parse("0.25*v_q^4 - 0.5*q^2"), name="quartic_kinetic")
    return ModelCatalogEntry("quartic_kinetic", "mechanics", m, {
        "dynamics": ["p_q - v_q^3 = 0", "pdot_q + q = 0"],
        "el": ["3*qddot*v_q^2 + q = 0"],
    }, "not quadratic in v; H is evaluated numerically from dL/dv = p")


def _td_oscillator():
    fm = FieldModel(["t"], ["q"], L=parse("0.5*q_1^2 - 0.5*q^2"), H=parse("0.5*p1_q^2 + 0.5*q^2"),
                    name="td_oscillator")
    lines = ["p1_q - q_1 = 0", "p1_q_1 + q = 0"]
    return ModelCatalogEntry("td_oscillator", "field", fm, {
        "dynamics": lines,
        "el": ["q_11 + q = 0"],
        "hamilton": lines,
        "hamiltonian": "0.5*p1_q^2 + 0.5*q^2",
    }, "Q x R -> R with base t; renaming t-jets onto v, pdot, ddot gives the oscillator")


def _scalar(m):
    entry = scalar_model(m)
    axes = range(1, m + 1)
    lines = [f"p{i}_y - y_{i} = 0" for i in axes] + [" + ".join(f"p{i}_y_{i}" for i in axes) + " = 0"]
    return ModelCatalogEntry(entry.name, "field", entry, {
        "dynamics": lines,
        "el": [" + ".join(f"y_{i}{i}" for i in axes) + " = 0"],
        "hamilton": lines,
        "hamiltonian": " + ".join(f"0.5*p{i}_y^2" for i in axes),
    }, "L = 1/2 dy ^ *dy, H = 1/2 p ^ *p; Laplace equation")


def _vector_linear2():
    fm = FieldModel(["x1", "x2"], ["y1", "y2"],
                    L=parse("0.5*(y1_1^2 + y1_2^2 + y2_1^2 + y2_2^2) - 0.5*(y1^2 + y2^2)"),
                    H=parse("0.5*(p1_y1^2 + p1_y2^2 + p2_y1^2 + p2_y2^2) + 0.5*(y1^2 + y2^2)"),
                    name="vector_linear2")
    lines = ["p1_y1 - y1_1 = 0", "p1_y2 - y2_1 = 0", "p2_y1 - y1_2 = 0", "p2_y2 - y2_2 = 0",
             "p1_y1_1 + p2_y1_2 + y1 = 0", "p1_y2_1 + p2_y2_2 + y2 = 0"]
    return ModelCatalogEntry("vector_linear2", "field", fm, {
        "dynamics": lines,
        "el": ["y1_11 + y1_22 + y1 = 0", "y2_11 + y2_22 + y2 = 0"],
        "hamilton": lines,
    }, "two Helmholtz-type fields; alpha splits into the vertical part and the divergence")


def _em2():
    return ModelCatalogEntry("em2", "field", em_model(2), {
        "dynamics": ["p1_A1 = 0", "p1_A2 + A1_2 - A2_1 = 0", "p2_A1 - A1_2 + A2_1 = 0", "p2_A2 = 0",
                     "p1_A1_1 + p2_A1_2 = 0", "p1_A2_1 + p2_A2_2 = 0"],
        "el": ["A1_22 - A2_12 = 0", "A1_12 - A2_11 = 0"],
        "constraints": ["p1_A1 = 0", "p1_A2 + p2_A1 = 0", "p2_A2 = 0"],
    }, "L = 1/4 F_ij F^ij with F_ij = A{j}_{i} - A{i}_{j}; EL is d*F = 0; symmetric momentum vanishes")


def _em3():
    return ModelCatalogEntry("em3", "field", em_model(3), {
        "dynamics": ["p1_A1 = 0", "p1_A2 + A1_2 - A2_1 = 0", "p1_A3 + A1_3 - A3_1 = 0",
                     "p2_A1 - A1_2 + A2_1 = 0", "p2_A2 = 0", "p2_A3 + A2_3 - A3_2 = 0",
                     "p3_A1 - A1_3 + A3_1 = 0", "p3_A2 - A2_3 + A3_2 = 0", "p3_A3 = 0",
                     "p1_A1_1 + p2_A1_2 + p3_A1_3 = 0", "p1_A2_1 + p2_A2_2 + p3_A2_3 = 0",
                     "p1_A3_1 + p2_A3_2 + p3_A3_3 = 0"],
        "el": ["A1_22 + A1_33 - A2_12 - A3_13 = 0", "A1_12 - A2_11 - A2_33 + A3_23 = 0",
               "A1_13 + A2_23 - A3_11 - A3_22 = 0"],
    }, "Euclidean Maxwell equations d*F = 0 in three dimensions")


def _em4_lorentz():
    return ModelCatalogEntry("em4_lorentz", "field", em_model(4, metric=np.diag([-1.0, 1.0, 1.0, 1.0]),
                                                              name="em4_lorentz"),
                             notes="metric diag(-1, 1, 1, 1), x1 timelike; no golden text")


BUILDERS = {
    "harmonic_oscillator": _harmonic_oscillator,
    "free_particle": _free_particle,
    "singular_two_velocity": _singular_two_velocity,
    "quartic_kinetic": _quartic_kinetic,
    "td_oscillator": _td_oscillator,
    "scalar_flat2": lambda: _scalar(2),
    "scalar_flat3": lambda: _scalar(3),
    "vector_linear2": _vector_linear2,
    "em2": _em2,
    "em3": _em3,
}
OPTIONAL = {"em4_lorentz": _em4_lorentz}


def catalog(include_optional=False):
    """All built-in entries, optional ones (Lorentzian electromagnetics) on request."""
    builders = BUILDERS | OPTIONAL if include_optional else BUILDERS
    return [build() for build in builders.values()]


def get_entry(name):
    builders = BUILDERS | OPTIONAL
    if name not in builders:
        raise ValueError(f"Unknown model {name}, available: {', '.join(builders)}")
    return builders[name]()


def _lines(equations, key, fmt):
    if fmt == "latex":
        return [equation_latex(e, key) for e in equations]
    return [equation_text(e, key) for e in equations]


def _render(e, fmt):
    return to_latex(e) if fmt == "latex" else to_text(e)


def derive_texts(model, fmt="text"):
    """Printed derivations of a model under the keys used by ``ModelCatalogEntry.expected``."""
    key = model.vartable.sort_key
    out = {}
    if isinstance(model, MechModel):
        if model.L is not None:
            out["dynamics"] = lagrangian_dynamics(model).text(fmt)
            out["el"] = _lines(euler_lagrange(model), key, fmt)
            constraints = primary_constraints(model)
            if constraints:
                out["constraints"] = _lines(constraints, key, fmt)
        if model.H is not None:
            out["hamilton"] = hamiltonian_dynamics(model).text(fmt)
            out["hamiltonian"] = _render(model.H, fmt)
        elif model.L is not None:
            H = hamiltonize(model)
            if isinstance(H, Expr):
                out["hamiltonian"] = _render(H, fmt)
            elif isinstance(H, NumericHamiltonian):
                out["hamiltonian"] = "numeric"
            elif isinstance(H, GeneratingFamilyReport):
                out["hamiltonian"] = "generating family"
        return out
    if model.L is not None:
        out["dynamics"] = field_dynamics(model).text(fmt)
        out["el"] = _lines(field_el(model), key, fmt)
        try:
            reduction = field_hamiltonize(model)
        except ValueError:
            reduction = None
        if reduction is not None and reduction.singular:
            out["constraints"] = _lines(reduction.constraints, key, fmt)
    if model.H is not None:
        out["hamilton"] = hamilton_field_equations(model).text(fmt)
        out["hamiltonian"] = _render(model.H, fmt)
    return out


def golden_mismatches(entry):
    """Keys of ``entry.expected`` whose derived text differs, with (expected, derived)."""
    derived = derive_texts(entry.model)
    return {k: (v, derived.get(k)) for k, v in entry.expected.items() if derived.get(k) != v}
