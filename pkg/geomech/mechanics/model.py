"""Mechanical models and the implicit systems derived from them.

Variable names follow fixed templates on the position names ``x``:
velocities ``v_{x}``, momenta ``p_{x}``, momentum rates ``pdot_{x}`` and
accelerations ``{x}ddot``.
"""
from dataclasses import dataclass, field

from geomech.errors import ModelValidationError
from geomech.symbolic import CompiledExprs, Role, VarTable, equation_latex, equation_text, free_variables


def velocity_name(x):
    return f"v_{x}"


def momentum_name(x):
    return f"p_{x}"


def momentum_rate_name(x):
    return f"pdot_{x}"


def acceleration_name(x):
    return f"{x}ddot"


@dataclass
class MechModel:
    """Mechanical system on M = R^n.

    Args:
        coords (list[str]): Position names x^1..x^n.
        L (Expr, optional): Lagrangian over (x, v).
        H (Expr, optional): Hamiltonian over (x, p).
        name (str): Label used in reports.
    """
    coords: list
    L: object = None
    H: object = None
    name: str = "model"
    vartable: VarTable = field(init=False, repr=False)

    def __post_init__(self):
        self.coords = list(self.coords)
        if not self.coords:
            raise ModelValidationError("a mechanical model needs at least one coordinate")
        if self.L is None and self.H is None:
            raise ModelValidationError(f"model '{self.name}' defines neither L nor H")
        table = VarTable()
        table.extend(self.momentum_rates, Role.MOMENTUM_JET)
        table.extend(self.momenta, Role.MOMENTUM)
        table.extend(self.accelerations, Role.SECOND_JET)
        table.extend(self.velocities, Role.JET)
        table.extend(self.coords, Role.FIBER)
        self.vartable = table
        self._check("L", self.L, set(self.coords) | set(self.velocities))
        self._check("H", self.H, set(self.coords) | set(self.momenta))

    def _check(self, label, e, allowed):
        if e is None:
            return
        extra = sorted(free_variables(e) - allowed)
        if extra:
            raise ModelValidationError(f"{label} of '{self.name}' uses undeclared variables {', '.join(extra)}")

    @property
    def n(self):
        return len(self.coords)

    @property
    def velocities(self):
        return [velocity_name(x) for x in self.coords]

    @property
    def momenta(self):
        return [momentum_name(x) for x in self.coords]

    @property
    def momentum_rates(self):
        return [momentum_rate_name(x) for x in self.coords]

    @property
    def accelerations(self):
        return [acceleration_name(x) for x in self.coords]

    @property
    def state(self):
        return self.coords + self.momenta

    def with_hamiltonian(self, H):
        return MechModel(self.coords, self.L, H, self.name)


@dataclass(frozen=True)
class ImplicitSystem:
    """Phase dynamics as equations ``F(x, p, xdot, pdot) = 0``.

    ``state`` lists x then p. ``rates`` maps each state name to the name of
    its time derivative (``v_x`` for x, ``pdot_x`` for p). ``algebraic`` names
    the rates that cannot be eliminated (velocities of a singular system),
    ``constraints`` are the primary constraints on the state and ``rhs`` the
    explicit right-hand sides when the system is an ODE.
    """
    equations: tuple
    vartable: VarTable
    state: tuple
    rates: dict
    algebraic: tuple = ()
    constraints: tuple = ()
    singular: bool = False
    rhs: dict = None

    def text(self, fmt="text"):
        """Stable printed form, one ``... = 0`` line per equation."""
        render = equation_latex if fmt == "latex" else equation_text
        return [render(e, self.vartable.sort_key) for e in self.equations]

    def constraint_text(self, fmt="text"):
        render = equation_latex if fmt == "latex" else equation_text
        return [render(e, self.vartable.sort_key) for e in self.constraints]

    def residual(self, point):
        """Equation values at a point given as a name to value mapping."""
        names = list(point)
        return CompiledExprs(list(self.equations), names)([point[n] for n in names])
