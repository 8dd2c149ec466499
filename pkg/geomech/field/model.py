"""First-order field models on the trivial bundle E = R^m x R^k -> R^m.

Densities are coefficients with respect to eta = dx^1 ^ ... ^ dx^m. Jet and
momentum names come from a naming scheme:

* ``compact`` (catalog): ``{y}_{i}``, ``{y}_{i}{j}``, ``p{i}_{y}``, ``p{i}_{y}_{j}``;
* ``file`` (model files): ``{y}_d{i}``, ``{y}_d{i}d{j}``, ``p{i}_{y}``, ``p{i}_{y}_d{j}``.

Indices are 1-based in names and 0-based in arrays.
"""
from dataclasses import dataclass, field

import numpy as np

from geomech.errors import ModelValidationError, ShapeMismatchError
from geomech.mechanics.model import acceleration_name, momentum_name, momentum_rate_name, velocity_name
from geomech.symbolic import Role, VarTable, free_variables

SCHEMES = {
    "compact": ("{y}_{i}", "{y}_{i}{j}", "p{i}_{y}", "p{i}_{y}_{j}"),
    "file": ("{y}_d{i}", "{y}_d{i}d{j}", "p{i}_{y}", "p{i}_{y}_d{j}"),
}


@dataclass
class FieldModel:
    """Field theory with base coordinates ``base`` and fiber coordinates ``fiber``.

    Args:
        base (list[str]): Names x^1..x^m.
        fiber (list[str]): Names y^1..y^k.
        L (Expr, optional): Lagrangian density over (x, y, yjet).
        H (Expr, optional): Hamiltonian density over (x, y, p).
        metric (array-like, optional): Constant symmetric metric on the base.
        name (str): Label used in reports.
        scheme (str): Naming scheme, ``compact`` or ``file``.
    """
    base: list
    fiber: list
    L: object = None
    H: object = None
    metric: np.ndarray = None
    name: str = "field"
    scheme: str = "compact"
    vartable: VarTable = field(init=False, repr=False)

    def __post_init__(self):
        self.base, self.fiber = list(self.base), list(self.fiber)
        if not self.base or not self.fiber:
            raise ModelValidationError("a field model needs base and fiber coordinates")
        if self.scheme not in SCHEMES:
            raise ModelValidationError(f"Unknown naming scheme {self.scheme}")
        if self.L is None and self.H is None:
            raise ModelValidationError(f"model '{self.name}' defines neither L nor H")
        if self.metric is not None:
            metric = np.asarray(self.metric, dtype=float)
            if metric.shape != (self.m, self.m) or not np.allclose(metric, metric.T, atol=1e-12):
                raise ModelValidationError(f"metric of '{self.name}' must be a symmetric {self.m}x{self.m} matrix")
            if abs(np.linalg.det(metric)) <= 1e-12:
                raise ModelValidationError(f"metric of '{self.name}' is degenerate")
            self.metric = metric
        table = VarTable()
        table.extend(self.flat(self.momentum_jets), Role.MOMENTUM_JET)
        table.extend(self.flat(self.momenta), Role.MOMENTUM)
        table.extend(self.second_jet_names(), Role.SECOND_JET)
        table.extend(self.flat(self.jets), Role.JET)
        table.extend(self.fiber, Role.FIBER)
        table.extend(self.base, Role.BASE)
        self.vartable = table
        jets = set(self.flat(self.jets))
        self._check("L", self.L, set(self.base) | set(self.fiber) | jets)
        self._check("H", self.H, set(self.base) | set(self.fiber) | set(self.flat(self.momenta)))

    def _check(self, label, e, allowed):
        if e is not None and free_variables(e) - allowed:
            extra = ", ".join(sorted(free_variables(e) - allowed))
            raise ModelValidationError(f"{label} of '{self.name}' uses undeclared variables {extra}")

    @staticmethod
    def flat(nested):
        out = []
        for item in nested:
            out.extend(FieldModel.flat(item) if isinstance(item, list) else [item])
        return out

    @property
    def m(self):
        return len(self.base)

    @property
    def k(self):
        return len(self.fiber)

    def jet(self, a, i):
        return SCHEMES[self.scheme][0].format(y=self.fiber[a], i=i + 1)

    def second_jet(self, a, i, j):
        i, j = min(i, j), max(i, j)
        return SCHEMES[self.scheme][1].format(y=self.fiber[a], i=i + 1, j=j + 1)

    def momentum(self, i, a):
        return SCHEMES[self.scheme][2].format(y=self.fiber[a], i=i + 1)

    def momentum_jet(self, l, a, j):
        return SCHEMES[self.scheme][3].format(y=self.fiber[a], i=l + 1, j=j + 1)

    @property
    def jets(self):
        """``jets[a][i]`` names y^a_i."""
        return [[self.jet(a, i) for i in range(self.m)] for a in range(self.k)]

    @property
    def momenta(self):
        """``momenta[i][a]`` names p^i_a."""
        return [[self.momentum(i, a) for a in range(self.k)] for i in range(self.m)]

    @property
    def momentum_jets(self):
        """``momentum_jets[l][a][j]`` names the derivative of p^l_a along x^j."""
        return [[[self.momentum_jet(l, a, j) for j in range(self.m)] for a in range(self.k)] for l in range(self.m)]

    def second_jet_names(self):
        return [self.second_jet(a, i, j) for a in range(self.k) for i in range(self.m) for j in range(i, self.m)]

    def mechanics_names(self):
        """Renaming onto the mechanics templates for a model over a one-dimensional base."""
        if self.m != 1:
            raise ShapeMismatchError(f"mechanics reduction needs m = 1, got m = {self.m}")
        names = {}
        for a, y in enumerate(self.fiber):
            names[self.jet(a, 0)] = velocity_name(y)
            names[self.second_jet(a, 0, 0)] = acceleration_name(y)
            names[self.momentum(0, a)] = momentum_name(y)
            names[self.momentum_jet(0, a, 0)] = momentum_rate_name(y)
        return names


@dataclass(frozen=True)
class FieldSample2:
    """Point (x, y, yjet, yjet2) of J^2 E; ``yjet2[i, j, a]`` is symmetric in (i, j)."""
    x: np.ndarray
    y: np.ndarray
    yjet: np.ndarray
    yjet2: np.ndarray

    def __post_init__(self):
        m, k = np.size(self.x), np.size(self.y)
        shapes = {"x": (m,), "y": (k,), "yjet": (m, k), "yjet2": (m, m, k)}
        for name, shape in shapes.items():
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.ndim <= 1 and arr.size == int(np.prod(shape)):
                arr = arr.reshape(shape)
            if arr.shape != shape:
                raise ShapeMismatchError(f"{name}: expected shape {shape}, got {arr.shape}")
            object.__setattr__(self, name, arr)
        if np.max(np.abs(self.yjet2 - self.yjet2.transpose(1, 0, 2)), initial=0.0) > 1e-12:
            raise ShapeMismatchError("second jets must be symmetric in the derivative indices")

    def values(self, fm):
        """Name to value mapping on the variables of ``fm``."""
        out = dict(zip(fm.base, self.x)) | dict(zip(fm.fiber, self.y))
        for a in range(fm.k):
            for i in range(fm.m):
                out[fm.jet(a, i)] = self.yjet[i, a]
                for j in range(i, fm.m):
                    out[fm.second_jet(a, i, j)] = self.yjet2[i, j, a]
        return out
