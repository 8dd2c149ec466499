"""Field dynamics, Euler-Lagrange and Hamilton equations of a first-order density."""
import logging
from dataclasses import dataclass, field

import numpy as np

from geomech.errors import ModelValidationError
from geomech.mechanics.dynamics import constant_matrix
from geomech.mechanics.model import ImplicitSystem
from geomech.numerics.linalg import canonical_null_basis
from geomech.symbolic import ZERO, Const, Var, diff, free_variables, simplify, substitute, sum_exprs

log = logging.getLogger(__name__)


def _require(fm, attr):
    if getattr(fm, attr) is None:
        raise ModelValidationError(f"model '{fm.name}' has no {attr}")


def _system(fm, equations, constraints=()):
    state = tuple(fm.fiber) + tuple(fm.flat(fm.momenta))
    return ImplicitSystem(tuple(equations), fm.vartable, state, {}, constraints=tuple(constraints),
                          singular=bool(constraints))


def field_dynamics(fm):
    """Equations p^j_b = dL/dy^b_j and sum_l p^l_{dl} = dL/dy^d.

    Momentum equations come first (j outer, b inner), then one divergence
    equation per fiber coordinate.
    """
    _require(fm, "L")
    key = fm.vartable.sort_key
    equations = [simplify(Var(fm.momentum(j, b)) - diff(fm.L, fm.jet(b, j)), key)
                 for j in range(fm.m) for b in range(fm.k)]
    for d in range(fm.k):
        divergence = sum_exprs([Var(fm.momentum_jet(l, d, l)) for l in range(fm.m)])
        equations.append(simplify(divergence - diff(fm.L, fm.fiber[d]), key))
    return _system(fm, equations)


@dataclass
class FieldLegendre:
    """Legendre map (x, y, yjet) -> (x, y, dL/dyjet) with the symmetric momentum split.

    ``symmetric`` holds p^i_j + p^j_i for i < j and is only filled when the
    fiber is identified with the cotangent of the base (k = m).
    """
    momenta: dict
    symmetric: dict = field(default_factory=dict)
    antisymmetric: dict = field(default_factory=dict)


def field_legendre(fm):
    _require(fm, "L")
    key = fm.vartable.sort_key
    momenta = {fm.momentum(i, a): simplify(diff(fm.L, fm.jet(a, i)), key)
               for i in range(fm.m) for a in range(fm.k)}
    leg = FieldLegendre(momenta)
    if fm.k == fm.m:
        for i in range(fm.m):
            for j in range(i + 1, fm.m):
                pij, pji = momenta[fm.momentum(i, j)], momenta[fm.momentum(j, i)]
                label = f"{i + 1}{j + 1}"
                leg.symmetric[label] = simplify(pij + pji, key)
                leg.antisymmetric[label] = simplify((pij - pji) / 2, key)
    return leg


def total_derivative(fm, e, i):
    """D_i e = d_i e + sum_b y^b_i de/dy^b + sum_{b,j} y^b_{ij} de/dy^b_j."""
    terms = [diff(e, fm.base[i])]
    terms += [Var(fm.jet(b, i)) * diff(e, fm.fiber[b]) for b in range(fm.k)]
    terms += [Var(fm.second_jet(b, i, j)) * diff(e, fm.jet(b, j)) for b in range(fm.k) for j in range(fm.m)]
    return sum_exprs(terms)


def field_el(fm):
    """dL/dy^a - sum_i D_i dL/dy^a_i, one expression per fiber coordinate."""
    _require(fm, "L")
    key = fm.vartable.sort_key
    out = []
    for a in range(fm.k):
        flux = sum_exprs([total_derivative(fm, diff(fm.L, fm.jet(a, i)), i) for i in range(fm.m)])
        out.append(simplify(diff(fm.L, fm.fiber[a]) - flux, key))
    return out


def hamilton_field_equations(fm):
    """Equations y^c_k = dH/dp^k_c and sum_l p^l_{dl} = -dH/dy^d.

    Jet equations come first (k outer, c inner), then the divergence equations.
    """
    _require(fm, "H")
    key = fm.vartable.sort_key
    equations = [simplify(Var(fm.jet(c, k)) - diff(fm.H, fm.momentum(k, c)), key)
                 for k in range(fm.m) for c in range(fm.k)]
    for d in range(fm.k):
        divergence = sum_exprs([Var(fm.momentum_jet(l, d, l)) for l in range(fm.m)])
        equations.append(simplify(divergence + diff(fm.H, fm.fiber[d]), key))
    return _system(fm, equations)


@dataclass
class FieldHamiltonization:
    """Outcome of the jet elimination: H when the jet Hessian is invertible, constraints otherwise."""
    H: object = None
    constraints: list = field(default_factory=list)
    rank: int = 0

    @property
    def singular(self):
        return self.H is None


def field_hamiltonize(fm):
    """Eliminate the jets from p = dL/dyjet for a density quadratic in the jets.

    The jet Hessian must be constant. When it is invertible the result carries
    H = sum p^i_a y^a_i - L with the jets eliminated; when it is singular the
    null vectors of the Hessian give the primary constraints on the momenta.
    """
    _require(fm, "L")
    key = fm.vartable.sort_key
    pairs = [(a, i) for a in range(fm.k) for i in range(fm.m)]
    jets = [fm.jet(a, i) for a, i in pairs]
    momenta = [fm.momentum(i, a) for a, i in pairs]
    first = [diff(fm.L, j) for j in jets]
    hessian = constant_matrix([[diff(f, j) for j in jets] for f in first])
    if hessian is None:
        raise ModelValidationError(f"jet Hessian of '{fm.name}' is not constant")
    rank = int(np.linalg.matrix_rank(hessian, tol=1e-8))
    at_rest = {j: ZERO for j in jets}
    offset = [simplify(substitute(f, at_rest), key) for f in first]
    if rank < len(jets):
        constraints = []
        for row in canonical_null_basis(hessian):
            e = simplify(sum_exprs([float(c) * (Var(p) - f) for c, p, f in zip(row, momenta, first) if c != 0]), key)
            if not free_variables(e) & set(jets):
                constraints.append(e)
        log.info("jet Hessian of '%s' has rank %d of %d", fm.name, rank, len(jets))
        return FieldHamiltonization(constraints=constraints, rank=rank)
    inverse = np.linalg.inv(hessian)
    rhs = [Var(p) - b for p, b in zip(momenta, offset)]
    solved = [simplify(sum_exprs([Const(float(inverse[r, c])) * rhs[c] for c in range(len(rhs)) if inverse[r, c] != 0]),
                       key) for r in range(len(rhs))]
    pairing = sum_exprs([Var(p) * s for p, s in zip(momenta, solved)])
    H = simplify(pairing - substitute(fm.L, dict(zip(jets, solved))), key)
    return FieldHamiltonization(H=H, rank=rank)
