"""Legendre map, hyperregularity probe and Hamiltonian recovery.

A Lagrangian generates the same phase dynamics as the family
``L(x, v) - <p, v>`` on T*M x_M TM. When the family has a unique critical
point in v for every (x, p) its critical value is -H; otherwise the family
itself is reported.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from geomech.errors import ModelValidationError
from geomech.mechanics.dynamics import (
    ProbeConfig,
    constant_matrix,
    hessian_ranks,
    primary_constraints,
    velocity_hessian,
)
from geomech.numerics.linalg import RANK_TOL, numeric_rank
from geomech.numerics.newton import NewtonConfig, NewtonSystem
from geomech.symbolic import (
    ZERO,
    CompiledExprs,
    Const,
    Var,
    diff,
    equation_text,
    polynomial_degree,
    simplify,
    substitute,
    sum_exprs,
    to_text,
)

log = logging.getLogger(__name__)


@dataclass
class LegendreMap:
    """Symbolic fiber derivative (x, v) -> (x, dL/dv) with its Hessian and probe ranks."""
    momenta: dict
    hessian: list
    ranks: list
    n: int

    @property
    def hyperregular(self):
        return all(r == self.n for r in self.ranks)

    @property
    def min_rank(self):
        return min(self.ranks) if self.ranks else self.n


def hessian_rank(m, point, rank_tol=RANK_TOL):
    """Numeric rank of the velocity Hessian at a point given as a name to value mapping."""
    entries = [e for row in velocity_hessian(m) for e in row]
    names = m.coords + m.velocities
    values = CompiledExprs(entries, names)([point[name] for name in names])
    return numeric_rank(np.broadcast_to(values, (m.n * m.n,)).reshape(m.n, m.n), rank_tol)


def legendre(m, probe=None):
    """Legendre map of ``m`` with the Hessian rank at each probe point.

    Args:
        m (MechModel): Model with a Lagrangian.
        probe (ProbeConfig, optional): Box and sample count, 32 points in [-1, 1] by default.

    Returns:
        LegendreMap: ``p_j = dL/dv_j`` and the rank table.
    """
    if m.L is None:
        raise ModelValidationError(f"model '{m.name}' has no L")
    probe = probe or ProbeConfig()
    key = m.vartable.sort_key
    momenta = {p: simplify(diff(m.L, v), key) for p, v in zip(m.momenta, m.velocities)}
    hessian = velocity_hessian(m)
    ranks = hessian_ranks(m, hessian, probe)
    log.info("Legendre probe of '%s': ranks %d..%d over %d points", m.name, min(ranks), max(ranks), len(ranks))
    return LegendreMap(momenta, hessian, ranks, m.n)


def generating_family(m):
    """L(x, v) - sum_j p_j v^j over T*M x_M TM."""
    key = m.vartable.sort_key
    return simplify(m.L - sum_exprs([Var(p) * Var(v) for p, v in zip(m.momenta, m.velocities)]), key)


@dataclass
class GeneratingFamilyReport:
    """No single Hamiltonian: the family, the probe ranks and the primary constraints."""
    family: object
    ranks: list
    constraints: list = field(default_factory=list)
    vartable: object = None

    def text(self):
        key = self.vartable.sort_key if self.vartable is not None else None
        lines = [f"generating family: {to_text(self.family)}",
                 f"velocity Hessian rank: {min(self.ranks)}..{max(self.ranks)} over {len(self.ranks)} probe points"]
        lines += [f"constraint: {equation_text(c, key)}" for c in self.constraints]
        return lines


class NumericHamiltonian:
    """H(x, p) evaluated through Newton on the critical-point equations dL/dv = p.

    Args:
        m (MechModel): Regular model whose Lagrangian is not quadratic in v.
        cfg (NewtonConfig, optional): Newton parameters.
    """

    def __init__(self, m, cfg=None):
        self.model = m
        critical = [diff(m.L, v) - Var(p) for v, p in zip(m.velocities, m.momenta)]
        self.newton = NewtonSystem(critical, m.velocities, m.coords + m.momenta, cfg or NewtonConfig())
        self._lagrangian = CompiledExprs([m.L], m.coords + m.velocities)

    def velocity(self, x, p):
        x, p = np.atleast_1d(np.asarray(x, dtype=float)), np.atleast_1d(np.asarray(p, dtype=float))
        return self.newton.solve(p, np.concatenate([x, p])).x

    def __call__(self, x, p):
        x, p = np.atleast_1d(np.asarray(x, dtype=float)), np.atleast_1d(np.asarray(p, dtype=float))
        v = self.velocity(x, p)
        return float(p @ v - self._lagrangian(np.concatenate([x, v]))[0])

    def text(self):
        return [f"H({', '.join(self.model.state)}) evaluated numerically from dL/dv = p"]


def _determinant(rows):
    if len(rows) == 1:
        return rows[0][0]
    return sum_exprs([(1 if j % 2 == 0 else -1) * rows[0][j] * _determinant([r[:j] + r[j + 1:] for r in rows[1:]])
                      for j in range(len(rows))])


def _solve_linear(hessian, rhs, key):
    """Solve Hessian @ v = rhs symbolically: numeric inverse when constant, Cramer's rule otherwise."""
    numeric = constant_matrix(hessian)
    n = len(rhs)
    if numeric is not None:
        inverse = np.linalg.inv(numeric)
        return [simplify(sum_exprs([Const(float(inverse[i, j])) * rhs[j] for j in range(n) if inverse[i, j] != 0]), key)
                for i in range(n)]
    det = simplify(_determinant(hessian), key)
    solution = []
    for i in range(n):
        replaced = [row[:i] + [rhs[r]] + row[i + 1:] for r, row in enumerate(hessian)]
        solution.append(simplify(_determinant(replaced), key) / det)
    return solution


def hamiltonize(m, probe=None, cfg=None):
    """Hamiltonian generating the same phase dynamics as the Lagrangian of ``m``.

    Args:
        m (MechModel): Model with a Lagrangian.
        probe (ProbeConfig, optional): Hyperregularity probe.
        cfg (NewtonConfig, optional): Newton parameters for the numeric branch.

    Returns:
        Expr: H(x, p) when L is quadratic in v with an invertible Hessian on the probe set.
        NumericHamiltonian: When L is regular on the probe set but not quadratic in v.
        GeneratingFamilyReport: When the Hessian is rank deficient somewhere on the probe set.

    Raises:
        ConvergenceError: If the numeric branch fails at a probe point.
    """
    probe = probe or ProbeConfig()
    leg = legendre(m, probe)
    if not leg.hyperregular:
        return GeneratingFamilyReport(generating_family(m), leg.ranks, primary_constraints(m), m.vartable)
    key = m.vartable.sort_key
    degree = polynomial_degree(m.L, m.velocities)
    if degree is not None and degree <= 2:
        at_rest = {v: ZERO for v in m.velocities}
        offset = [simplify(substitute(leg.momenta[p], at_rest), key) for p in m.momenta]
        velocity = _solve_linear(leg.hessian, [Var(p) - b for p, b in zip(m.momenta, offset)], key)
        elimination = dict(zip(m.velocities, velocity))
        pairing = sum_exprs([Var(p) * v for p, v in zip(m.momenta, velocity)])
        return simplify(pairing - substitute(m.L, elimination), key)
    numeric = NumericHamiltonian(m, cfg)
    for point in probe.points(2 * m.n):
        numeric(point[:m.n], point[m.n:])
    return numeric
