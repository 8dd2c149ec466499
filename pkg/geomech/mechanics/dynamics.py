"""Phase dynamics from a Lagrangian or a Hamiltonian and the Euler-Lagrange equations."""
import logging
from dataclasses import dataclass

import numpy as np

from geomech.errors import ModelValidationError
from geomech.mechanics.model import ImplicitSystem
from geomech.numerics.linalg import RANK_TOL, canonical_null_basis, numeric_rank
from geomech.symbolic import CompiledExprs, Var, constant_value, diff, free_variables, simplify, sum_exprs

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProbeConfig:
    """Sampling box of the hyperregularity probe."""
    samples: int = 32
    low: float = -1.0
    high: float = 1.0
    rank_tol: float = RANK_TOL
    seed: int = 0

    @classmethod
    def from_config(cls, cfg, seed=None):
        return cls(samples=int(cfg.samples), low=float(cfg.low), high=float(cfg.high),
                   rank_tol=float(cfg.rank_tol), seed=int(cfg.seed if seed is None else seed))

    def points(self, dim):
        rng = np.random.default_rng(self.seed)
        return rng.uniform(self.low, self.high, size=(self.samples, dim))


def _require(m, attr):
    if getattr(m, attr) is None:
        raise ModelValidationError(f"model '{m.name}' has no {attr}")


def velocity_hessian(m):
    """Symbolic matrix of second derivatives of L in the velocities."""
    _require(m, "L")
    first = [diff(m.L, v) for v in m.velocities]
    return [[diff(f, v) for v in m.velocities] for f in first]


def constant_matrix(rows):
    """Numeric value of a symbolic matrix when every entry is constant, else None."""
    values = [[constant_value(e) for e in row] for row in rows]
    if any(v is None for row in values for v in row):
        return None
    return np.array(values, dtype=float).reshape(len(rows), -1)


def hessian_ranks(m, hessian, probe):
    """Numeric rank of a symbolic velocity Hessian at every sample point of the (x, v) box."""
    names = m.coords + m.velocities
    compiled = CompiledExprs([e for row in hessian for e in row], names)
    ranks = []
    for point in probe.points(len(names)):
        values = np.broadcast_to(compiled(point), (m.n * m.n,)).reshape(m.n, m.n)
        ranks.append(numeric_rank(values, probe.rank_tol))
    return ranks


def primary_constraints(m):
    """Constraints sum_j c_j (p_j - dL/dv_j) for null vectors c of a constant velocity Hessian.

    Only combinations free of velocities are constraints on T*M. A Hessian
    that depends on the point gives no constraints.
    """
    hessian = constant_matrix(velocity_hessian(m))
    if hessian is None:
        return []
    key = m.vartable.sort_key
    momentum_map = [diff(m.L, v) for v in m.velocities]
    constraints = []
    for row in canonical_null_basis(hessian):
        terms = [float(c) * (Var(p) - dl) for c, p, dl in zip(row, m.momenta, momentum_map) if c != 0]
        e = simplify(sum_exprs(terms), key)
        if not free_variables(e) & set(m.velocities):
            constraints.append(e)
    return constraints


def lagrangian_dynamics(m, probe=None):
    """The phase dynamics alpha^-1(dL(TM)): p_j = dL/dv_j and pdot_l = dL/dx_l.

    Args:
        m (MechModel): Model with a Lagrangian.
        probe (ProbeConfig, optional): Sample points at which a point-dependent velocity
            Hessian is ranked, 32 points in [-1, 1] by default.

    Returns:
        ImplicitSystem: 2n equations, with velocities identified with the x rates.
        Systems whose velocity Hessian is rank deficient at every sample point are
        flagged singular. Primary constraints are only derived for a constant Hessian.
    """
    _require(m, "L")
    key = m.vartable.sort_key
    equations = [simplify(Var(p) - diff(m.L, v), key) for p, v in zip(m.momenta, m.velocities)]
    equations += [simplify(Var(pd) - diff(m.L, x), key) for pd, x in zip(m.momentum_rates, m.coords)]
    symbolic = velocity_hessian(m)
    hessian = constant_matrix(symbolic)
    if hessian is not None:
        singular = numeric_rank(hessian, RANK_TOL) < m.n
    else:
        ranks = hessian_ranks(m, symbolic, probe or ProbeConfig())
        singular = max(ranks) < m.n
        if min(ranks) < m.n and not singular:
            log.info("velocity Hessian of '%s' drops rank at %d of %d sample points",
                     m.name, sum(r < m.n for r in ranks), len(ranks))
    constraints = tuple(primary_constraints(m)) if singular else ()
    if singular:
        log.info("velocity Hessian of '%s' is singular, %d primary constraints", m.name, len(constraints))
    rates = dict(zip(m.coords, m.velocities)) | dict(zip(m.momenta, m.momentum_rates))
    return ImplicitSystem(tuple(equations), m.vartable, tuple(m.state), rates,
                          algebraic=tuple(m.velocities) if singular else (),
                          constraints=constraints, singular=bool(singular))


def euler_lagrange(m):
    """dL/dx_i - d/dt dL/dv_i, the total derivative expanded with the accelerations ``{x}ddot``."""
    _require(m, "L")
    key = m.vartable.sort_key
    out = []
    for x_i, v_i in zip(m.coords, m.velocities):
        momentum = diff(m.L, v_i)
        total = sum_exprs([diff(momentum, x) * Var(v) for x, v in zip(m.coords, m.velocities)]
                          + [diff(momentum, v) * Var(a) for v, a in zip(m.velocities, m.accelerations)])
        out.append(simplify(diff(m.L, x_i) - total, key))
    return out


def hamiltonian_dynamics(m):
    """The phase dynamics beta^-1(dH(T*M)): xdot = dH/dp and pdot = -dH/dx.

    Returns:
        ImplicitSystem: Equations ``v - dH/dp`` and ``pdot + dH/dx`` with ``rhs`` set.
    """
    _require(m, "H")
    key = m.vartable.sort_key
    dh_dp = [diff(m.H, p) for p in m.momenta]
    dh_dx = [diff(m.H, x) for x in m.coords]
    equations = [simplify(Var(v) - d, key) for v, d in zip(m.velocities, dh_dp)]
    equations += [simplify(Var(pd) + d, key) for pd, d in zip(m.momentum_rates, dh_dx)]
    rhs = dict(zip(m.coords, dh_dp)) | {p: simplify(-d, key) for p, d in zip(m.momenta, dh_dx)}
    rates = dict(zip(m.coords, m.velocities)) | dict(zip(m.momenta, m.momentum_rates))
    return ImplicitSystem(tuple(equations), m.vartable, tuple(m.state), rates, rhs=rhs)
