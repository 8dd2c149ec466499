"""Static systems: constitutive sets and sampled equilibrium tests.

A static system on Q is described by a cost W(q, dq), positively homogeneous
in the virtual displacement dq, and optionally by a set of admissible
displacements given as inequalities g(q, dq) >= 0. A regular system has
W = <dU, dq> for a potential U and its constitutive set is dU(Q).
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from geomech.errors import ModelValidationError
from geomech.symbolic import CompiledExprs, Var, diff, free_variables, sum_exprs

log = logging.getLogger(__name__)

EQUILIBRIUM_TOL = 1e-12


def displacement_name(q):
    return f"d{q}"


@dataclass
class StaticsModel:
    """Static system on Q = R^n.

    Args:
        coords (list[str]): Names of the coordinates q.
        U (Expr, optional): Potential over q.
        W (Expr, optional): Cost over (q, dq); defaults to <dU, dq> when U is given.
        admissible (list[Expr]): Inequalities g(q, dq) >= 0 cutting out the admissible displacements.
    """
    coords: list
    U: object = None
    W: object = None
    admissible: list = field(default_factory=list)

    def __post_init__(self):
        self.coords = list(self.coords)
        allowed = set(self.coords) | set(self.displacements)
        for label, e in [("U", self.U), ("W", self.W)] + [("admissible", g) for g in self.admissible]:
            if e is not None and free_variables(e) - allowed:
                extra = ", ".join(sorted(free_variables(e) - allowed))
                raise ModelValidationError(f"{label} uses undeclared variables {extra}")
        if self.W is None and self.U is not None:
            self.W = sum_exprs([diff(self.U, q) * Var(d) for q, d in zip(self.coords, self.displacements)])

    @property
    def n(self):
        return len(self.coords)

    @property
    def displacements(self):
        return [displacement_name(q) for q in self.coords]


def constitutive_set(s, q):
    """The covector dU(q) of the constitutive set over q."""
    if s.U is None:
        raise ModelValidationError("constitutive_set needs a potential U")
    gradient = [diff(s.U, name) for name in s.coords]
    return np.broadcast_to(CompiledExprs(gradient, s.coords)(np.asarray(q, dtype=float)), (s.n,)).copy()


def in_constitutive_set(s, q, phi, tol=1e-10):
    """Whether the external covector ``phi`` lies in the constitutive set over ``q``."""
    return bool(np.max(np.abs(np.asarray(phi, dtype=float) - constitutive_set(s, q))) <= tol)


@dataclass
class EquilibriumVerdict:
    passed: bool
    min_value: float
    violation: np.ndarray = None
    samples: int = 0


def _directions(n, samples, rng):
    axes = np.vstack([np.eye(n), -np.eye(n)])
    random = rng.normal(size=(samples, n))
    random /= np.linalg.norm(random, axis=1, keepdims=True)
    return np.vstack([axes, random])


def equilibrium_test(s, q, samples=64, phi=None, seed=0):
    """Sampled check of W(q, dq) - <phi, dq> >= 0 over admissible unit displacements.

    The sample set is the signed coordinate axes plus ``samples`` random unit
    vectors, filtered by the admissibility inequalities. Passing is a necessary
    condition for equilibrium, not a certificate.

    Args:
        s (StaticsModel): Static system with a cost W.
        q (array-like): Configuration.
        samples (int): Number of random directions.
        phi (array-like, optional): External covector loading the system.
        seed (int): Seed of the random directions.

    Returns:
        EquilibriumVerdict: PASS flag, smallest value seen and the worst displacement on failure.
    """
    if s.W is None:
        raise ModelValidationError("equilibrium_test needs a cost W or a potential U")
    q = np.asarray(q, dtype=float)
    phi = np.zeros(s.n) if phi is None else np.asarray(phi, dtype=float)
    names = s.coords + s.displacements
    cost = CompiledExprs([s.W], names)
    limits = CompiledExprs(list(s.admissible), names)
    best_value, worst = np.inf, None
    checked = 0
    for dq in _directions(s.n, samples, np.random.default_rng(seed)):
        values = np.concatenate([q, dq])
        if len(limits) and np.any(limits(values) < 0):
            continue
        checked += 1
        value = float(cost(values)[0] - phi @ dq)
        if value < best_value:
            best_value, worst = value, dq
    passed = best_value >= -EQUILIBRIUM_TOL
    log.debug("equilibrium test at q=%s: %d admissible samples, min %.3e", q, checked, best_value)
    return EquilibriumVerdict(passed, best_value, None if passed else worst, checked)


def homogeneity_defect(s, q, dq, t):
    """|W(q, t dq) - t W(q, dq)| for t > 0."""
    names = s.coords + s.displacements
    cost = CompiledExprs([s.W], names)
    q, dq = np.asarray(q, dtype=float), np.asarray(dq, dtype=float)
    return abs(float(cost(np.concatenate([q, t * dq]))[0] - t * cost(np.concatenate([q, dq]))[0]))
