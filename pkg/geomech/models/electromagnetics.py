"""Scalar, vector and electromagnetic densities for a constant metric.

The electromagnetic field is a section A of T*M, stored as fiber
coordinates ``A1..Am`` with A_j the coefficient of dx^j, and
F_ij = d_i A_j - d_j A_i.
"""
import logging
from dataclasses import dataclass

import numpy as np

from geomech.field.dynamics import field_legendre
from geomech.field.model import FieldModel
from geomech.symbolic import CompiledExprs, Const, Var, diff, simplify, sum_exprs

log = logging.getLogger(__name__)


def _metric(m, metric):
    return np.eye(m) if metric is None else np.asarray(metric, dtype=float)


def _base(m):
    return [f"x{i + 1}" for i in range(m)]


def scalar_model(m, metric=None, name=None, scheme="compact"):
    """Scalar field with L = 1/2 sqrt|g| g^ij y_i y_j and H = 1/2 g_ij p^i p^j / sqrt|g|."""
    g = _metric(m, metric)
    shell = FieldModel(_base(m), ["y"], L=Const(0.0), metric=g, scheme=scheme)
    return FieldModel(shell.base, shell.fiber, L=scalar_lagrangian(shell, g), H=scalar_hamiltonian(shell, g),
                      metric=g, name=name or f"scalar_flat{m}", scheme=scheme)


def scalar_lagrangian(fm, metric):
    inverse = np.linalg.inv(metric)
    volume = np.sqrt(abs(np.linalg.det(metric)))
    terms = [Const(0.5 * volume * inverse[i, j]) * Var(fm.jet(0, i)) * Var(fm.jet(0, j))
             for i in range(fm.m) for j in range(fm.m) if inverse[i, j] != 0]
    return simplify(sum_exprs(terms), fm.vartable.sort_key)


def scalar_hamiltonian(fm, metric):
    """The density of 1/2 p ^ *p for the (m-1)-form momentum p = p^i eta_i."""
    metric = np.asarray(metric, dtype=float)
    volume = np.sqrt(abs(np.linalg.det(metric)))
    terms = [Const(0.5 * metric[i, j] / volume) * Var(fm.momentum(i, 0)) * Var(fm.momentum(j, 0))
             for i in range(fm.m) for j in range(fm.m) if metric[i, j] != 0]
    return simplify(sum_exprs(terms), fm.vartable.sort_key)


def field_strength(fm, i, j):
    """F_ij = A{j}_{i} - A{i}_{j} as an expression in the first jets."""
    return Var(fm.jet(j, i)) - Var(fm.jet(i, j))


def em_lagrangian(fm, metric):
    """1/4 sqrt|g| g^ik g^jl F_ij F_kl, which is 1/2 F ^ *F for the fixed orientation."""
    inverse = np.linalg.inv(metric)
    volume = np.sqrt(abs(np.linalg.det(metric)))
    m = fm.m
    terms = []
    for i in range(m):
        for j in range(m):
            for k in range(m):
                for l in range(m):
                    c = inverse[i, k] * inverse[j, l]
                    if c != 0 and i != j and k != l:
                        terms.append(Const(0.25 * volume * c) * field_strength(fm, i, j) * field_strength(fm, k, l))
    return simplify(sum_exprs(terms), fm.vartable.sort_key)


def em_model(m, metric=None, name=None, scheme="compact"):
    g = _metric(m, metric)
    shell = FieldModel(_base(m), [f"A{i + 1}" for i in range(m)], L=Const(0.0), metric=g, scheme=scheme)
    return FieldModel(shell.base, shell.fiber, L=em_lagrangian(shell, g), metric=g,
                      name=name or f"em{m}", scheme=scheme)


def alpha2_vector(p, pjet):
    """(p^j_a, p^k_{bl}) -> (sum_j p^j_{aj}, p^k_b) for a vector-valued field."""
    p = np.asarray(p, dtype=float)
    pjet = np.asarray(pjet, dtype=float)
    return np.einsum("jaj->a", pjet), p.copy()


@dataclass
class GeneratingFamilyCheck:
    """Stationarity of phi(j^1 A) - L(j^1 A) in the jet directions."""
    m: int
    samples: int
    on_image_gradient: float
    off_image_gradient: float
    symmetric_momentum: float

    @property
    def passed(self):
        return self.on_image_gradient <= 1e-10 and self.off_image_gradient > 1e-6 and self.symmetric_momentum <= 1e-10

    def to_dict(self):
        return {"m": self.m, "samples": self.samples, "on_image_gradient": self.on_image_gradient,
                "off_image_gradient": self.off_image_gradient, "symmetric_momentum": self.symmetric_momentum,
                "passed": self.passed}


def em_generating_family_check(m, samples=100, seed=0):
    """Check that critical points of the electromagnetic family lie on the Legendre image.

    For random jets j^1 A the affine element phi = A0 eta + B^i_a dA^a ^ eta_i
    makes phi - L stationary in the jets exactly when B equals the Legendre image
    lambda(j^1 A). The check reports the gradient with B = lambda, the smallest
    gradient after a symmetric perturbation of B, and the largest symmetric
    momentum p^i_j + p^j_i of lambda.
    """
    if m not in (2, 3):
        raise ValueError(f"em_generating_family_check supports m in (2, 3), got {m}")
    fm = em_model(m)
    pairs = [(a, i) for a in range(fm.k) for i in range(fm.m)]
    jets = [fm.jet(a, i) for a, i in pairs]
    momenta = [fm.momentum(i, a) for a, i in pairs]
    family = sum_exprs([Var(p) * Var(j) for p, j in zip(momenta, jets)]) - fm.L
    gradient = CompiledExprs([diff(family, j) for j in jets], jets + momenta)
    legendre = field_legendre(fm)
    image = CompiledExprs([legendre.momenta[p] for p in momenta], jets)
    symmetric = CompiledExprs(list(legendre.symmetric.values()), jets)
    rng = np.random.default_rng(seed)
    on_image, off_image, sym = 0.0, np.inf, 0.0
    for _ in range(samples):
        jet = rng.uniform(-1.0, 1.0, len(jets))
        lam = np.broadcast_to(image(jet), (len(jets),))
        on_image = max(on_image, float(np.max(np.abs(gradient(np.concatenate([jet, lam]))))))
        bump = rng.uniform(-1.0, 1.0, (m, m))
        bump = bump + bump.T
        shifted = lam + np.array([bump[i, a] for a, i in pairs])
        off_image = min(off_image, float(np.max(np.abs(gradient(np.concatenate([jet, shifted]))))))
        if len(symmetric):
            sym = max(sym, float(np.max(np.abs(symmetric(jet)))))
    report = GeneratingFamilyCheck(m, samples, on_image, off_image, sym)
    log.info("EM generating family m=%d: on-image %.3e, off-image %.3e", m, on_image, off_image)
    return report
