"""Affine duals, AV-bundles over a point and the phase space P V^dagger_W.

For vector spaces W in V the phase space of the AV-bundle V^dagger_W (affine
maps on the cosets of W) is modelled in the chart (q, a; xi_q, xi_a), with
q in V/W, a in W^*, xi_q in (V/W)^* and xi_a in W. A complement U of W
identifies V with U x W and gives the isomorphism with T^*V, (v, alpha).

Quotient coordinates are ``q = Q v`` with ``Q`` a basis of the annihilator of W.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space

from geomech.errors import RankError, ShapeMismatchError
from geomech.geometry.forms import canonical_form
from geomech.symbolic import CompiledExprs, diff

log = logging.getLogger(__name__)

RANK_THRESHOLD = 1e-8


def _columns(values, rows):
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return np.zeros((rows, 0))
    return arr.reshape(rows, -1)


def _smallest_singular_value(matrix):
    if matrix.size == 0:
        return np.inf
    return float(np.linalg.svd(matrix, compute_uv=False).min())


@dataclass(frozen=True)
class SubspacePair:
    """W in V = R^dimV, with the columns of ``basisW`` spanning W."""
    dimV: int
    basisW: np.ndarray

    def __post_init__(self):
        basis = _columns(self.basisW, self.dimV)
        if basis.shape[1] > self.dimV:
            raise RankError(f"dimW = {basis.shape[1]} exceeds dimV = {self.dimV}")
        if basis.shape[1] and _smallest_singular_value(basis) <= RANK_THRESHOLD:
            raise RankError("columns of basisW are linearly dependent")
        object.__setattr__(self, "basisW", basis)

    @property
    def dimW(self):
        return self.basisW.shape[1]

    @property
    def quotient(self):
        """Rows of Q: coordinates on V/W, the identity when W = 0."""
        if self.dimW == 0:
            return np.eye(self.dimV)
        return null_space(self.basisW.T).T


@dataclass(frozen=True)
class AffineDualElement:
    """Affine map a -> linear @ a + constant with values in R."""
    linear: np.ndarray
    constant: float = 0.0

    def __post_init__(self):
        linear = np.asarray(self.linear, dtype=float).ravel()
        if not np.all(np.isfinite(linear)) or not np.isfinite(self.constant):
            raise ValueError("affine dual element must have finite entries")
        object.__setattr__(self, "linear", linear)
        object.__setattr__(self, "constant", float(self.constant))

    def __call__(self, a):
        return float(self.linear @ np.asarray(a, dtype=float) + self.constant)


@dataclass(frozen=True)
class ComplementChoice:
    """Columns spanning a complement U of W in V."""
    basisU: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "basisU", np.asarray(self.basisU, dtype=float))

    def validate(self, sp):
        basis = _columns(self.basisU, sp.dimV)
        if basis.shape[1] != sp.dimV - sp.dimW:
            raise RankError(f"complement needs {sp.dimV - sp.dimW} columns, got {basis.shape[1]}")
        if _smallest_singular_value(np.hstack([sp.basisW, basis])) <= RANK_THRESHOLD:
            raise RankError("basisW and basisU do not span V")
        return basis


@dataclass(frozen=True)
class PhasePoint:
    """Point (q, a; xi_q, xi_a) of P V^dagger_W."""
    q: np.ndarray
    a: np.ndarray
    xi_q: np.ndarray
    xi_a: np.ndarray

    def to_flat(self):
        return np.concatenate([self.q, self.a, self.xi_q, self.xi_a])

    @classmethod
    def from_flat(cls, flat, sp):
        k, r = sp.dimV - sp.dimW, sp.dimW
        flat = np.asarray(flat, dtype=float)
        return cls(flat[:k], flat[k:k + r], flat[k + r:2 * k + r], flat[2 * k + r:])


def affine_dual_projection(phi):
    """Linear part of an affine map (the projection A^dagger -> v(A)^*)."""
    return phi.linear.copy()


def phase_of_avbundle(F, point, names=None):
    """Affine differential of a section F of the trivial AV-bundle base x R.

    Args:
        F (Expr): Section, expressed against the zero reference section.
        point (array-like): Base point.
        names (list[str], optional): Base coordinate names, ``m1, m2, ...`` by default.

    Returns:
        np.ndarray: ``(m, dF(m))`` concatenated.
    """
    point = np.asarray(point, dtype=float).ravel()
    names = names or [f"m{i + 1}" for i in range(point.size)]
    if len(names) != point.size:
        raise ShapeMismatchError(f"{len(names)} coordinate names for a point of size {point.size}")
    gradient = CompiledExprs([diff(F, name) for name in names], names)(point)
    return np.concatenate([point, gradient])


def lift_quotient(sp, basisU, q):
    """Representative in U of the class q in V/W."""
    q = np.asarray(q, dtype=float)
    if sp.dimW == 0:
        return q.copy()
    if sp.dimW == sp.dimV:
        return np.zeros((sp.dimV,) + q.shape[1:])
    return basisU @ np.linalg.solve(sp.quotient @ basisU, q)


def extend_covector(sp, basisU, a):
    """Covector on V equal to a on W and vanishing on U."""
    rhs = np.concatenate([np.asarray(a, dtype=float), np.zeros(sp.dimV - sp.dimW)])
    return np.linalg.solve(np.hstack([sp.basisW, basisU]).T, rhs)


def theorem1_iso(sp, u, pt):
    """Isomorphism P V^dagger_W -> T^*V built from the complement U.

    The chart of P V^dagger_W through U is T^*U x T^*W^*; the first factor is
    kept and the second goes to T^*W through R_W composed with minus the
    identity, then both are reassembled on V = U + W.

    Args:
        sp (SubspacePair): Subspace data.
        u (ComplementChoice): Complement of W.
        pt (PhasePoint): Point (q, a; xi_q, xi_a).

    Returns:
        tuple[np.ndarray, np.ndarray]: ``(v, alpha)`` on T^*V.

    Raises:
        RankError: If ``u`` does not complement W.
    """
    basisU = u.validate(sp)
    v = lift_quotient(sp, basisU, pt.q) - sp.basisW @ np.asarray(pt.xi_a, dtype=float)
    alpha = extend_covector(sp, basisU, pt.a) + sp.quotient.T @ np.asarray(pt.xi_q, dtype=float)
    return v, alpha


def minus_r_vector(v, alpha):
    """-R_V : T^*V -> T^*V^*, (v, alpha) -> (alpha, -v)."""
    return np.asarray(alpha, dtype=float).copy(), -np.asarray(v, dtype=float)


@dataclass(frozen=True)
class AffineSection:
    """A section of V^dagger_W -> V/W x W^* with quadratic free part.

    ``L`` (dimV x dimW) satisfies basisW.T @ L = I, so ``L @ a`` is a covector on V
    extending a. In the chart of a complement U the section reads
    ``r_U(q, a) = (L a) . F_U q + h(q, a)`` with ``h`` the quadratic
    ``0.5 z H z + g z`` on ``z = (q, a)``.
    """
    L: np.ndarray
    H: np.ndarray
    g: np.ndarray

    def chart_differential(self, sp, u, q, a):
        """Chart coordinates (xi_q, xi_a) of the affine differential at (q, a)."""
        basisU = u.validate(sp)
        k = sp.dimV - sp.dimW
        q, a = np.asarray(q, dtype=float), np.asarray(a, dtype=float)
        lift = lift_quotient(sp, basisU, np.eye(k)) if k else np.zeros((sp.dimV, 0))
        grad_h = self.H @ np.concatenate([q, a]) + self.g
        xi_q = lift.T @ (self.L @ a) + grad_h[:k]
        xi_a = self.L.T @ (lift @ q) + grad_h[k:]
        return xi_q, xi_a

    def phase_point(self, sp, u, q, a):
        xi_q, xi_a = self.chart_differential(sp, u, q, a)
        return PhasePoint(np.asarray(q, dtype=float), np.asarray(a, dtype=float), xi_q, xi_a)


def _uniform(rng, shape):
    return rng.uniform(-1.0, 1.0, size=shape)


def random_subspace_pair(dimV, dimW, rng):
    """Draw W with entries uniform in [-1, 1], redrawing rank-deficient bases."""
    while True:
        basis = _uniform(rng, (dimV, dimW))
        if dimW == 0 or _smallest_singular_value(basis) > RANK_THRESHOLD:
            return SubspacePair(dimV, basis)


def random_complement(sp, rng):
    while True:
        basis = _uniform(rng, (sp.dimV, sp.dimV - sp.dimW))
        if _smallest_singular_value(np.hstack([sp.basisW, basis])) > RANK_THRESHOLD:
            return ComplementChoice(basis)


def random_section(sp, rng):
    """A random AffineSection over ``sp``."""
    left_inverse = np.linalg.pinv(sp.basisW).T if sp.dimW else np.zeros((sp.dimV, 0))
    # any L with basisW.T @ L = I: pseudo-inverse plus an annihilator part
    L = left_inverse + sp.quotient.T @ _uniform(rng, (sp.dimV - sp.dimW, sp.dimW))
    H = _uniform(rng, (sp.dimV, sp.dimV))
    return AffineSection(L, H + H.T, _uniform(rng, sp.dimV))


def random_phase_point(sp, rng):
    k = sp.dimV - sp.dimW
    return PhasePoint(*(_uniform(rng, n) for n in (k, sp.dimW, k, sp.dimW)))


@dataclass
class SymplectoReport:
    """Outcome of a symplectic pullback check."""
    dimV: int
    dimW: int
    trials: int
    max_deviation: float = 0.0
    worst_pair: tuple = field(default=None, repr=False)

    def to_dict(self):
        worst = None if self.worst_pair is None else [w.tolist() for w in self.worst_pair]
        return {"dimV": self.dimV, "dimW": self.dimW, "trials": self.trials,
                "max_deviation": self.max_deviation, "worst_pair": worst}


def _iso_flat(sp, u, flat):
    v, alpha = theorem1_iso(sp, u, PhasePoint.from_flat(flat, sp))
    return np.concatenate([v, alpha])


def check_symplecto(sp, u, trials, seed=0):
    """Compare the canonical form of T^*V pulled back through ``theorem1_iso`` with the chart form.

    The isomorphism is linear, so tangent vectors are mapped by the map itself.
    The chart form is dxi_q^dq + dxi_a^da on (q, a; xi_q, xi_a).

    Args:
        sp (SubspacePair): Subspace data.
        u (ComplementChoice): Complement of W.
        trials (int): Number of random vector pairs, at least 1.
        seed (int): Seed of the vector draws.

    Returns:
        SymplectoReport: Maximal absolute deviation and the pair attaining it.
    """
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    u.validate(sp)
    report = SymplectoReport(sp.dimV, sp.dimW, trials)
    for child in np.random.SeedSequence(seed).spawn(trials):
        rng = np.random.default_rng(child)
        x, y = _uniform(rng, 2 * sp.dimV), _uniform(rng, 2 * sp.dimV)
        pulled = canonical_form(_iso_flat(sp, u, x), _iso_flat(sp, u, y))
        deviation = abs(pulled - canonical_form(x, y))
        if report.worst_pair is None or deviation > report.max_deviation:
            report.max_deviation, report.worst_pair = deviation, (x, y)
    log.info("symplectic pullback over %d trials: max deviation %.3e", trials, report.max_deviation)
    return report


@dataclass
class IndependenceReport:
    trials: int
    max_difference: float = 0.0
    max_symplectic_deviation: float = 0.0
    records: list = field(default_factory=list, repr=False)


def complement_independence(trials, max_dim=6, seed=0):
    """Draw (V, W, U, U', section, point) instances and compare the T^*V images.

    Each trial draws dimV in [1, max_dim] and dimW in [0, dimV], a section of
    V^dagger_W and two complements. The images of the section's affine
    differential must agree; the symplectic check runs on the first complement.
    """
    report = IndependenceReport(trials)
    for child in np.random.SeedSequence(seed).spawn(trials):
        rng = np.random.default_rng(child)
        dimV = int(rng.integers(1, max_dim + 1))
        dimW = int(rng.integers(0, dimV + 1))
        sp = random_subspace_pair(dimV, dimW, rng)
        u, u_prime = random_complement(sp, rng), random_complement(sp, rng)
        section = random_section(sp, rng)
        q, a = _uniform(rng, dimV - dimW), _uniform(rng, dimW)
        v1, a1 = theorem1_iso(sp, u, section.phase_point(sp, u, q, a))
        v2, a2 = theorem1_iso(sp, u_prime, section.phase_point(sp, u_prime, q, a))
        difference = float(max(np.max(np.abs(v1 - v2), initial=0.0), np.max(np.abs(a1 - a2), initial=0.0)))
        symplecto = check_symplecto(sp, u, 1, seed=int(rng.integers(2**31)))
        report.max_difference = max(report.max_difference, difference)
        report.max_symplectic_deviation = max(report.max_symplectic_deviation, symplecto.max_deviation)
        report.records.append({"dimV": dimV, "dimW": dimW, "difference": difference,
                               "symplectic_deviation": symplecto.max_deviation})
    return report
