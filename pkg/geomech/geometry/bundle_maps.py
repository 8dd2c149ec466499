"""Canonical maps of the Tulczyjew triple in adapted coordinates.

Mechanics: ``kappa`` on TTM, ``alpha_mech`` : TT*M -> T*TM, ``beta_mech`` : TT*M -> T*T*M,
``r_map`` : T*E -> T*E* and the pairing between TT*M and TTM.
Field theory: ``alpha_field`` : J^1PE -> V^+J^1E, ``beta_field`` : J^1PE -> PJ^dagger E,
``kappa_field`` : VJ^1E -> J^1VE and the pairing of J^1PE with J^1VE.

All maps are linear in the fiber blocks and total on well-shaped tuples.
"""
import numpy as np

from geomech.errors import BaseMismatchError, ShapeMismatchError
from geomech.geometry.points import (
    CotangentOfBundlePoint,
    J1PhasePoint,
    J1VPoint,
    PJDaggerPoint,
    TTMPoint,
    TTStarMPoint,
    VJ1Point,
    VPlusJ1Point,
)


def kappa(pt):
    """Canonical involution of TTM: (x, xdot, dx, dxdot) -> (x, dx, xdot, dxdot)."""
    return TTMPoint(pt.x, pt.dx, pt.xdot, pt.dxdot)


def alpha_mech(pt):
    """alpha_M : TT*M -> T*TM, (x, p, xdot, pdot) -> (x, xdot, pdot, p).

    The image is a covector at the point (x, xdot) of TM whose position part is
    pdot and whose velocity part is p, so that alpha^-1(dL(TM)) is
    p = dL/dxdot, pdot = dL/dx.
    """
    return CotangentOfBundlePoint(pt.x, pt.xdot, pt.pdot, pt.p)


def alpha_mech_inverse(cov):
    return TTStarMPoint(cov.base, cov.pfiber, cov.fiber, cov.pbase)


def beta_mech(pt):
    """beta_M : TT*M -> T*T*M, (x, p, xdot, pdot) -> (x, p, -pdot, xdot).

    With omega_M = dp^dx this is the musical map X -> omega_M(., X).
    """
    return CotangentOfBundlePoint(pt.x, pt.p, -pt.pdot, pt.xdot)


def r_map(pt):
    """R_E : T*E -> T*E*, (x, y, p, xi) -> (x, xi, -p, y)."""
    return CotangentOfBundlePoint(pt.base, pt.pfiber, -pt.pbase, pt.fiber)


def _same(a, b, what):
    if a.shape != b.shape:
        raise ShapeMismatchError(f"{what}: shapes {a.shape} and {b.shape} differ")
    if not np.array_equal(a, b):
        raise BaseMismatchError(f"{what}: base points differ")


def tangent_pairing(X, Y):
    """Pairing <<X, Y>> of TT*M with TTM over TM.

    ``X`` = (x, p, xdot, pdot) is the velocity of a curve p(t) in T*M and
    ``Y`` = (x, a, xdot, c) the velocity of a curve d(t) in TM with d(0) = (x, a)
    and Tτ(Y) = (x, xdot). The value is d/dt <p(t), d(t)> = pdot.a + p.c.

    Raises:
        BaseMismatchError: If X and Y do not share x, or Y.dx differs from X.xdot.
    """
    _same(X.x, Y.x, "tangent_pairing position")
    _same(X.xdot, Y.dx, "tangent_pairing velocity")
    return float(X.pdot @ Y.xdot + X.p @ Y.dxdot)


def covector_pairing(cov, vec):
    """Evaluate a covector on T*TM at a vector of TTM tangent to TM at (x, xdot)."""
    _same(cov.base, vec.x, "covector_pairing position")
    _same(cov.fiber, vec.xdot, "covector_pairing velocity")
    return float(cov.pbase @ vec.dx + cov.pfiber @ vec.dxdot)


def cotangent_pairing(cov, base_point, vector):
    """Evaluate a T*T*M style covector (base, fiber, pbase, pfiber) on a tangent vector at (base, fiber)."""
    dq, dp = vector
    _same(cov.base, np.asarray(base_point[0], dtype=float), "cotangent_pairing position")
    _same(cov.fiber, np.asarray(base_point[1], dtype=float), "cotangent_pairing momentum")
    return float(cov.pbase @ np.asarray(dq, dtype=float) + cov.pfiber @ np.asarray(dp, dtype=float))


def _check_field_shapes(pt, expected):
    if not isinstance(pt, expected):
        raise ShapeMismatchError(f"expected {expected.__name__}, got {type(pt).__name__}")


def alpha_field(pt):
    """alpha : J^1PE -> V^+J^1E, pi_d = sum_l p^l_{dl}, pi^j_b = p^j_b."""
    _check_field_shapes(pt, J1PhasePoint)
    trace = np.einsum("ldl->d", pt.pjet)
    return VPlusJ1Point(pt.x, pt.y, pt.yjet, trace, pt.p)


def beta_field(pt):
    """beta : J^1PE -> PJ^dagger E, p_c = -sum_l p^l_{cl}, jets passed through."""
    _check_field_shapes(pt, J1PhasePoint)
    trace = np.einsum("ldl->d", pt.pjet)
    return PJDaggerPoint(pt.x, pt.y, pt.p, -trace, pt.yjet)


def r_field(pt):
    """Identification V^+J^1E -> PJ^dagger E, (x, y, yjet, pi, pijet) -> (x, y, pijet, -pi, yjet)."""
    _check_field_shapes(pt, VPlusJ1Point)
    return PJDaggerPoint(pt.x, pt.y, pt.pijet, -pt.piy, pt.yjet)


def kappa_field(vj):
    """kappa : VJ^1E -> J^1VE, (x, y, yjet, dy, dyjet) -> (x, y, dy, yjet, dyjet)."""
    _check_field_shapes(vj, VJ1Point)
    return J1VPoint(vj.x, vj.y, vj.dy, vj.yjet, vj.dyjet)


def kappa_field_inverse(jv):
    _check_field_shapes(jv, J1VPoint)
    return VJ1Point(jv.x, jv.y, jv.yjet, jv.dy, jv.dyjet)


def vertical_pairing(cov, vec):
    """Pairing of V^+J^1E with VJ^1E over J^1E: sum_d pi_d dy^d + sum pi^j_b dy^b_j."""
    _check_field_shapes(cov, VPlusJ1Point)
    _check_field_shapes(vec, VJ1Point)
    _same(cov.x, vec.x, "vertical_pairing base")
    _same(cov.y, vec.y, "vertical_pairing fiber")
    _same(cov.yjet, vec.yjet, "vertical_pairing jet")
    return float(cov.piy @ vec.dy + np.sum(cov.pijet * vec.dyjet))


def field_pairing(P, V):
    """Leibniz expansion of the divergence of <p, dsigma> at a point.

    ``P`` is the first jet of a momentum section p and ``V`` the first jet of
    a variation dsigma. The value is sum_b (sum_j p^j_{bj}) dy^b + sum_{j,b} p^j_b d_j dy^b.
    """
    _check_field_shapes(P, J1PhasePoint)
    _check_field_shapes(V, J1VPoint)
    _same(P.x, V.x, "field_pairing base")
    _same(P.y, V.y, "field_pairing fiber")
    _same(P.yjet, V.yjet, "field_pairing jet")
    divergence = np.einsum("jbj->b", P.pjet)
    return float(divergence @ V.dy + np.sum(P.p * V.dyjet))


def field_to_mech(pt):
    """m = 1 identification of J^1PE over a time line with TT*Q x R (time dropped)."""
    _check_field_shapes(pt, J1PhasePoint)
    if pt.m != 1:
        raise ShapeMismatchError(f"field_to_mech needs m = 1, got m = {pt.m}")
    return TTStarMPoint(pt.y, pt.p[0], pt.yjet[0], pt.pjet[0, :, 0])


def vplus_to_mech(pt):
    """m = 1 identification of V^+J^1E with T*TQ x R (time dropped)."""
    _check_field_shapes(pt, VPlusJ1Point)
    if pt.m != 1:
        raise ShapeMismatchError(f"vplus_to_mech needs m = 1, got m = {pt.m}")
    return CotangentOfBundlePoint(pt.y, pt.yjet[0], pt.piy, pt.pijet[0])
