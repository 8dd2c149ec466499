"""Canonical forms on the phase bundle PE and the splitting of J^dagger E.

Phase points are (x, y, p) with ``p[i, a]`` and tangent vectors are
(dx, dy, dp) with the same block shapes. Both forms take values in
(m-1)-forms and are returned as their coefficients on eta_i = i_{d_i} eta.
"""
import numpy as np

from geomech.errors import ShapeMismatchError


def _blocks(tangent, m, k):
    dx, dy, dp = (np.asarray(b, dtype=float) for b in tangent)
    dp = dp.reshape(m, k) if dp.size == m * k else dp
    if dx.shape != (m,) or dy.shape != (k,) or dp.shape != (m, k):
        raise ShapeMismatchError(f"tangent blocks must have shapes ({m},), ({k},), ({m}, {k})")
    return dx, dy, dp


def theta(fm, at, u):
    """theta_P = p^i_a dy^a (x) eta_i evaluated on ``u``."""
    _, _, p = _blocks(at, fm.m, fm.k)
    _, dy, _ = _blocks(u, fm.m, fm.k)
    return p @ dy


def omega(fm, u, w):
    """omega_P = (dp^i_a ^ dy^a) (x) eta_i evaluated on ``(u, w)``."""
    _, dy_u, dp_u = _blocks(u, fm.m, fm.k)
    _, dy_w, dp_w = _blocks(w, fm.m, fm.k)
    return dp_u @ dy_w - dp_w @ dy_u


def canonical_forms_eval(fm, at, u, w):
    """Coefficients of theta_P(u) and omega_P(u, w) on eta_1..eta_m."""
    return theta(fm, at, u), omega(fm, u, w)


def jdagger_eval(fm, phi, jet):
    """Split phi = A eta + B^i_a dy^a ^ eta_i along a first jet.

    Args:
        fm (FieldModel): Model fixing (m, k).
        phi (tuple): ``(A, B)`` with ``B[j, a]``.
        jet (tuple): ``(y, yjet)`` with ``yjet[j, a]``.

    Returns:
        tuple[float, np.ndarray]: ``A + sum B^j_a y^a_j`` and the phase part ``B``.
    """
    A, B = phi
    B = np.asarray(B, dtype=float).reshape(fm.m, fm.k)
    _, yjet = jet
    yjet = np.asarray(yjet, dtype=float).reshape(fm.m, fm.k)
    return float(A + np.sum(B * yjet)), B.copy()
