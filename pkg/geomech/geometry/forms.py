"""Constant-coefficient symplectic forms used by the property checks.

Vectors are flat arrays in the block order of the matching point type.
"""
import numpy as np

from geomech.errors import ShapeMismatchError


def canonical_matrix(n):
    """Matrix of omega = dp^dq on (q, p) in R^n x R^n, so that omega(u, v) = u @ Omega @ v."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, -eye], [eye, zero]])


def _vec(u, size):
    u = np.asarray(u, dtype=float).ravel()
    if u.size != size:
        raise ShapeMismatchError(f"expected a vector of length {size}, got {u.size}")
    return u


def canonical_form(u, v):
    """Evaluate dp^dq on two flat vectors (q-block first, then p-block of equal length)."""
    u = np.asarray(u, dtype=float).ravel()
    if u.size % 2:
        raise ShapeMismatchError(f"canonical form needs an even length, got {u.size}")
    n = u.size // 2
    v = _vec(v, 2 * n)
    return float(u[n:] @ v[:n] - u[:n] @ v[n:])


def omega_m(Y, X):
    """omega_M(Y, X) for tangent vectors of T*M given as (dq, dp) pairs."""
    yq, yp = (np.asarray(b, dtype=float) for b in Y)
    xq, xp = (np.asarray(b, dtype=float) for b in X)
    return float(yp @ xq - yq @ xp)


def tangent_lift_form(u, v, n):
    """d_T omega_M = dpdot^dx + dp^dxdot on TT*M in the block order (x, p, xdot, pdot)."""
    u, v = _vec(u, 4 * n), _vec(v, 4 * n)
    ux, up, uxd, upd = np.split(u, 4)
    vx, vp, vxd, vpd = np.split(v, 4)
    return float(upd @ vx - ux @ vpd + up @ vxd - uxd @ vp)


def linear_map_matrix(fn, cls, shapes):
    """Matrix of a linear map between point types, built column by column on the flat layout.

    Args:
        fn (callable): Linear map taking an instance of ``cls`` to another point.
        cls (type): Input point type with ``from_flat``.
        shapes (list[tuple]): Block shapes of the input point.

    Returns:
        np.ndarray: Matrix ``J`` with ``fn(P).to_flat() == J @ P.to_flat()``.
    """
    size = sum(int(np.prod(s)) for s in shapes)
    columns = [fn(cls.from_flat(e, shapes)).to_flat() for e in np.eye(size)]
    return np.stack(columns, axis=1)


def pullback_matrix(jacobian, form):
    return jacobian.T @ form @ jacobian
