"""Action of a discretized path and the finite-interval variation formula.

On a uniform grid the differential of S(q) = int L(q, qdot) dt is represented
by the covector (f, p0, p1) with f = EL along the path and p0, p1 the
Legendre momenta at the end points:

    dS(q)[dq] = int <f, dq> dt + <p1, dq(t1)> - <p0, dq(t0)>.
"""
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from geomech.errors import GridTooSmallError, ModelValidationError, ShapeMismatchError
from geomech.mechanics.dynamics import euler_lagrange
from geomech.numerics.finite_diff import fd_derivative
from geomech.symbolic import CompiledExprs, diff

MIN_NODES = 16


def _grid(times, path):
    times = np.asarray(times, dtype=float)
    path = np.asarray(path, dtype=float)
    if path.ndim == 1:
        path = path[:, None]
    if times.ndim != 1 or path.shape[0] != times.size:
        raise ShapeMismatchError(f"path has {path.shape[0]} samples for {times.size} grid nodes")
    if times.size < MIN_NODES:
        raise GridTooSmallError(f"action needs at least {MIN_NODES} grid nodes, got {times.size}")
    steps = np.diff(times)
    h = steps[0]
    if not np.allclose(steps, h, rtol=1e-9, atol=0.0):
        raise ShapeMismatchError("action needs a uniform grid")
    return times, path, h


def path_derivatives(path, h):
    """Second-order accurate first and second time derivatives of sampled paths."""
    qdot = np.gradient(path, h, axis=0, edge_order=2)
    qddot = np.empty_like(path)
    qddot[1:-1] = (path[2:] - 2 * path[1:-1] + path[:-2]) / h ** 2
    qddot[0] = (2 * path[0] - 5 * path[1] + 4 * path[2] - path[3]) / h ** 2
    qddot[-1] = (2 * path[-1] - 5 * path[-2] + 4 * path[-3] - path[-4]) / h ** 2
    return qdot, qddot


def _require_lagrangian(m):
    if m.L is None:
        raise ModelValidationError(f"model '{m.name}' has no L")


def action(m, times, path):
    """Trapezoid quadrature of L(q, qdot) along the sampled path."""
    _require_lagrangian(m)
    times, path, h = _grid(times, path)
    qdot, _ = path_derivatives(path, h)
    values = CompiledExprs([m.L], m.coords + m.velocities)(np.hstack([path, qdot]).T)[0]
    return float(trapezoid(np.broadcast_to(values, times.shape), times))


@dataclass
class PathCovector:
    """Convenient representation (f, p0, p1) of dS at a path."""
    force: np.ndarray
    p0: np.ndarray
    p1: np.ndarray

    def pair(self, times, variation):
        variation = np.asarray(variation, dtype=float).reshape(self.force.shape)
        bulk = trapezoid(np.sum(self.force * variation, axis=1), times)
        return float(bulk + self.p1 @ variation[-1] - self.p0 @ variation[0])


def path_covector(m, times, path):
    """EL along the sampled path and the Legendre momenta at both end points."""
    _require_lagrangian(m)
    times, path, h = _grid(times, path)
    qdot, qddot = path_derivatives(path, h)
    names = m.coords + m.velocities + m.accelerations
    el = CompiledExprs(euler_lagrange(m), names)
    force = np.broadcast_to(el(np.hstack([path, qdot, qddot]).T), (m.n, times.size)).T
    momenta = CompiledExprs([diff(m.L, v) for v in m.velocities], m.coords + m.velocities)
    ends = np.hstack([path[[0, -1]], qdot[[0, -1]]]).T
    p = np.broadcast_to(momenta(ends), (m.n, 2))
    return PathCovector(np.array(force), p[:, 0].copy(), p[:, 1].copy())


def action_variation(m, times, path, variation, step=1e-5):
    """Both sides of the variation formula on a sampled path.

    Args:
        m (MechModel): Model with a Lagrangian.
        times (array-like): Uniform grid with at least 16 nodes.
        path (array-like): Samples q(t), shape (N,) or (N, n).
        variation (array-like): Samples dq(t), same shape as ``path``.
        step (float): Step of the central difference in s.

    Returns:
        tuple[float, float]: ``lhs`` = dS(q + s dq)/ds at s = 0 by central differences and
        ``rhs`` = int <EL, dq> dt + <PL, dq> between the end points.
    """
    times, path, _ = _grid(times, path)
    variation = np.asarray(variation, dtype=float).reshape(path.shape)
    lhs = fd_derivative(lambda s: action(m, times, path + s * variation), 0.0, step)
    rhs = path_covector(m, times, path).pair(times, variation)
    return float(lhs), rhs
