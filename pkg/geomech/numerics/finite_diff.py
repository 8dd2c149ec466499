"""Central finite differences used as oracles and as the fallback Jacobian."""
import numpy as np


def fd_gradient(f, point, step=1e-5):
    """Central-difference gradient of a real-valued function.

    Args:
        f (callable): Maps a 1-D array to a float.
        point (array-like): Evaluation point.
        step (float): Positive step.

    Returns:
        np.ndarray: Gradient estimate, one entry per coordinate.
    """
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    point = np.atleast_1d(np.asarray(point, dtype=float))
    grad = np.empty_like(point)
    for i in range(point.size):
        shift = np.zeros_like(point)
        shift[i] = step
        grad[i] = (f(point + shift) - f(point - shift)) / (2 * step)
    return grad


def fd_jacobian(F, point, step=1e-7):
    """Central-difference Jacobian of a vector-valued function, shape (len(F(x)), len(x))."""
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    point = np.atleast_1d(np.asarray(point, dtype=float))
    columns = []
    for i in range(point.size):
        shift = np.zeros_like(point)
        shift[i] = step
        columns.append((np.asarray(F(point + shift)) - np.asarray(F(point - shift))) / (2 * step))
    return np.stack(columns, axis=-1)


def fd_derivative(f, s=0.0, step=1e-5):
    """Central difference of a scalar function of one variable."""
    return (f(s + step) - f(s - step)) / (2 * step)
