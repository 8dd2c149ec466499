"""Small dense linear-algebra helpers."""
import numpy as np
from scipy.linalg import null_space

RANK_TOL = 1e-8


def rref(matrix, tol=1e-12):
    """Reduced row echelon form with partial pivoting; zero rows are dropped."""
    a = np.array(matrix, dtype=float)
    rows, cols = a.shape
    pivot_row = 0
    for col in range(cols):
        if pivot_row == rows:
            break
        best = pivot_row + int(np.argmax(np.abs(a[pivot_row:, col])))
        if abs(a[best, col]) <= tol:
            continue
        a[[pivot_row, best]] = a[[best, pivot_row]]
        a[pivot_row] /= a[pivot_row, col]
        for r in range(rows):
            if r != pivot_row:
                a[r] -= a[r, col] * a[pivot_row]
        pivot_row += 1
    return a[:pivot_row]


def canonical_null_basis(matrix, decimals=12):
    """Rows spanning the left null space of a symmetric matrix, in reduced echelon form.

    The echelon form makes the basis independent of the SVD used to find it,
    so the constraints printed from it are stable.
    """
    matrix = np.asarray(matrix, dtype=float)
    basis = null_space(matrix.T, rcond=RANK_TOL).T
    if basis.size == 0:
        return np.zeros((0, matrix.shape[0]))
    return np.round(rref(basis), decimals) + 0.0


def numeric_rank(symmetric, tol=RANK_TOL):
    """Number of eigenvalues of a symmetric matrix with modulus above ``tol``."""
    return int(np.sum(np.abs(np.linalg.eigvalsh(symmetric)) > tol))
