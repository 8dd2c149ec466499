"""Hodge star for a constant metric.

A k-form is stored as its components on the increasing index tuples
``itertools.combinations(range(m), k)``, in that order. The volume form is
sqrt|det g| dx^1 ^ ... ^ dx^m.
"""
from itertools import combinations

import numpy as np

from geomech.errors import MetricMissingError, ShapeMismatchError


def basis(m, k):
    return list(combinations(range(m), k))


def permutation_sign(indices):
    """Sign of the permutation sorting ``indices`` (0 when an index repeats)."""
    indices = list(indices)
    if len(set(indices)) != len(indices):
        return 0
    sign = 1
    for i in range(len(indices)):
        for j in range(i + 1, len(indices)):
            if indices[i] > indices[j]:
                sign = -sign
    return sign


def _metric(source):
    metric = getattr(source, "metric", source)
    if metric is None:
        raise MetricMissingError("the Hodge star needs a metric")
    return np.asarray(metric, dtype=float)


def raise_indices(metric, form, degree):
    """Contravariant components alpha^I = sum_K det(g^-1[I, K]) alpha_K."""
    inverse = np.linalg.inv(metric)
    tuples = basis(metric.shape[0], degree)
    if degree == 0:
        return np.asarray(form, dtype=float).copy()
    minors = np.array([[np.linalg.det(inverse[np.ix_(I, K)]) for K in tuples] for I in tuples])
    return minors @ np.asarray(form, dtype=float)


def hodge_star(source, form, degree):
    """Hodge star of a k-form.

    Args:
        source (FieldModel or array-like): Model carrying ``metric``, or the metric itself.
        form (array-like): Components on ``basis(m, degree)``.
        degree (int): Degree k with 0 <= k <= m.

    Returns:
        np.ndarray: Components of the (m - k)-form on ``basis(m, m - degree)``.

    Raises:
        MetricMissingError: If no metric is available.
    """
    metric = _metric(source)
    m = metric.shape[0]
    if not 0 <= degree <= m:
        raise ShapeMismatchError(f"degree {degree} outside 0..{m}")
    form = np.asarray(form, dtype=float).ravel()
    rows, cols = basis(m, degree), basis(m, m - degree)
    if form.size != len(rows):
        raise ShapeMismatchError(f"a {degree}-form in dimension {m} has {len(rows)} components, got {form.size}")
    raised = raise_indices(metric, form, degree)
    volume = np.sqrt(abs(np.linalg.det(metric)))
    out = np.zeros(len(cols))
    for c, J in enumerate(cols):
        out[c] = volume * sum(raised[r] * permutation_sign(I + J) for r, I in enumerate(rows))
    return out


def double_star_sign(metric, degree):
    """(-1)^(k (m - k)) sign(det g)."""
    metric = _metric(metric)
    m = metric.shape[0]
    return (-1) ** (degree * (m - degree)) * int(np.sign(np.linalg.det(metric)))
