"""Finite-difference residuals of the field equations on uniform box grids.

Derivatives are central differences (``np.gradient``); second derivatives
compose two first differences, so the stencils are exact on quadratics and
commute across axes. Nodes closer to the boundary than the stencil reach
are left out of the report.
"""
import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from geomech.errors import GridTooSmallError, OptionError, ShapeMismatchError
from geomech.field.dynamics import field_dynamics, field_el, hamilton_field_equations
from geomech.symbolic import CompiledExprs, equation_text

log = logging.getLogger(__name__)

MARGINS = {"el": 2, "dynamics": 1, "hamilton": 1}


@dataclass
class PhaseSection:
    """Values of y (and optionally p) on a uniform grid over the base.

    ``y`` has shape ``dims + (k,)`` and ``p`` shape ``dims + (m, k)`` with ``p[..., i, a]``.
    """
    origin: np.ndarray
    spacing: np.ndarray
    y: np.ndarray
    p: np.ndarray = None

    def __post_init__(self):
        self.origin = np.asarray(self.origin, dtype=float).ravel()
        self.spacing = np.asarray(self.spacing, dtype=float).ravel()
        self.y = np.asarray(self.y, dtype=float)
        m = self.origin.size
        if self.spacing.size != m or np.any(self.spacing <= 0):
            raise ShapeMismatchError(f"spacing must hold {m} positive values")
        if self.y.ndim == m:
            self.y = self.y[..., None]
        if self.y.ndim != m + 1:
            raise ShapeMismatchError(f"y must have shape dims + (k,), got {self.y.shape}")
        if self.p is not None:
            self.p = np.asarray(self.p, dtype=float)
            if self.p.shape != self.dims + (m, self.k):
                raise ShapeMismatchError(f"p must have shape {self.dims + (m, self.k)}, got {self.p.shape}")

    @property
    def m(self):
        return self.origin.size

    @property
    def k(self):
        return self.y.shape[-1]

    @property
    def dims(self):
        return tuple(self.y.shape[:self.m])

    def axes(self):
        return [self.origin[i] + self.spacing[i] * np.arange(n) for i, n in enumerate(self.dims)]

    def coordinates(self):
        """Node coordinates, shape ``dims + (m,)``."""
        return np.stack(np.meshgrid(*self.axes(), indexing="ij"), axis=-1)

    @classmethod
    def sample(cls, origin, spacing, dims, y_fn, p_fn=None):
        """Sample callables of the node coordinates (one array per axis) on a grid."""
        origin, spacing = np.asarray(origin, dtype=float), np.asarray(spacing, dtype=float)
        axes = [origin[i] + spacing[i] * np.arange(n) for i, n in enumerate(dims)]
        grid = np.meshgrid(*axes, indexing="ij")
        y = np.stack([np.broadcast_to(v, grid[0].shape) for v in y_fn(*grid)], axis=-1)
        p = None
        if p_fn is not None:
            p = np.array([[np.broadcast_to(v, grid[0].shape) for v in row] for row in p_fn(*grid)])
            p = np.moveaxis(p, (0, 1), (-2, -1))
        return cls(origin, spacing, y, p)


def _gradient(values, spacing, axis):
    return np.gradient(values, spacing, axis=axis)


def _interior(values, m, margin):
    return values[(slice(margin, -margin),) * m]


@dataclass
class ResidualReport:
    which: str
    equations: list
    coordinates: np.ndarray
    per_node: np.ndarray

    @property
    def max_abs(self):
        return float(np.max(np.abs(self.per_node), initial=0.0))

    def to_frame(self):
        """Per-node table with columns ``x1..xm``, one column per equation and ``max_abs``."""
        m = self.coordinates.shape[-1]
        coords = self.coordinates.reshape(-1, m)
        values = self.per_node.reshape(-1, self.per_node.shape[-1])
        frame = pd.DataFrame(coords, columns=[f"x{i + 1}" for i in range(m)])
        for e, column in enumerate(values.T):
            frame[f"eq{e + 1}"] = column
        frame["max_abs"] = np.max(np.abs(values), axis=1, initial=0.0)
        return frame


def _jet_values(fm, section, margin):
    """Name to interior-array mapping for x, y, first and second jets."""
    m = fm.m
    values = {}
    coords = section.coordinates()
    for i, name in enumerate(fm.base):
        values[name] = _interior(coords[..., i], m, margin)
    first = [_gradient(section.y, section.spacing[i], i) for i in range(m)]
    for a, name in enumerate(fm.fiber):
        values[name] = _interior(section.y[..., a], m, margin)
        for i in range(m):
            values[fm.jet(a, i)] = _interior(first[i][..., a], m, margin)
    if margin >= 2:
        for a in range(fm.k):
            for i in range(m):
                for j in range(i, m):
                    second = _gradient(first[j][..., a], section.spacing[i], i)
                    values[fm.second_jet(a, i, j)] = _interior(second, m, margin)
    return values


def _momentum_values(fm, section, margin):
    values = {}
    for i in range(fm.m):
        for a in range(fm.k):
            component = section.p[..., i, a]
            values[fm.momentum(i, a)] = _interior(component, fm.m, margin)
            for j in range(fm.m):
                values[fm.momentum_jet(i, a, j)] = _interior(_gradient(component, section.spacing[j], j), fm.m, margin)
    return values


def pde_residual(fm, section, which="el"):
    """Evaluate the chosen field equations at every interior node.

    Args:
        fm (FieldModel): Field model.
        section (PhaseSection): Grid data; ``dynamics`` and ``hamilton`` need momenta.
        which (str): ``el``, ``dynamics`` or ``hamilton``.

    Returns:
        ResidualReport: Residuals of shape ``interior dims + (equations,)``.

    Raises:
        GridTooSmallError: If an axis has no interior node for the stencil.
        ShapeMismatchError: If the grid does not match the model.
    """
    if which not in MARGINS:
        raise OptionError(f"Unknown residual kind {which}, expected one of {', '.join(MARGINS)}")
    if section.m != fm.m or section.k != fm.k:
        raise ShapeMismatchError(f"grid data has (m, k) = ({section.m}, {section.k}), model has ({fm.m}, {fm.k})")
    margin = MARGINS[which]
    if min(section.dims) <= 2 * margin:
        raise GridTooSmallError(f"{which} residual needs more than {2 * margin} nodes per axis, got {section.dims}")
    if which == "el":
        equations = field_el(fm)
    else:
        if section.p is None:
            raise ShapeMismatchError(f"{which} residual needs momentum data")
        equations = list((field_dynamics(fm) if which == "dynamics" else hamilton_field_equations(fm)).equations)
    values = _jet_values(fm, section, margin)
    if section.p is not None and which != "el":
        values |= _momentum_values(fm, section, margin)
    compiled = CompiledExprs(equations, list(values))
    shape = _interior(section.y[..., 0], fm.m, margin).shape
    per_node = np.stack([np.broadcast_to(r, shape) for r in compiled.evaluate_env(values)], axis=-1)
    coordinates = _interior(section.coordinates(), fm.m, margin)
    texts = [equation_text(e, fm.vartable.sort_key) for e in equations]
    report = ResidualReport(which, texts, coordinates, per_node)
    log.info("%s residual on %s interior nodes: max %.3e", which, shape, report.max_abs)
    return report


def gauge_shift(section, chi):
    """A -> A + d chi with d chi sampled by the same central differences; needs k = m."""
    chi = np.asarray(chi, dtype=float)
    if section.k != section.m or chi.shape != section.dims:
        raise ShapeMismatchError("gauge shift needs k = m and chi sampled on the grid")
    shift = np.stack([_gradient(chi, section.spacing[i], i) for i in range(section.m)], axis=-1)
    return PhaseSection(section.origin, section.spacing, section.y + shift, section.p)
