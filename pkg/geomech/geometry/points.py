"""Coordinate tuples on the bundles of the triple.

Every point is a frozen dataclass of numpy blocks. Shapes are checked on
construction and a mismatch raises :class:`~geomech.errors.ShapeMismatchError`.
Field blocks use the layout

* ``p[j, b]``: form index ``j`` (base direction of the (m-1)-form), fiber index ``b``;
* ``yjet[i, a]``: derivative index ``i``, fiber index ``a``;
* ``pjet[l, d, j]``: form index ``l``, fiber index ``d``, derivative index ``j``;

and flatten in row-major order with the blocks concatenated in field order.
"""
from dataclasses import dataclass, fields

import numpy as np

from geomech.errors import ShapeMismatchError


def _block(values, shape=None, name="block"):
    arr = np.array(values, dtype=float)
    # flat (row-major) input is accepted for any block shape
    if shape is not None and arr.ndim <= 1 and arr.size == int(np.prod(shape)):
        arr = arr.reshape(shape)
    if shape is not None and arr.shape != tuple(shape):
        raise ShapeMismatchError(f"{name}: expected shape {tuple(shape)}, got {arr.shape}")
    arr.setflags(write=False)
    return arr


class _Point:
    """Shared flat (de)serialisation for coordinate tuples."""

    def blocks(self):
        return [getattr(self, f.name) for f in fields(self)]

    def to_flat(self):
        return np.concatenate([b.ravel() for b in self.blocks()])

    def shapes(self):
        return [b.shape for b in self.blocks()]

    @classmethod
    def from_flat(cls, flat, shapes):
        flat = np.asarray(flat, dtype=float)
        sizes = [int(np.prod(s)) for s in shapes]
        if flat.size != sum(sizes):
            raise ShapeMismatchError(f"{cls.__name__}: expected {sum(sizes)} values, got {flat.size}")
        parts = np.split(flat, np.cumsum(sizes)[:-1])
        return cls(*[part.reshape(s) for part, s in zip(parts, shapes)])

    def __eq__(self, other):
        return type(self) is type(other) and all(
            a.shape == b.shape and np.array_equal(a, b) for a, b in zip(self.blocks(), other.blocks()))

    def allclose(self, other, atol=1e-12):
        return type(self) is type(other) and all(
            a.shape == b.shape and np.allclose(a, b, rtol=0.0, atol=atol) for a, b in zip(self.blocks(), other.blocks()))


@dataclass(frozen=True, eq=False)
class TTMPoint(_Point):
    """(x, xdot, dx, dxdot) on TTM: a point (x, xdot) of TM and a tangent vector (dx, dxdot)."""
    x: np.ndarray
    xdot: np.ndarray
    dx: np.ndarray
    dxdot: np.ndarray

    def __post_init__(self):
        n = np.size(self.x)
        if n < 1:
            raise ShapeMismatchError("TTMPoint needs n >= 1")
        for f in fields(self):
            object.__setattr__(self, f.name, _block(getattr(self, f.name), (n,), f.name))

    @property
    def n(self):
        return self.x.shape[0]


@dataclass(frozen=True, eq=False)
class TTStarMPoint(_Point):
    """(x, p, xdot, pdot) on TT*M."""
    x: np.ndarray
    p: np.ndarray
    xdot: np.ndarray
    pdot: np.ndarray

    def __post_init__(self):
        n = np.size(self.x)
        for f in fields(self):
            object.__setattr__(self, f.name, _block(getattr(self, f.name), (n,), f.name))

    @property
    def n(self):
        return self.x.shape[0]


@dataclass(frozen=True, eq=False)
class CotangentOfBundlePoint(_Point):
    """(x, y, p, xi) on T*E for a vector bundle E with base rank n and fiber rank k."""
    base: np.ndarray
    fiber: np.ndarray
    pbase: np.ndarray
    pfiber: np.ndarray

    def __post_init__(self):
        n, k = np.size(self.base), np.size(self.fiber)
        shapes = {"base": (n,), "fiber": (k,), "pbase": (n,), "pfiber": (k,)}
        for name, shape in shapes.items():
            object.__setattr__(self, name, _block(getattr(self, name), shape, name))


def _field_shapes(m, k):
    return {"x": (m,), "y": (k,), "p": (m, k), "yjet": (m, k), "pjet": (m, k, m),
            "piy": (k,), "pijet": (m, k), "py": (k,), "dy": (k,), "dyjet": (m, k)}


class _FieldPoint(_Point):
    def __post_init__(self):
        m, k = np.size(self.x), np.size(self.y)
        shapes = _field_shapes(m, k)
        for f in fields(self):
            object.__setattr__(self, f.name, _block(getattr(self, f.name), shapes[f.name], f.name))

    @property
    def m(self):
        return self.x.shape[0]

    @property
    def k(self):
        return self.y.shape[0]


@dataclass(frozen=True, eq=False)
class J1PhasePoint(_FieldPoint):
    """(x^i, y^a, p^j_b, y^c_k, p^l_{dm}) on J^1 PE."""
    x: np.ndarray
    y: np.ndarray
    p: np.ndarray
    yjet: np.ndarray
    pjet: np.ndarray


@dataclass(frozen=True, eq=False)
class VPlusJ1Point(_FieldPoint):
    """(x^i, y^a, y^c_k, pi_d, pi^l_e) on V^+ J^1 E."""
    x: np.ndarray
    y: np.ndarray
    yjet: np.ndarray
    piy: np.ndarray
    pijet: np.ndarray


@dataclass(frozen=True, eq=False)
class PJDaggerPoint(_FieldPoint):
    """(x^i, y^a, p^j_b, p_c, y^d_l) on PJ^dagger E."""
    x: np.ndarray
    y: np.ndarray
    p: np.ndarray
    py: np.ndarray
    yjet: np.ndarray


@dataclass(frozen=True, eq=False)
class VJ1Point(_FieldPoint):
    """(x, y, yjet; dy, dyjet): a vertical vector on J^1 E."""
    x: np.ndarray
    y: np.ndarray
    yjet: np.ndarray
    dy: np.ndarray
    dyjet: np.ndarray


@dataclass(frozen=True, eq=False)
class J1VPoint(_FieldPoint):
    """(x, y, dy; yjet, dyjet): the first jet of a section of VE."""
    x: np.ndarray
    y: np.ndarray
    dy: np.ndarray
    yjet: np.ndarray
    dyjet: np.ndarray
