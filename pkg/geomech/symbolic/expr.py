"""Immutable expression trees over named real variables.

Nodes are frozen dataclasses, so structurally equal trees compare equal and
hash alike. Arithmetic operators on nodes build new trees without any
simplification; see :mod:`geomech.symbolic.simplify` for normal forms.
"""
from dataclasses import dataclass
from functools import singledispatch

import numpy as np

# Primitive unary functions and their numpy implementations
FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
}


# Reserved identifiers that denote constants
CONSTANTS = {"pi": float(np.pi), "e": float(np.e)}


class Expr:
    """Base class of expression nodes."""
    __slots__ = ()

    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __rsub__(self, other):
        return Sub(as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __pow__(self, other):
        return Pow(self, as_expr(other))

    def __rpow__(self, other):
        return Pow(as_expr(other), self)

    def __neg__(self):
        return Neg(self)

    def __str__(self):
        from geomech.symbolic.printing import to_text
        return to_text(self)


@dataclass(frozen=True)
class Const(Expr):
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Call(Expr):
    func: str
    arg: Expr

    def __post_init__(self):
        if self.func not in FUNCTIONS:
            raise ValueError(f"Unknown function: {self.func}")


@dataclass(frozen=True)
class BinOp(Expr):
    left: Expr
    right: Expr


class Add(BinOp):
    pass


class Sub(BinOp):
    pass


class Mul(BinOp):
    pass


class Div(BinOp):
    pass


class Pow(BinOp):
    pass


ZERO = Const(0.0)
ONE = Const(1.0)


def as_expr(value):
    """Coerce numbers and variable names to expression nodes."""
    if isinstance(value, Expr):
        return value
    if isinstance(value, str):
        return Var(value)
    if isinstance(value, (int, float, np.floating, np.integer)):
        return Const(float(value))
    raise TypeError(f"Cannot convert {type(value).__name__} to an expression")


def sin(e):
    return Call("sin", as_expr(e))


def cos(e):
    return Call("cos", as_expr(e))


def tan(e):
    return Call("tan", as_expr(e))


def exp(e):
    return Call("exp", as_expr(e))


def log(e):
    return Call("log", as_expr(e))


def sqrt(e):
    return Call("sqrt", as_expr(e))


def sum_exprs(exprs):
    """Left-folded sum; the empty sum is zero."""
    total = None
    for e in exprs:
        total = as_expr(e) if total is None else Add(total, as_expr(e))
    return ZERO if total is None else total


def free_variables(e):
    """Set of variable names occurring in ``e``."""
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Const):
        return set()
    if isinstance(e, (Neg, Call)):
        return free_variables(e.arg)
    return free_variables(e.left) | free_variables(e.right)


def substitute(e, mapping):
    """Replace variables by expressions (or numbers) according to ``mapping``."""
    if isinstance(e, Var):
        return as_expr(mapping[e.name]) if e.name in mapping else e
    if isinstance(e, Const):
        return e
    if isinstance(e, Neg):
        return Neg(substitute(e.arg, mapping))
    if isinstance(e, Call):
        return Call(e.func, substitute(e.arg, mapping))
    return type(e)(substitute(e.left, mapping), substitute(e.right, mapping))


def rename(e, names):
    """Rename variables; ``names`` maps old names to new names."""
    return substitute(e, {old: Var(new) for old, new in names.items()})


@singledispatch
def _derivative(e, var):
    raise NotImplementedError(f"Cannot differentiate a {type(e).__name__}")


@_derivative.register
def _(e: Const, var):
    return ZERO


@_derivative.register
def _(e: Var, var):
    return ONE if e.name == var else ZERO


@_derivative.register
def _(e: Neg, var):
    return Neg(_derivative(e.arg, var))


@_derivative.register
def _(e: Add, var):
    return Add(_derivative(e.left, var), _derivative(e.right, var))


@_derivative.register
def _(e: Sub, var):
    return Sub(_derivative(e.left, var), _derivative(e.right, var))


@_derivative.register
def _(e: Mul, var):
    """Product rule."""
    return Add(Mul(_derivative(e.left, var), e.right), Mul(e.left, _derivative(e.right, var)))


@_derivative.register
def _(e: Div, var):
    """Quotient rule."""
    numerator = Sub(Mul(_derivative(e.left, var), e.right), Mul(e.left, _derivative(e.right, var)))
    return Div(numerator, Pow(e.right, Const(2.0)))


@_derivative.register
def _(e: Pow, var):
    base, exponent = e.left, e.right
    d_base = _derivative(base, var)
    if var not in free_variables(exponent):
        # d(b^c) = c * b^(c-1) * db
        return Mul(Mul(exponent, Pow(base, Sub(exponent, ONE))), d_base)
    # d(b^u) = b^u * (du * log(b) + u * db / b)
    d_exponent = _derivative(exponent, var)
    return Mul(e, Add(Mul(d_exponent, Call("log", base)), Div(Mul(exponent, d_base), base)))


_CALL_RULES = {
    "sin": lambda a: Call("cos", a),
    "cos": lambda a: Neg(Call("sin", a)),
    "tan": lambda a: Div(ONE, Pow(Call("cos", a), Const(2.0))),
    "exp": lambda a: Call("exp", a),
    "log": lambda a: Div(ONE, a),
    "sqrt": lambda a: Div(ONE, Mul(Const(2.0), Call("sqrt", a))),
}


@_derivative.register
def _(e: Call, var):
    """Chain rule through the primitive functions."""
    return Mul(_CALL_RULES[e.func](e.arg), _derivative(e.arg, var))


def diff(e, var):
    """Symbolic partial derivative of ``e`` with respect to the variable ``var``, simplified.

    Args:
        e (Expr): Expression to differentiate.
        var (str): Name of the variable.

    Returns:
        Expr: The simplified derivative. A variable that does not occur gives the zero constant.
    """
    from geomech.symbolic.simplify import simplify
    if var not in free_variables(e):
        return ZERO
    return simplify(_derivative(e, var))


def gradient(e, names):
    return [diff(e, name) for name in names]


def jacobian(exprs, names):
    """Row-major list of lists of partial derivatives."""
    return [[diff(e, name) for name in names] for e in exprs]
