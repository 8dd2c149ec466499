"""Numeric evaluation of expressions.

``evaluate`` walks the tree once per call on scalars. ``CompiledExprs`` turns
a list of expressions into nested numpy closures that accept scalars or
arrays of any broadcastable shape, which is what the integrators and the grid
residual evaluators use.
"""
from functools import singledispatch

import numpy as np

from geomech.errors import DivisionByZeroError, DomainError, EvaluationError, UnassignedVariableError
from geomech.symbolic.expr import FUNCTIONS, Add, Call, Const, Div, Mul, Neg, Pow, Sub, Var
from geomech.symbolic.printing import to_text


def _check_domain(e, func, arg):
    if func == "log" and np.any(arg <= 0):
        raise DomainError("log of a non-positive value", to_text(e))
    if func == "sqrt" and np.any(arg < 0):
        raise DomainError("sqrt of a negative value", to_text(e))


def _check_power(e, base, exponent):
    if np.any((base < 0) & (np.asarray(exponent) != np.round(exponent))):
        raise DomainError("real power of a negative base", to_text(e))
    if np.any((base == 0) & (np.asarray(exponent) < 0)):
        raise DivisionByZeroError(to_text(e))


@singledispatch
def _build(e):
    raise NotImplementedError(f"Cannot compile a {type(e).__name__}")


@_build.register
def _(e: Const):
    value = np.float64(e.value)
    return lambda env: value


@_build.register
def _(e: Var):
    name = e.name

    def load(env):
        try:
            return env[name]
        except KeyError:
            raise UnassignedVariableError(name) from None
    return load


@_build.register
def _(e: Neg):
    arg = _build(e.arg)
    return lambda env: -arg(env)


@_build.register
def _(e: Add):
    left, right = _build(e.left), _build(e.right)
    return lambda env: left(env) + right(env)


@_build.register
def _(e: Sub):
    left, right = _build(e.left), _build(e.right)
    return lambda env: left(env) - right(env)


@_build.register
def _(e: Mul):
    left, right = _build(e.left), _build(e.right)
    return lambda env: left(env) * right(env)


@_build.register
def _(e: Div):
    left, right = _build(e.left), _build(e.right)

    def divide(env):
        den = right(env)
        if np.any(den == 0):
            raise DivisionByZeroError(to_text(e))
        return left(env) / den
    return divide


@_build.register
def _(e: Pow):
    left, right = _build(e.left), _build(e.right)

    def power(env):
        base, exponent = left(env), right(env)
        _check_power(e, base, exponent)
        return np.power(base, exponent)
    return power


@_build.register
def _(e: Call):
    arg = _build(e.arg)
    func = FUNCTIONS[e.func]

    def call(env):
        value = arg(env)
        _check_domain(e, e.func, value)
        return func(value)
    return call


def _run(fn, env, e):
    try:
        with np.errstate(divide="raise", invalid="raise", over="raise", under="ignore"):
            return fn(env)
    except FloatingPointError as err:
        raise DomainError(f"floating point error ({err})", to_text(e)) from None


def evaluate(e, point):
    """Evaluate ``e`` at a point.

    Args:
        e (Expr): Expression.
        point (Mapping[str, float]): Values of the variables of ``e``.

    Returns:
        float: IEEE double value.

    Raises:
        UnassignedVariableError: If a variable of ``e`` is missing from ``point``.
        DomainError: For log of non-positive values, sqrt of negative values, real powers of
            negative bases, overflow; ``DivisionByZeroError`` for zero denominators.
    """
    env = {name: np.float64(value) for name, value in point.items()}
    return float(_run(_build(e), env, e))


class CompiledExprs:
    """A list of expressions compiled against a fixed argument order.

    Args:
        exprs (list[Expr]): Expressions to evaluate together.
        names (list[str]): Argument order of the numeric vector passed on call.
    """

    def __init__(self, exprs, names):
        self.exprs = list(exprs)
        self.names = list(names)
        self._fns = [_build(e) for e in self.exprs]

    def env(self, values):
        values = np.asarray(values, dtype=float)
        if values.shape[0] != len(self.names):
            raise EvaluationError(f"expected {len(self.names)} values, got {values.shape[0]}")
        return {name: values[i] for i, name in enumerate(self.names)}

    def evaluate_env(self, env):
        """Evaluate on a name to value (or array) mapping; broadcast to a common shape."""
        results = [_run(fn, env, e) for fn, e in zip(self._fns, self.exprs)]
        results = np.broadcast_arrays(*[np.asarray(r, dtype=float) for r in results]) if results else []
        return np.array(results, dtype=float)

    def __call__(self, values):
        """Evaluate at ``values``; the first axis indexes ``names``, other axes broadcast."""
        return self.evaluate_env(self.env(values))

    def __len__(self):
        return len(self.exprs)
