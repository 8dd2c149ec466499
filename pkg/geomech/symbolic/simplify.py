"""Conservative simplification to a sum-of-monomials normal form.

An expression is flattened into a map from monomials to coefficients. A
monomial is a set of (atom, natural exponent) pairs, where an atom is a
variable, a function call, a quotient by a non-constant or a power that is
not a natural number. Products and natural powers of sums are expanded
(powers of sums only up to ``MAX_EXPANDED_POWER``). Quotients by non-constant
expressions are never cancelled, so ``x*(1/x)`` stays as it is.
"""
import math

import numpy as np

from geomech.symbolic.expr import FUNCTIONS, Add, Call, Const, Div, Mul, Neg, Pow, Sub, Var, free_variables
from geomech.symbolic.vartable import default_sort_key

MAX_EXPANDED_POWER = 8

_ATOM_RANK = 99


def _atom(e):
    return {frozenset({(e, 1)}): 1.0}


def _constant(value):
    return {} if value == 0.0 else {frozenset(): float(value)}


def _const_value(poly):
    """Value of a constant polynomial, or None."""
    if not poly:
        return 0.0
    if len(poly) == 1 and frozenset() in poly:
        return poly[frozenset()]
    return None


def _add(p, q, sign=1.0):
    out = dict(p)
    for mono, coef in q.items():
        total = out.get(mono, 0.0) + sign * coef
        if total == 0.0:
            out.pop(mono, None)
        else:
            out[mono] = total
    return out


def _scale(p, c):
    if c == 0.0:
        return {}
    return {mono: coef * c for mono, coef in p.items()}


def _mul_monomials(a, b):
    exps = dict(a)
    for atom, k in b:
        exps[atom] = exps.get(atom, 0) + k
    return frozenset(exps.items())


def _mul(p, q):
    out = {}
    for ma, ca in p.items():
        for mb, cb in q.items():
            out = _add(out, {_mul_monomials(ma, mb): ca * cb})
    return out


def _power(p, n):
    if n == 0:
        return {frozenset(): 1.0}
    if len(p) == 1:
        (mono, coef), = p.items()
        return {frozenset((atom, k * n) for atom, k in mono): coef ** n}
    out = p
    for _ in range(n - 1):
        out = _mul(out, p)
    return out


def _fold_pow(base, exponent):
    """Numeric b^c when it is a finite real, else None."""
    if base < 0 and not float(exponent).is_integer():
        return None
    if base == 0 and exponent < 0:
        return None
    with np.errstate(all="ignore"):
        value = float(np.power(base, exponent))
    return value if math.isfinite(value) else None


def _fold_call(func, arg):
    if func == "log" and arg <= 0:
        return None
    if func == "sqrt" and arg < 0:
        return None
    with np.errstate(all="ignore"):
        value = float(FUNCTIONS[func](arg))
    return value if math.isfinite(value) else None


def _to_poly(e, key):
    if isinstance(e, Const):
        return _constant(e.value)
    if isinstance(e, Var):
        return _atom(e)
    if isinstance(e, Neg):
        return _scale(_to_poly(e.arg, key), -1.0)
    if isinstance(e, Add):
        return _add(_to_poly(e.left, key), _to_poly(e.right, key))
    if isinstance(e, Sub):
        return _add(_to_poly(e.left, key), _to_poly(e.right, key), sign=-1.0)
    if isinstance(e, Mul):
        return _mul(_to_poly(e.left, key), _to_poly(e.right, key))
    if isinstance(e, Div):
        num, den = _to_poly(e.left, key), _to_poly(e.right, key)
        c = _const_value(den)
        if c is not None and c != 0.0:
            return _scale(num, 1.0 / c)
        return _atom(Div(_build(num, key), _build(den, key)))
    if isinstance(e, Pow):
        base, exponent = _to_poly(e.left, key), _to_poly(e.right, key)
        n = _const_value(exponent)
        b = _const_value(base)
        if n is not None and b is not None:
            value = _fold_pow(b, n)
            if value is not None:
                return _constant(value)
        elif n is not None and n >= 0 and n.is_integer() and (len(base) == 1 or n <= MAX_EXPANDED_POWER):
            return _power(base, int(n))
        return _atom(Pow(_build(base, key), _build(exponent, key)))
    if isinstance(e, Call):
        arg = _to_poly(e.arg, key)
        a = _const_value(arg)
        if a is not None:
            value = _fold_call(e.func, a)
            if value is not None:
                return _constant(value)
        return _atom(Call(e.func, _build(arg, key)))
    raise TypeError(f"Cannot simplify a {type(e).__name__}")


def _atom_key(atom, key):
    if isinstance(atom, Var):
        return key(atom.name)
    return (_ATOM_RANK, 0, repr(atom))


def _monomial_key(mono, key):
    if not mono:
        return (1,)
    return (0, tuple(sorted((_atom_key(atom, key), -k) for atom, k in mono)))


def _factors(mono, key):
    ordered = sorted(mono, key=lambda item: _atom_key(item[0], key))
    return [atom if k == 1 else Pow(atom, Const(k)) for atom, k in ordered]


def _product(factors):
    out = factors[0]
    for f in factors[1:]:
        out = Mul(out, f)
    return out


def _term(coef, mono, key, leading):
    """Expression of one term; non-leading terms are built with |coef|."""
    factors = _factors(mono, key)
    magnitude = abs(coef)
    if not factors:
        return Const(coef if leading else magnitude)
    if magnitude == 1.0:
        if leading and coef < 0:
            factors[0] = Neg(factors[0])
        return _product(factors)
    return _product([Const(coef if leading else magnitude)] + factors)


def _ordered_terms(poly, key):
    return sorted(poly.items(), key=lambda item: _monomial_key(item[0], key))


def _build(poly, key):
    if not poly:
        return Const(0.0)
    terms = _ordered_terms(poly, key)
    coef, mono = terms[0][1], terms[0][0]
    out = _term(coef, mono, key, leading=True)
    for mono, coef in terms[1:]:
        term = _term(coef, mono, key, leading=False)
        out = Add(out, term) if coef > 0 else Sub(out, term)
    return out


def simplify(e, key=None):
    """Value-preserving normal form of ``e``.

    Args:
        e (Expr): Expression to simplify.
        key (callable, optional): Sort key on variable names fixing the term order.
            Defaults to alphabetical order.

    Returns:
        Expr: Simplified expression. Applying ``simplify`` again with the same key returns it unchanged.
    """
    key = key or default_sort_key
    return _build(_to_poly(e, key), key)


def normalize_equation(e, key=None):
    """Simplify the left-hand side of ``e = 0`` and make its leading coefficient positive."""
    key = key or default_sort_key
    poly = _to_poly(e, key)
    terms = _ordered_terms(poly, key)
    if terms and terms[0][1] < 0:
        poly = _scale(poly, -1.0)
    return _build(poly, key)


def is_zero(e):
    return not _to_poly(e, default_sort_key)


def constant_value(e):
    """Numeric value of ``e`` if it simplifies to a constant, else None."""
    return _const_value(_to_poly(e, default_sort_key))


def polynomial_degree(e, names):
    """Total degree of ``e`` in the variables ``names``, or None when not polynomial in them.

    Atoms other than the listed variables are treated as coefficients, provided
    they do not themselves depend on the listed variables.
    """
    names = set(names)
    degree = 0
    for mono in _to_poly(e, default_sort_key):
        d = 0
        for atom, k in mono:
            if isinstance(atom, Var) and atom.name in names:
                d += k
            elif free_variables(atom) & names:
                return None
        degree = max(degree, d)
    return degree
