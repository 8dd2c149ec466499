"""Stable text and LaTeX printers.

The text form is re-parseable: ``to_text(parse(to_text(e))) == to_text(e)``.
"""
import math

from geomech.symbolic.expr import Add, Call, Const, Div, Mul, Neg, Pow, Sub, Var
from geomech.symbolic.simplify import normalize_equation, simplify

# Binding strength of each node kind
_PREC_SUM = 1
_PREC_PRODUCT = 2
_PREC_NEG = 3
_PREC_POW = 4
_PREC_ATOM = 5


def _precedence(e):
    if isinstance(e, (Add, Sub)):
        return _PREC_SUM
    if isinstance(e, (Mul, Div)):
        return _PREC_PRODUCT
    if isinstance(e, Neg):
        return _PREC_NEG
    if isinstance(e, Pow):
        return _PREC_POW
    if isinstance(e, Const) and e.value < 0:
        return _PREC_NEG
    return _PREC_ATOM


def format_number(value):
    if math.isfinite(value) and value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(float(value))


def _wrap(text, needed, latex=False):
    if not needed:
        return text
    return f"\\left({text}\\right)" if latex else f"({text})"


def to_text(e):
    """Render ``e`` in the input grammar with minimal parentheses."""
    if isinstance(e, Const):
        return format_number(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Call):
        return f"{e.func}({to_text(e.arg)})"
    if isinstance(e, Neg):
        # "-x^2" would parse as (-x)^2
        inner = _precedence(e.arg) < _PREC_NEG or isinstance(e.arg, Pow)
        return "-" + _wrap(to_text(e.arg), inner)
    if isinstance(e, Pow):
        base = _wrap(to_text(e.left), _precedence(e.left) <= _PREC_POW)
        exponent = _wrap(to_text(e.right), _precedence(e.right) < _PREC_NEG)
        return f"{base}^{exponent}"
    if isinstance(e, (Mul, Div)):
        op = "*" if isinstance(e, Mul) else "/"
        left = _wrap(to_text(e.left), _precedence(e.left) < _PREC_PRODUCT)
        right = _wrap(to_text(e.right), _precedence(e.right) <= _PREC_NEG)
        return f"{left}{op}{right}"
    op = " + " if isinstance(e, Add) else " - "
    left = to_text(e.left)
    right = _wrap(to_text(e.right), _precedence(e.right) <= _PREC_SUM)
    return f"{left}{op}{right}"


def latex_name(name):
    """LaTeX for a coordinate name: ``pdot_q`` becomes ``\\dot{p}_{q}``."""
    head, _, tail = name.partition("_")
    if head.endswith("ddot") and len(head) > 4:
        head = f"\\ddot{{{head[:-4]}}}"
    elif head.endswith("dot") and len(head) > 3:
        head = f"\\dot{{{head[:-3]}}}"
    elif len(head) > 1 and head not in ("pi",):
        head = f"\\mathrm{{{head}}}" if not head[1:].isdigit() else f"{head[0]}^{{{head[1:]}}}"
    return f"{head}_{{{tail}}}" if tail else head


def to_latex(e):
    if isinstance(e, Const):
        return format_number(e.value)
    if isinstance(e, Var):
        return latex_name(e.name)
    if isinstance(e, Call):
        if e.func == "sqrt":
            return f"\\sqrt{{{to_latex(e.arg)}}}"
        return f"\\{e.func}\\left({to_latex(e.arg)}\\right)"
    if isinstance(e, Neg):
        inner = _precedence(e.arg) < _PREC_NEG or isinstance(e.arg, Pow)
        return "-" + _wrap(to_latex(e.arg), inner, latex=True)
    if isinstance(e, Pow):
        base = _wrap(to_latex(e.left), _precedence(e.left) <= _PREC_POW, latex=True)
        return f"{{{base}}}^{{{to_latex(e.right)}}}"
    if isinstance(e, Div):
        return f"\\frac{{{to_latex(e.left)}}}{{{to_latex(e.right)}}}"
    if isinstance(e, Mul):
        left = _wrap(to_latex(e.left), _precedence(e.left) < _PREC_PRODUCT, latex=True)
        right = _wrap(to_latex(e.right), _precedence(e.right) <= _PREC_NEG, latex=True)
        return f"{left} {right}"
    op = " + " if isinstance(e, Add) else " - "
    right = _wrap(to_latex(e.right), _precedence(e.right) <= _PREC_SUM, latex=True)
    return f"{to_latex(e.left)}{op}{right}"


def equation_text(e, key=None):
    """Stable text of the equation ``e = 0``."""
    return f"{to_text(normalize_equation(e, key))} = 0"


def equation_latex(e, key=None):
    return f"{to_latex(normalize_equation(e, key))} = 0"


def assignment_text(name, e, key=None):
    return f"{name} = {to_text(simplify(e, key))}"
