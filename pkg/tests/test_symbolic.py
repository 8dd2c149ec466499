import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from geomech.errors import (
    DivisionByZeroError,
    DomainError,
    ExprSyntaxError,
    UnassignedVariableError,
    UnknownFunctionError,
)
from geomech.numerics.finite_diff import fd_gradient
from geomech.symbolic import (
    ZERO,
    Add,
    Call,
    CompiledExprs,
    Const,
    Div,
    Mul,
    Neg,
    Pow,
    Role,
    Sub,
    Var,
    VarTable,
    constant_value,
    diff,
    equation_text,
    evaluate,
    is_zero,
    latex_name,
    parse,
    polynomial_degree,
    simplify,
    to_latex,
    to_text,
)

NAMES = ["x", "y", "z"]

leaves = st.one_of(st.sampled_from(NAMES).map(Var), st.integers(-5, 5).map(Const))


def _trees(children):
    return st.one_of(
        st.builds(Add, children, children),
        st.builds(Sub, children, children),
        st.builds(Mul, children, children),
        st.builds(Div, children, children),
        st.builds(Neg, children),
        st.builds(lambda b, n: Pow(b, Const(n)), children, st.integers(0, 3)),
        st.builds(lambda a: Call("sin", a), children),
    )


def _polynomials(children):
    return st.one_of(
        st.builds(Add, children, children),
        st.builds(Sub, children, children),
        st.builds(Mul, children, children),
        st.builds(Neg, children),
        st.builds(lambda b, n: Pow(b, Const(n)), children, st.integers(0, 2)),
    )


def _smooth(children):
    """Trees that are defined everywhere: denominators stay away from zero."""
    return st.one_of(
        st.builds(Add, children, children),
        st.builds(Sub, children, children),
        st.builds(Mul, children, children),
        st.builds(Neg, children),
        st.builds(lambda b, n: Pow(b, Const(n)), children, st.integers(0, 3)),
        st.builds(lambda a, b: Div(a, Add(Const(2), Call("sin", b))), children, children),
        st.builds(lambda a, c: Div(a, Const(c)), children, st.sampled_from([-2.0, 3.0, 4.0])),
        st.builds(Call, st.sampled_from(["sin", "cos"]), children),
    )


expressions = st.recursive(leaves, _trees, max_leaves=12)
polynomials = st.recursive(leaves, _polynomials, max_leaves=8)
smooth = st.recursive(
    st.one_of(st.sampled_from(NAMES).map(Var), st.integers(-2, 2).map(Const)), _smooth, max_leaves=8)
points = st.lists(st.floats(-1, 1), min_size=3, max_size=3)


def _bound(e, point):
    """Upper bound on the magnitude of every partial result of ``e`` and of its expansions."""
    if isinstance(e, Const):
        return abs(e.value)
    if isinstance(e, Var):
        return abs(point[e.name])
    if isinstance(e, Neg):
        return _bound(e.arg, point)
    if isinstance(e, Call):
        return max(1.0, _bound(e.arg, point))
    left, right = _bound(e.left, point), _bound(e.right, point)
    if isinstance(e, (Add, Sub)):
        return left + right
    if isinstance(e, Mul):
        return left * right
    if isinstance(e, Div):
        return left * (1.0 + right)
    return max(1.0, left) ** e.right.value


def _at(e, values):
    return evaluate(e, dict(zip(NAMES, values)))


class TestParser:
    def test_precedence(self):
        assert parse("1 + 2*x^2") == Add(Const(1), Mul(Const(2), Pow(Var("x"), Const(2))))

    def test_power_is_right_associative(self):
        assert parse("2^3^2") == Pow(Const(2), Pow(Const(3), Const(2)))

    def test_unary_minus_and_constants(self):
        assert parse("-x") == Neg(Var("x"))
        assert parse("pi") == Const(math.pi)
        assert parse("e") == Const(math.e)

    def test_scientific_numbers(self):
        assert parse("1.5e-3*x") == Mul(Const(1.5e-3), Var("x"))

    @pytest.mark.parametrize("source, offset", [("1 + * 2", 4), ("x +", 3), ("(x + 1", 6), ("x $ 1", 2)])
    def test_syntax_error_offset(self, source, offset):
        with pytest.raises(ExprSyntaxError) as err:
            parse(source)
        assert err.value.offset == offset

    def test_unknown_function(self):
        with pytest.raises(UnknownFunctionError) as err:
            parse("2*foo(x)")
        assert err.value.name == "foo"
        assert err.value.offset == 2

    def test_function_name_without_call_is_a_variable(self):
        assert parse("foo + 1") == Add(Var("foo"), Const(1))


class TestPrinting:
    @pytest.mark.parametrize("source, text", [
        ("1 + 2*x^2", "1 + 2*x^2"),
        ("-(x^2)", "-(x^2)"),
        ("(a + b)*c", "(a + b)*c"),
        ("a - (b - c)", "a - (b - c)"),
        ("a/(b*c)", "a/(b*c)"),
        ("(x^2)^3", "(x^2)^3"),
        ("sin(x + 1)", "sin(x + 1)"),
    ])
    def test_minimal_parentheses(self, source, text):
        assert to_text(parse(source)) == text

    @given(expressions)
    @settings(max_examples=200, deadline=None)
    def test_text_reparses_to_same_text(self, e):
        assert to_text(parse(to_text(e))) == to_text(e)

    def test_latex(self):
        assert to_latex(parse("x/2")) == "\\frac{x}{2}"
        assert to_latex(parse("sqrt(x)")) == "\\sqrt{x}"
        assert latex_name("pdot_q") == "\\dot{p}_{q}"
        assert latex_name("qddot") == "\\ddot{q}"

    def test_equation_leading_coefficient_positive(self):
        assert equation_text(parse("-p + v")) == "p - v = 0"


class TestSimplify:
    def test_collects_like_terms(self):
        assert to_text(simplify(parse("x + x"))) == "2*x"
        assert is_zero(parse("x*y - y*x"))

    def test_folds_constants(self):
        assert constant_value(parse("2*3 + 1")) == 7.0
        assert constant_value(parse("x")) is None

    def test_does_not_cancel_quotients(self):
        e = simplify(parse("x*(1/x)"))
        assert to_text(e) == "x*(1/x)"
        assert not is_zero(e - parse("1"))

    def test_polynomial_degree(self):
        assert polynomial_degree(parse("v^2*sin(x) + v"), ["v"]) == 2
        assert polynomial_degree(parse("sin(v)"), ["v"]) is None

    @given(expressions)
    @settings(max_examples=200, deadline=None)
    def test_idempotent(self, e):
        once = simplify(e)
        assert simplify(once) == once

    @given(smooth, points)
    @settings(max_examples=300, deadline=None)
    def test_preserves_values(self, e, values):
        assume(_bound(e, dict(zip(NAMES, values))) <= 50.0)
        expected = _at(e, values)
        assert abs(_at(simplify(e), values) - expected) <= 1e-12 * (1.0 + abs(expected))

    def test_preserves_quotients_and_calls(self):
        e = parse("(x + 1)^2/(2 + sin(y)) - cos(x*y)/3")
        values = [0.3, -0.7, 0.0]
        assert _at(simplify(e), values) == pytest.approx(_at(e, values), rel=1e-14)


class TestDiff:
    def test_power_rule(self):
        assert to_text(diff(parse("x^3"), "x")) == "3*x^2"

    def test_chain_and_product_rules(self):
        assert to_text(diff(parse("sin(x)*y"), "x")) == "y*cos(x)"
        assert to_text(diff(parse("exp(2*x)"), "x")) == "2*exp(2*x)"

    def test_absent_variable_gives_zero(self):
        assert diff(parse("y^2"), "x") == ZERO

    @given(smooth, points)
    @settings(max_examples=200, deadline=None)
    def test_matches_central_differences(self, e, values):
        assume(_bound(e, dict(zip(NAMES, values))) <= 50.0)
        grad = np.array([_at(diff(e, name), values) for name in NAMES])
        approx = fd_gradient(lambda p: _at(e, p), values, step=1e-6)
        np.testing.assert_allclose(grad, approx, rtol=0, atol=1e-6 * (1.0 + np.max(np.abs(grad))))

    @given(smooth, smooth, st.integers(-3, 3), st.integers(-3, 3), points, st.sampled_from(NAMES))
    @settings(max_examples=200, deadline=None)
    def test_linear(self, f, g, a, b, values, name):
        point = dict(zip(NAMES, values))
        assume(_bound(f, point) + _bound(g, point) <= 50.0)
        combined = diff(Add(Mul(Const(a), f), Mul(Const(b), g)), name)
        expected = a * _at(diff(f, name), values) + b * _at(diff(g, name), values)
        assert _at(combined, values) == pytest.approx(expected, rel=1e-9, abs=1e-9)

    @given(polynomials)
    @settings(max_examples=200, deadline=None)
    def test_mixed_partials_of_polynomials_cancel(self, e):
        assert is_zero(diff(diff(e, "x"), "y") - diff(diff(e, "y"), "x"))

    @given(smooth, points)
    @settings(max_examples=200, deadline=None)
    def test_mixed_partials_commute(self, e, values):
        assume(_bound(e, dict(zip(NAMES, values))) <= 50.0)
        for first, second in [("x", "y"), ("x", "z"), ("y", "z")]:
            forward = _at(diff(diff(e, first), second), values)
            backward = _at(diff(diff(e, second), first), values)
            assert forward == pytest.approx(backward, rel=1e-9, abs=1e-9)


class TestEvaluate:
    def test_values(self):
        assert evaluate(parse("x^2 + sin(y)"), {"x": 2.0, "y": 0.0}) == 4.0

    @pytest.mark.parametrize("source, point, error", [
        ("x + y", {"x": 1.0}, UnassignedVariableError),
        ("log(x)", {"x": -1.0}, DomainError),
        ("sqrt(x)", {"x": -1.0}, DomainError),
        ("1/x", {"x": 0.0}, DivisionByZeroError),
        ("x^0.5", {"x": -4.0}, DomainError),
    ])
    def test_errors(self, source, point, error):
        with pytest.raises(error):
            evaluate(parse(source), point)

    def test_compiled_broadcasts(self):
        compiled = CompiledExprs([parse("x*y"), parse("1")], ["x", "y"])
        values = compiled(np.array([[1.0, 2.0], [3.0, 4.0]]))
        np.testing.assert_array_equal(values, [[3.0, 8.0], [1.0, 1.0]])


class TestVarTable:
    def test_sort_key_orders_by_role_then_registration(self):
        table = VarTable([("q", Role.FIBER), ("p_q", Role.MOMENTUM), ("v_q", Role.JET)])
        assert sorted(["q", "v_q", "p_q", "aux"], key=table.sort_key) == ["p_q", "v_q", "q", "aux"]

    def test_conflicting_role(self):
        table = VarTable([("q", Role.FIBER)])
        with pytest.raises(ValueError):
            table.add("q", Role.JET)

    def test_unregistered(self):
        table = VarTable([("q", Role.FIBER)])
        assert table.unregistered([parse("q + r*s")]) == ["r", "s"]
