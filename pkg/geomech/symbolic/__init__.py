from geomech.symbolic.compile import CompiledExprs, evaluate
from geomech.symbolic.expr import (
    ONE,
    ZERO,
    Add,
    Call,
    Const,
    Div,
    Expr,
    Mul,
    Neg,
    Pow,
    Sub,
    Var,
    as_expr,
    cos,
    diff,
    exp,
    free_variables,
    gradient,
    jacobian,
    log,
    rename,
    sin,
    sqrt,
    substitute,
    sum_exprs,
    tan,
)
from geomech.symbolic.parser import parse
from geomech.symbolic.printing import assignment_text, equation_latex, equation_text, latex_name, to_latex, to_text
from geomech.symbolic.simplify import constant_value, is_zero, normalize_equation, polynomial_degree, simplify
from geomech.symbolic.vartable import Role, VarTable
