"""Recursive-descent parser for the expression grammar.

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := unary ("^" factor)?
    unary  := "-" unary | atom
    atom   := number | ident | ident "(" expr ")" | "(" expr ")"

``^`` is right-associative. The identifiers ``pi`` and ``e`` denote constants.
Error offsets are byte offsets into the UTF-8 encoded source.
"""
import re
from typing import NamedTuple

from geomech.errors import ExprSyntaxError, UnknownFunctionError
from geomech.symbolic.expr import CONSTANTS, FUNCTIONS, Add, Call, Const, Div, Mul, Neg, Pow, Sub, Var

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
    | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
    | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


class Token(NamedTuple):
    kind: str  # number, ident, op or end
    text: str
    offset: int


def _byte_offset(source, index):
    return len(source[:index].encode("utf-8"))


def tokenize(source):
    """Split ``source`` into tokens, ending with an ``end`` token."""
    tokens = []
    index = 0
    while index < len(source):
        match = _TOKEN_RE.match(source, index)
        if match is None:
            raise ExprSyntaxError(f"unexpected character '{source[index]}'", _byte_offset(source, index))
        if match.lastgroup != "ws":
            tokens.append(Token(match.lastgroup, match.group(), _byte_offset(source, index)))
        index = match.end()
    tokens.append(Token("end", "", _byte_offset(source, len(source))))
    return tokens


class Parser:
    def __init__(self, source):
        self.source = source
        self.tokens = tokenize(source)
        self.pos = 0

    @property
    def current(self):
        return self.tokens[self.pos]

    def _advance(self):
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def _accept(self, *ops):
        if self.current.kind == "op" and self.current.text in ops:
            return self._advance()
        return None

    def _expect(self, op):
        if self._accept(op) is None:
            found = self.current.text or "end of input"
            raise ExprSyntaxError(f"expected '{op}' but found '{found}'", self.current.offset)

    def parse(self):
        tree = self.expr()
        if self.current.kind != "end":
            raise ExprSyntaxError(f"unexpected token '{self.current.text}'", self.current.offset)
        return tree

    def expr(self):
        left = self.term()
        while (token := self._accept("+", "-")) is not None:
            right = self.term()
            left = Add(left, right) if token.text == "+" else Sub(left, right)
        return left

    def term(self):
        left = self.factor()
        while (token := self._accept("*", "/")) is not None:
            right = self.factor()
            left = Mul(left, right) if token.text == "*" else Div(left, right)
        return left

    def factor(self):
        base = self.unary()
        if self._accept("^") is not None:
            return Pow(base, self.factor())
        return base

    def unary(self):
        if self._accept("-") is not None:
            return Neg(self.unary())
        return self.atom()

    def atom(self):
        token = self.current
        if token.kind == "number":
            self._advance()
            return Const(float(token.text))
        if token.kind == "ident":
            self._advance()
            if self.current.kind == "op" and self.current.text == "(":
                if token.text not in FUNCTIONS:
                    raise UnknownFunctionError(token.text, token.offset)
                self._advance()
                arg = self.expr()
                self._expect(")")
                return Call(token.text, arg)
            if token.text in CONSTANTS:
                return Const(CONSTANTS[token.text])
            return Var(token.text)
        if self._accept("(") is not None:
            inner = self.expr()
            self._expect(")")
            return inner
        if token.kind == "end":
            raise ExprSyntaxError("unexpected end of input, expected an operand", token.offset)
        raise ExprSyntaxError(f"unexpected token '{token.text}'", token.offset)


def parse(source):
    """Parse an expression string into an :class:`~geomech.symbolic.expr.Expr`.

    Args:
        source (str): Expression text.

    Returns:
        Expr: The abstract syntax tree.

    Raises:
        ExprSyntaxError: If ``source`` does not follow the grammar; carries the byte offset.
        UnknownFunctionError: If a call names a function outside sin, cos, tan, exp, log, sqrt.
    """
    return Parser(source).parse()
