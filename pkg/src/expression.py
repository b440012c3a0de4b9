"""
A small arithmetic language over the position variable X.

Grammar (lowest to highest precedence):
    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := ('-' | '+') unary | power
    power := atom ('^' unary)?          integer constant exponents only, right associative
    atom  := NUMBER | 'X' | FUNC '(' expr ')' | '(' expr ')'
with FUNC one of sin, cos, tanh, exp, sqrt, abs.
"""

import re
import math
import logging
from typing import Callable, NamedTuple, Optional, Union

import numpy as np
from numpy.polynomial import polynomial as P

from src import config
from src.errors import ParseError, NonIntegerExponent

logger = logging.getLogger(__name__)

FUNCTIONS = {
                'sin': math.sin,
                'cos': math.cos,
                'tanh': math.tanh,
                'exp': math.exp,
                'sqrt': math.sqrt,
                'abs': abs,
                }

VARIABLES = ('X',)

_TOKEN_RE = re.compile(r'''
    (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
  | (?P<space>\s+)
''', re.VERBOSE)

_ATOM_START = frozenset({'number', 'X', '(', '-', '+'} | set(FUNCTIONS))


class Token(NamedTuple):
    type: str
    value: Union[str, float]
    offset: int


class Num(NamedTuple):
    value: float


class Var(NamedTuple):
    pass


class Neg(NamedTuple):
    operand: 'Node'


class BinOp(NamedTuple):
    op: str
    left: 'Node'
    right: 'Node'


class Pow(NamedTuple):
    base: 'Node'
    exponent: int


class Call(NamedTuple):
    name: str
    arg: 'Node'


Node = Union[Num, Var, Neg, BinOp, Pow, Call]


def tokenize(text: str):
    """Splits expression text into tokens, ending with an 'end' token.
    Raises:
        ParseError on a character that starts no token.
    """
    tokens = []
    position = 0
    while position < len(text):
        match = _TOKEN_RE.match(text, position)
        if match is None:
            raise ParseError(f"Unexpected character {text[position]!r}", _byte_offset(text, position),
                             _ATOM_START)
        kind = match.lastgroup
        if kind == 'number':
            tokens.append(Token('number', float(match.group()), position))
        elif kind == 'name':
            tokens.append(Token('name', match.group(), position))
        elif kind == 'op':
            tokens.append(Token(match.group(), match.group(), position))
        position = match.end()
    tokens.append(Token('end', '', len(text)))
    return tokens


def _byte_offset(text: str, position: int) -> int:
    return len(text[:position].encode('utf-8'))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def token(self) -> Token:
        return self.tokens[self.index]

    def error(self, message: str, expected, cls=ParseError):
        return cls(message, _byte_offset(self.text, self.token.offset), expected)

    def advance(self) -> Token:
        token = self.token
        self.index += 1
        return token

    def expect(self, kind: str) -> Token:
        if self.token.type != kind:
            found = 'end of input' if self.token.type == 'end' else repr(self.token.value)
            raise self.error(f"Expected {kind!r} but found {found}", {kind})
        return self.advance()

    def parse(self) -> Node:
        node = self.expr()
        if self.token.type != 'end':
            raise self.error(f"Unexpected {self.token.value!r}", {'+', '-', '*', '/', '^', 'end'})
        return node

    def constant(self, node: Node, token: Token, cls=ParseError) -> Node:
        """Checks that a sub-expression free of X evaluates to a finite number."""
        if _has_variable(node):
            return node
        offset = _byte_offset(self.text, token.offset)
        try:
            value = compile_node(node)(0.0)
        except (ValueError, ZeroDivisionError, OverflowError) as error:
            raise cls(f"Constant cannot be evaluated ({error})", offset) from error
        if not math.isfinite(value):
            raise cls(f"Constant evaluates to {value!r}", offset)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.token.type in ('+', '-'):
            token = self.advance()
            node = self.constant(BinOp(token.type, node, self.term()), token)
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.token.type in ('*', '/'):
            token = self.advance()
            node = self.constant(BinOp(token.type, node, self.unary()), token)
        return node

    def unary(self) -> Node:
        if self.token.type == '-':
            self.advance()
            return Neg(self.unary())
        if self.token.type == '+':
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.token.type != '^':
            return base
        caret = self.advance()
        start = self.token
        exponent = self.unary()
        if _has_variable(exponent):
            raise NonIntegerExponent('Exponent must be an integer constant, not a function of X',
                                     _byte_offset(self.text, start.offset))
        self.constant(exponent, start, NonIntegerExponent)
        value = compile_node(exponent)(0.0)
        if not float(value).is_integer():
            raise NonIntegerExponent(f"Exponent {value!r} is not an integer",
                                     _byte_offset(self.text, start.offset))
        if abs(value) > config.MAX_EXPONENT:
            raise NonIntegerExponent(f"Exponent {int(value)} exceeds {config.MAX_EXPONENT} in magnitude",
                                     _byte_offset(self.text, start.offset))
        return self.constant(Pow(base, int(value)), caret)

    def atom(self) -> Node:
        token = self.token
        if token.type == 'number':
            self.advance()
            return self.constant(Num(token.value), token)
        if token.type == 'name':
            self.advance()
            if token.value in VARIABLES:
                return Var()
            if token.value in FUNCTIONS:
                self.expect('(')
                arg = self.expr()
                self.expect(')')
                return self.constant(Call(token.value, arg), token)
            raise ParseError(f"Unknown name {token.value!r}", _byte_offset(self.text, token.offset),
                             {'X'} | set(FUNCTIONS))
        if token.type == '(':
            self.advance()
            node = self.expr()
            self.expect(')')
            return node
        found = 'end of input' if token.type == 'end' else repr(token.value)
        raise self.error(f"Expected a number, X, a function or '(' but found {found}", _ATOM_START)


def parse(text: str) -> Node:
    """Parses expression text into a syntax tree.
    Raises:
        ParseError with the byte offset and the expected tokens.
        NonIntegerExponent when '^' is followed by a fractional or X-dependent exponent.
    """
    return _Parser(text).parse()


def _has_variable(node: Node) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Num):
        return False
    if isinstance(node, Neg):
        return _has_variable(node.operand)
    if isinstance(node, BinOp):
        return _has_variable(node.left) or _has_variable(node.right)
    if isinstance(node, Pow):
        return _has_variable(node.base)
    return _has_variable(node.arg)


_BINARY = {
            '+': lambda a, b: a + b,
            '-': lambda a, b: a - b,
            '*': lambda a, b: a * b,
            '/': lambda a, b: a / b,
            }


def compile_node(node: Node) -> Callable[[float], float]:
    """Turns a syntax tree into a nest of closures taking the value of X."""
    if isinstance(node, Num):
        value = node.value
        return lambda x: value
    if isinstance(node, Var):
        return lambda x: x
    if isinstance(node, Neg):
        operand = compile_node(node.operand)
        return lambda x: -operand(x)
    if isinstance(node, BinOp):
        left, right, op = compile_node(node.left), compile_node(node.right), _BINARY[node.op]
        return lambda x: op(left(x), right(x))
    if isinstance(node, Pow):
        base, exponent = compile_node(node.base), node.exponent
        return lambda x: base(x) ** exponent
    func, arg = FUNCTIONS[node.name], compile_node(node.arg)
    return lambda x: func(arg(x))


def to_polynomial(node: Node) -> Optional[np.ndarray]:
    """Returns ascending polynomial coefficients when the tree is a polynomial in X, otherwise None.
    Constant sub-expressions (including function calls of constants) are folded.
    """
    if isinstance(node, Num):
        return np.array([node.value])
    if isinstance(node, Var):
        return np.array([0.0, 1.0])
    if isinstance(node, Neg):
        inner = to_polynomial(node.operand)
        return None if inner is None else -inner
    if isinstance(node, BinOp):
        left, right = to_polynomial(node.left), to_polynomial(node.right)
        if left is None or right is None:
            return None
        if node.op == '+':
            return P.polyadd(left, right)
        if node.op == '-':
            return P.polysub(left, right)
        if node.op == '*':
            return P.polymul(left, right)
        if len(right) == 1 and right[0] != 0:
            return left / right[0]
        return None
    if isinstance(node, Pow):
        base = to_polynomial(node.base)
        if base is None:
            return None
        if node.exponent >= 0:
            return P.polypow(base, node.exponent, maxpower=config.MAX_EXPONENT)
        if len(base) == 1 and base[0] != 0:
            return np.array([base[0] ** node.exponent])
        return None
    arg = to_polynomial(node.arg)
    if arg is None or len(arg) != 1:
        return None
    try:
        return np.array([float(FUNCTIONS[node.name](arg[0]))])
    except (ValueError, OverflowError):
        return None


def format_polynomial(coefficients) -> str:
    """Formats ascending coefficients as expression text that parses back to the same values."""
    terms = []
    for power, coefficient in enumerate(coefficients):
        if coefficient == 0:
            continue
        text = repr(float(coefficient))
        terms.append(text if power == 0 else f"{text}*X^{power}")
    if not terms:
        return repr(float(coefficients[0])) if len(coefficients) else '0.0'
    return ' + '.join(terms)
