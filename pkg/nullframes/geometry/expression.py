# Copyright 2020 Curtin University
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import re
from typing import Callable, Dict, List, Sequence, Tuple, Union

import numpy as np

from nullframes.errors import ArityError, ExpressionSyntaxError, UnknownIdentifierError

Scalar = Union[float, 'Jet2']


class Jet2:
    """ A second order truncated Taylor jet: value, gradient and hessian of a scalar with respect to m variables.

    Arithmetic propagates the three orders exactly, so a metric component evaluated on coordinate jets returns its
    first and second partial derivatives without finite differencing.
    """

    __slots__ = ('value', 'grad', 'hess')

    # numpy scalars defer to the reflected operators below
    __array_ufunc__ = None

    def __init__(self, value: float, grad: np.ndarray, hess: np.ndarray):
        self.value = value
        self.grad = grad
        self.hess = hess

    @staticmethod
    def variable(value: float, index: int, dim: int) -> 'Jet2':
        """ Make the jet of the coordinate function x_index evaluated at value.

        :param value: the coordinate value.
        :param index: which coordinate.
        :param dim: the number of coordinates.
        :return: the jet.
        """

        grad = np.zeros(dim)
        grad[index] = 1.0
        return Jet2(np.float64(value), grad, np.zeros((dim, dim)))

    @staticmethod
    def constant(value: float, dim: int) -> 'Jet2':
        return Jet2(np.float64(value), np.zeros(dim), np.zeros((dim, dim)))

    @property
    def dim(self) -> int:
        return self.grad.shape[0]

    def __repr__(self):
        return f'Jet2(value={self.value!r}, grad={self.grad!r})'

    def chain(self, value: float, d1: float, d2: float) -> 'Jet2':
        """ Compose a scalar function f with this jet given f, f' and f'' at self.value.

        :param value: f(self.value).
        :param d1: f'(self.value).
        :param d2: f''(self.value).
        :return: the jet of f(self).
        """

        g = self.grad
        return Jet2(value, d1 * g, d1 * self.hess + d2 * np.outer(g, g))

    def __neg__(self):
        return Jet2(-self.value, -self.grad, -self.hess)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, Jet2):
            return Jet2(self.value + other.value, self.grad + other.grad, self.hess + other.hess)
        return Jet2(self.value + other, self.grad, self.hess)

    def __radd__(self, other):
        return Jet2(other + self.value, self.grad, self.hess)

    def __sub__(self, other):
        if isinstance(other, Jet2):
            return Jet2(self.value - other.value, self.grad - other.grad, self.hess - other.hess)
        return Jet2(self.value - other, self.grad, self.hess)

    def __rsub__(self, other):
        return Jet2(other - self.value, -self.grad, -self.hess)

    def __mul__(self, other):
        if isinstance(other, Jet2):
            a, b = self, other
            cross = np.outer(a.grad, b.grad)
            return Jet2(a.value * b.value,
                        a.value * b.grad + b.value * a.grad,
                        a.value * b.hess + b.value * a.hess + cross + cross.T)
        return Jet2(self.value * other, self.grad * other, self.hess * other)

    def __rmul__(self, other):
        return Jet2(other * self.value, other * self.grad, other * self.hess)

    def reciprocal(self) -> 'Jet2':
        v = self.value
        return self.chain(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))

    def __truediv__(self, other):
        if isinstance(other, Jet2):
            quotient = self * other.reciprocal()
            quotient.value = self.value / other.value
            return quotient
        return Jet2(self.value / other, self.grad / other, self.hess / other)

    def __rtruediv__(self, other):
        inverse = self.reciprocal()
        return Jet2(other / self.value, other * inverse.grad, other * inverse.hess)

    def __pow__(self, other):
        if isinstance(other, Jet2):
            # a^b = exp(b log a) for a variable exponent
            result = jet_function('exp', other * jet_function('log', self))
            result.value = np.power(self.value, other.value)
            return result

        c = np.float64(other)
        value = np.power(self.value, c)
        if c == 0.0:
            return Jet2(value, np.zeros_like(self.grad), np.zeros_like(self.hess))
        if c == 1.0:
            return Jet2(value, self.grad.copy(), self.hess.copy())
        v = self.value
        d1 = c * np.power(v, c - 1.0)
        d2 = c * (c - 1.0) * np.power(v, c - 2.0)
        return self.chain(value, d1, d2)

    def __rpow__(self, other):
        base = np.float64(other)
        value = np.power(base, self.value)
        log_base = np.log(base)
        return self.chain(value, value * log_base, value * log_base * log_base)


def _jet_derivatives(name: str, v: float) -> Tuple[float, float, float]:
    if name == 'sin':
        s, c = np.sin(v), np.cos(v)
        return s, c, -s
    elif name == 'cos':
        s, c = np.sin(v), np.cos(v)
        return c, -s, -c
    elif name == 'tan':
        t = np.tan(v)
        sec2 = 1.0 + t * t
        return t, sec2, 2.0 * t * sec2
    elif name == 'sinh':
        s, c = np.sinh(v), np.cosh(v)
        return s, c, s
    elif name == 'cosh':
        s, c = np.sinh(v), np.cosh(v)
        return c, s, c
    elif name == 'tanh':
        t = np.tanh(v)
        d = 1.0 - t * t
        return t, d, -2.0 * t * d
    elif name == 'exp':
        e = np.exp(v)
        return e, e, e
    elif name == 'log':
        return np.log(v), 1.0 / v, -1.0 / (v * v)
    elif name == 'sqrt':
        s = np.sqrt(v)
        return s, 0.5 / s, -0.25 / (s * s * s)
    elif name == 'abs':
        return np.abs(v), np.sign(v), np.float64(0.0)
    raise UnknownIdentifierError(name, -1)


def jet_function(name: str, x: Jet2) -> Jet2:
    """ Apply one of the supported elementary functions to a jet.

    :param name: the function name, e.g. sin.
    :param x: the argument.
    :return: the jet of name(x).
    """

    value, d1, d2 = _jet_derivatives(name, x.value)
    return x.chain(value, d1, d2)


FUNCTIONS: Dict[str, Callable] = {
    'sin': np.sin,
    'cos': np.cos,
    'tan': np.tan,
    'sinh': np.sinh,
    'cosh': np.cosh,
    'tanh': np.tanh,
    'exp': np.exp,
    'log': np.log,
    'sqrt': np.sqrt,
    'abs': np.abs
}

CONSTANTS: Dict[str, float] = {
    'pi': np.pi
}


def apply_function(name: str, x: Scalar) -> Scalar:
    if isinstance(x, Jet2):
        return jet_function(name, x)
    return FUNCTIONS[name](x)


def power(a: Scalar, b: Scalar) -> Scalar:
    if isinstance(a, Jet2) or isinstance(b, Jet2):
        return a ** b
    return np.power(a, b)


class Node:
    """ A node of a parsed expression tree. """

    def evaluate(self, env: Sequence[Scalar]) -> Scalar:
        raise NotImplementedError

    def names(self) -> List[str]:
        return []


class Number(Node):

    def __init__(self, value: float):
        self.value = np.float64(value)

    def evaluate(self, env):
        return self.value


class Variable(Node):

    def __init__(self, name: str, index: int):
        self.name = name
        self.index = index

    def evaluate(self, env):
        return env[self.index]

    def names(self):
        return [self.name]


class Negate(Node):

    def __init__(self, operand: Node):
        self.operand = operand

    def evaluate(self, env):
        return -self.operand.evaluate(env)

    def names(self):
        return self.operand.names()


class BinaryOp(Node):

    def __init__(self, op: str, left: Node, right: Node):
        self.op = op
        self.left = left
        self.right = right

    def evaluate(self, env):
        a = self.left.evaluate(env)
        b = self.right.evaluate(env)
        if self.op == '+':
            return a + b
        elif self.op == '-':
            return a - b
        elif self.op == '*':
            return a * b
        elif self.op == '/':
            return a / b
        return power(a, b)

    def names(self):
        return self.left.names() + self.right.names()


class Call(Node):

    def __init__(self, name: str, argument: Node):
        self.name = name
        self.argument = argument

    def evaluate(self, env):
        return apply_function(self.name, self.argument.evaluate(env))

    def names(self):
        return self.argument.names()


TOKEN_REGEX = re.compile(r'\s*(?:(?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)'
                         r'|(?P<op>[-+*/^(),]))')


class Token:

    def __init__(self, kind: str, text: str, position: int):
        self.kind = kind
        self.text = text
        self.position = position

    def __repr__(self):
        return f'Token({self.kind}, {self.text!r}, {self.position})'


def tokenize(source: str) -> List[Token]:
    """ Split an expression into number, name and operator tokens.

    :param source: the expression text.
    :return: the tokens, terminated by an end token.
    """

    tokens = []
    pos = 0
    length = len(source)
    while pos < length:
        if source[pos:].strip() == '':
            break
        match = TOKEN_REGEX.match(source, pos)
        if match is None:
            bad = pos + len(source[pos:]) - len(source[pos:].lstrip())
            raise ExpressionSyntaxError(f"unexpected character '{source[bad]}'", bad)
        kind = match.lastgroup
        text = match.group(kind)
        tokens.append(Token(kind, text, match.start(kind)))
        pos = match.end()
    tokens.append(Token('end', '', length))
    return tokens


class Parser:
    """ Recursive descent parser for the expression grammar:

        sum     := product (('+' | '-') product)*
        product := unary (('*' | '/') unary)*
        unary   := '-' unary | power
        power   := atom ('^' unary)?
        atom    := number | constant | variable | function '(' sum ')' | '(' sum ')'

    '^' is right associative and binds tighter than unary minus, so -x^2 is -(x^2).
    """

    def __init__(self, source: str, variables: Sequence[str]):
        self.source = source
        self.variables = {name: i for i, name in enumerate(variables)}
        self.tokens = tokenize(source)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, text: str) -> Token:
        token = self.current
        if token.text != text or token.kind == 'end':
            found = 'end of input' if token.kind == 'end' else f"'{token.text}'"
            raise ExpressionSyntaxError(f"expected '{text}' but found {found}", token.position)
        return self.advance()

    def parse(self) -> Node:
        if self.current.kind == 'end':
            raise ExpressionSyntaxError('empty expression', 0)
        node = self.parse_sum()
        if self.current.kind != 'end':
            raise ExpressionSyntaxError(f"unexpected '{self.current.text}'", self.current.position)
        return node

    def parse_sum(self) -> Node:
        node = self.parse_product()
        while self.current.kind == 'op' and self.current.text in ('+', '-'):
            op = self.advance().text
            node = BinaryOp(op, node, self.parse_product())
        return node

    def parse_product(self) -> Node:
        node = self.parse_unary()
        while self.current.kind == 'op' and self.current.text in ('*', '/'):
            op = self.advance().text
            node = BinaryOp(op, node, self.parse_unary())
        return node

    def parse_unary(self) -> Node:
        if self.current.kind == 'op' and self.current.text == '-':
            self.advance()
            return Negate(self.parse_unary())
        return self.parse_power()

    def parse_power(self) -> Node:
        base = self.parse_atom()
        if self.current.kind == 'op' and self.current.text == '^':
            self.advance()
            return BinaryOp('^', base, self.parse_unary())
        return base

    def parse_atom(self) -> Node:
        token = self.current
        if token.kind == 'number':
            self.advance()
            return Number(float(token.text))
        elif token.kind == 'name':
            self.advance()
            return self.parse_name(token)
        elif token.kind == 'op' and token.text == '(':
            self.advance()
            node = self.parse_sum()
            self.expect(')')
            return node
        elif token.kind == 'end':
            raise ExpressionSyntaxError('unexpected end of input', token.position)
        raise ExpressionSyntaxError(f"unexpected '{token.text}'", token.position)

    def parse_name(self, token: Token) -> Node:
        name = token.text
        is_call = self.current.kind == 'op' and self.current.text == '('

        if name in FUNCTIONS:
            if not is_call:
                raise ExpressionSyntaxError(f"function '{name}' must be followed by '('", self.current.position)
            self.advance()
            arguments = []
            if not (self.current.kind == 'op' and self.current.text == ')'):
                arguments.append(self.parse_sum())
                while self.current.kind == 'op' and self.current.text == ',':
                    self.advance()
                    arguments.append(self.parse_sum())
            self.expect(')')
            if len(arguments) != 1:
                raise ArityError(f"function '{name}' takes 1 argument but {len(arguments)} were given "
                                 f"at position {token.position}")
            return Call(name, arguments[0])

        if is_call:
            raise ExpressionSyntaxError(f"'{name}' is not a function", token.position)
        if name in self.variables:
            return Variable(name, self.variables[name])
        if name in CONSTANTS:
            return Number(CONSTANTS[name])
        raise UnknownIdentifierError(name, token.position)


class ExpressionField:
    """ A scalar field given by a closed form expression over named variables. """

    def __init__(self, source: str, variables: Sequence[str]):
        """ Parse an expression.

        :param source: the expression text.
        :param variables: the ordered variable names; points passed to the field follow this order.
        """

        self.source = source
        self.variables = tuple(variables)
        self.tree = Parser(source, self.variables).parse()

    @property
    def arity(self) -> int:
        return len(self.variables)

    def __repr__(self):
        return f'ExpressionField({self.source!r}, {list(self.variables)!r})'

    def __eq__(self, other):
        return isinstance(other, ExpressionField) and self.source == other.source and \
               self.variables == other.variables

    def __hash__(self):
        return hash((self.source, self.variables))

    def _check_point(self, point: Sequence) -> None:
        if len(point) != self.arity:
            raise ArityError(f'{self.source!r} expects {self.arity} values but {len(point)} were given')

    def __call__(self, point: Sequence[float]) -> float:
        return self.evaluate(point)

    def evaluate(self, point: Sequence[float]) -> float:
        """ Evaluate the field with plain floating point arithmetic.

        :param point: the variable values.
        :return: the value.
        """

        self._check_point(point)
        return np.float64(self.tree.evaluate([np.float64(x) for x in point]))

    def jet(self, point: Sequence[float]) -> Jet2:
        """ Evaluate the field on coordinate jets.

        :param point: the variable values.
        :return: value, gradient and hessian with respect to the variables.
        """

        self._check_point(point)
        dim = self.arity
        env = [Jet2.variable(x, i, dim) for i, x in enumerate(point)]
        result = self.tree.evaluate(env)
        if not isinstance(result, Jet2):
            result = Jet2.constant(result, dim)
        return result

    def jet_at(self, env: Sequence[Scalar]) -> Scalar:
        """ Evaluate the field on arbitrary jets, e.g. jets of parameters pushed through an immersion.

        :param env: one scalar or jet per variable.
        :return: the resulting scalar or jet.
        """

        self._check_point(env)
        return self.tree.evaluate(env)

    def gradient(self, point: Sequence[float]) -> np.ndarray:
        return self.jet(point).grad

    def rename(self, mapping: Dict[str, str]) -> 'ExpressionField':
        """ Rename variables in both the source text and the variable list.

        :param mapping: old name to new name.
        :return: the renamed field.
        """

        source = self.source
        for token in reversed(tokenize(source)):
            if token.kind == 'name' and token.text in mapping and token.text in self.variables:
                source = source[:token.position] + mapping[token.text] + source[token.position + len(token.text):]
        variables = [mapping.get(name, name) for name in self.variables]
        return ExpressionField(source, variables)


def parse_expression(source: str, variables: Sequence[str]) -> ExpressionField:
    """ Parse an expression over the given variables.

    :param source: the expression text.
    :param variables: the variable names.
    :return: the ExpressionField.
    """

    return ExpressionField(source, variables)
