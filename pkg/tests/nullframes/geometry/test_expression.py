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

import math
import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from nullframes.errors import ArityError, ExpressionSyntaxError, UnknownIdentifierError
from nullframes.geometry.expression import ExpressionField, Jet2, parse_expression, tokenize

finite = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False)


class TestExpression(unittest.TestCase):

    def test_evaluate(self):
        f = parse_expression('2*x + y^2 - sin(x)', ['x', 'y'])
        self.assertAlmostEqual(2 * 0.3 + 0.25 - math.sin(0.3), f([0.3, 0.5]), places=14)

        # Precedence: unary minus binds looser than power, power is right associative
        self.assertEqual(-4.0, parse_expression('-x^2', ['x'])([2.0]))
        self.assertEqual(512.0, parse_expression('2^3^2', [])([]))
        self.assertEqual(2.0, parse_expression('8/2/2', [])([]))
        self.assertAlmostEqual(math.pi, parse_expression('pi', [])([]), places=15)
        self.assertAlmostEqual(0.25, parse_expression('.5e-1*5', [])([]), places=15)

    def test_errors(self):
        with self.assertRaises(ExpressionSyntaxError) as cm:
            parse_expression('x + * y', ['x', 'y'])
        self.assertEqual(4, cm.exception.position)

        with self.assertRaises(ExpressionSyntaxError):
            parse_expression('', ['x'])
        with self.assertRaises(ExpressionSyntaxError):
            parse_expression('(x + 1', ['x'])
        with self.assertRaises(ExpressionSyntaxError):
            parse_expression('x $ 1', ['x'])
        with self.assertRaises(ExpressionSyntaxError):
            parse_expression('sin x', ['x'])

        with self.assertRaises(UnknownIdentifierError) as cm:
            parse_expression('x + z', ['x', 'y'])
        self.assertEqual('z', cm.exception.name)
        self.assertEqual(4, cm.exception.position)

        with self.assertRaises(ArityError):
            parse_expression('sin(x, y)', ['x', 'y'])
        with self.assertRaises(ArityError):
            parse_expression('x + y', ['x', 'y'])([1.0])

    def test_tokenize(self):
        kinds = [token.kind for token in tokenize('sin(x1) + 2.5')]
        self.assertEqual(['name', 'op', 'name', 'op', 'op', 'number', 'end'], kinds)

    def test_jet(self):
        f = parse_expression('x^2*y + exp(y)', ['x', 'y'])
        jet = f.jet([1.5, 0.5])
        self.assertIsInstance(jet, Jet2)
        self.assertAlmostEqual(1.5 ** 2 * 0.5 + math.exp(0.5), jet.value, places=13)
        np.testing.assert_allclose([2 * 1.5 * 0.5, 1.5 ** 2 + math.exp(0.5)], jet.grad, rtol=1e-13)
        np.testing.assert_allclose([[2 * 0.5, 2 * 1.5], [2 * 1.5, math.exp(0.5)]], jet.hess, rtol=1e-13)

        # A constant expression still has a jet of the right dimension
        jet = parse_expression('3', ['x', 'y']).jet([0.0, 0.0])
        self.assertEqual(3.0, jet.value)
        np.testing.assert_array_equal(np.zeros(2), jet.grad)
        np.testing.assert_array_equal(np.zeros((2, 2)), jet.hess)

    @given(x=finite, y=finite)
    @settings(max_examples=50, deadline=None)
    def test_jet_matches_finite_differences(self, x, y):
        f = parse_expression('sin(x)*cosh(y) + x*tanh(y) + sqrt(1 + x^2)', ['x', 'y'])
        jet = f.jet([x, y])
        self.assertAlmostEqual(f([x, y]), jet.value, places=12)

        h = 1e-6
        fd = [(f([x + h, y]) - f([x - h, y])) / (2 * h), (f([x, y + h]) - f([x, y - h])) / (2 * h)]
        np.testing.assert_allclose(fd, jet.grad, atol=1e-6)
        self.assertAlmostEqual(jet.hess[0, 1], jet.hess[1, 0], places=12)

    @given(x=finite, y=finite)
    @settings(max_examples=50, deadline=None)
    def test_jet_leibniz(self, x, y):
        quotient = parse_expression('(x^2 + sin(y)) / (y^2 + 1)', ['x', 'y']).jet([x, y])
        denominator = parse_expression('y^2 + 1', ['x', 'y']).jet([x, y])
        numerator = parse_expression('x^2 + sin(y)', ['x', 'y']).jet([x, y])
        product = quotient * denominator
        self.assertAlmostEqual(numerator.value, product.value, places=10)
        np.testing.assert_allclose(numerator.grad, product.grad, atol=1e-9)
        np.testing.assert_allclose(numerator.hess, product.hess, atol=1e-8)

    def test_rename(self):
        f = parse_expression('x1 + 2*x12 + sin(x1)', ['x1', 'x12'])
        g = f.rename({'x1': 't'})
        self.assertEqual('t + 2*x12 + sin(t)', g.source)
        self.assertEqual(('t', 'x12'), g.variables)
        self.assertEqual(f([0.2, 0.4]), g([0.2, 0.4]))

    def test_equality(self):
        self.assertEqual(ExpressionField('x', ['x']), ExpressionField('x', ['x']))
        self.assertNotEqual(ExpressionField('x', ['x']), ExpressionField('x', ['x', 'y']))
        self.assertEqual(1, len({ExpressionField('x', ['x']), ExpressionField('x', ['x'])}))
