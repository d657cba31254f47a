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

import unittest

import numpy as np

from nullframes.geometry.ambient import VectorField
from nullframes.geometry.expression import ExpressionField
from nullframes.hypersurfaces.frames import GaugedFrameField
from nullframes.shape.calculus import codazzi_residual, components_residual, gauge_covariance_report, \
    integrability_residual, nonmetric_residual, screen_fund_C, second_fund_B, shape_AZperp, shape_operators, \
    split_field, tau_form, zperp_residual
from tests.nullframes.config import cone_frame, hyperplane_frame


class TestShapeOperators(unittest.TestCase):

    def test_light_cone(self):
        frame = cone_frame()
        u = [1.0, 0.5]
        r = np.sqrt(1.25)
        shape = shape_operators(frame, u)

        # The cone is totally umbilical with A*_xi = P / r, A_N = P / (2 r) and tau = 0 on the screen
        self.assertEqual(1, shape.n)
        self.assertAlmostEqual(1.0 / r, shape.A_star[0, 0], places=6)
        self.assertAlmostEqual(0.5 / r, shape.A_N[0, 0], places=6)
        self.assertAlmostEqual(1.0 / r, shape.H, places=6)
        self.assertAlmostEqual(1.0 / r, shape.B[0, 0], places=10)
        self.assertAlmostEqual(0.0, shape.tau[0], places=6)
        for key, value in shape.duality_residuals().items():
            self.assertLess(value, 1e-6, key)
        self.assertEqual(0.0, integrability_residual(shape))

        s = shape.sample
        self.assertAlmostEqual(1.0 / r, second_fund_B(frame, u, s.screen[0], s.screen[0]), places=10)
        self.assertAlmostEqual(0.0, second_fund_B(frame, u, s.xi, s.screen[0]), places=10)
        self.assertAlmostEqual(0.0, tau_form(frame, u, s.screen[0]), places=6)
        self.assertAlmostEqual(0.5 / r, screen_fund_C(frame, u, s.screen[0], s.screen[0]), places=6)

        # e0 has g(e0, N) = -1/2 and g(e0, xi) = 1, so A_{Z perp} = -A*_xi / 2 + A_N vanishes
        split = split_field(frame, VectorField(['1', '0', '0'], s.immersion.ambient.coordinates), u)
        np.testing.assert_allclose([0.0], shape_AZperp(shape, split, [1.0]), atol=1e-6)

        d = shape.to_dict()
        self.assertAlmostEqual(shape.H, d['H'])
        self.assertEqual([1.0, 0.5], d['u'])

    def test_null_hyperplane(self):
        shape = shape_operators(hyperplane_frame(), [0.0, 0.0])
        for matrix in [shape.B, shape.C, shape.A_N, shape.A_star]:
            np.testing.assert_allclose(np.zeros((1, 1)), matrix, atol=1e-9)
        self.assertAlmostEqual(0.0, shape.tau_xi, places=9)
        self.assertAlmostEqual(0.0, shape.a_star_xi, places=9)

    def test_identities(self):
        frame = cone_frame()
        u = [1.5, -0.5]
        X, Y = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        self.assertLess(codazzi_residual(frame, u, X, Y, Y), 1e-5)
        self.assertLess(codazzi_residual(frame, u, X, Y, X), 1e-5)
        self.assertLess(nonmetric_residual(frame, u, X, Y, Y), 1e-5)
        self.assertLess(nonmetric_residual(frame, u, Y, X, X), 1e-5)


class TestSplitField(unittest.TestCase):

    def test_split(self):
        frame = hyperplane_frame()
        Z = VectorField(['1', '2', '3'], frame.immersion.ambient.coordinates)
        split = split_field(frame, Z, [0.0, 0.0])
        self.assertAlmostEqual(-1.5, split.Z_xi_coef, places=12)
        self.assertAlmostEqual(-1.0, split.Z_N_coef, places=12)
        self.assertAlmostEqual(3.0, split.zstar_norm, places=12)
        self.assertEqual(1, split.eps_Z)
        self.assertAlmostEqual(np.sqrt(12.0), split.normZ, places=12)
        self.assertAlmostEqual(-1.0 / np.sqrt(12.0), split.angle_xi(), places=12)
        self.assertAlmostEqual(-1.5 / np.sqrt(12.0), split.angle_n(), places=12)
        self.assertLess(split.reassembly, 1e-12)
        self.assertLess(split.product, 1e-12)

        null = VectorField(['1', '1', '0'], frame.immersion.ambient.coordinates)
        self.assertEqual(0, split_field(frame, null, [0.0, 0.0]).eps_Z)

    def test_position_field_on_cone(self):
        frame = cone_frame()
        position = VectorField(['t', 'x', 'y'], frame.immersion.ambient.coordinates)
        u = [1.0, 0.5]
        residuals = components_residual(frame, position, u)
        self.assertAlmostEqual(1.0, residuals['phi'], places=12)
        for key in ['a', 'b', 'c']:
            self.assertLess(residuals[key], 1e-5, key)
        self.assertLess(zperp_residual(frame, position, u), 1e-5)


class TestGaugeCovariance(unittest.TestCase):

    def test_gauge_covariance(self):
        frame = cone_frame()
        gauged = GaugedFrameField(frame, ExpressionField('2 + sin(a2)', frame.immersion.parameters))
        report = gauge_covariance_report(frame, gauged, [1.0, 0.5])
        self.assertAlmostEqual(2.0 + np.sin(0.5), report['gauge'], places=12)
        for key in ['B', 'A_star', 'A_N', 'H', 'tau']:
            self.assertLess(report[key], 1e-5, key)

    def test_tau_under_gauge(self):
        # tau(X) = g(nabla_X N, xi) picks up -X log f under xi' = f xi, N' = N / f
        frame = hyperplane_frame()
        gauged = GaugedFrameField(frame, ExpressionField('exp(v)', frame.immersion.parameters))
        u = [0.2, 0.3]
        e_y = np.array([0.0, 0.0, 1.0])
        self.assertAlmostEqual(0.0, tau_form(frame, u, e_y), places=8)
        self.assertAlmostEqual(-1.0, tau_form(gauged, u, e_y), places=6)
