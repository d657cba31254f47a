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
from unittest.mock import patch

import numpy as np

from nullframes.analysis.theorems import cmc_cc_check, estimate_spaceform, flat_screen_check, screen_gradient_check, \
    sectional_curvature
from nullframes.analysis.verdict import Verdict
from nullframes.catalog.ambients import ambient
from nullframes.catalog.entries import entry
from nullframes.geometry.ambient import VectorField
from nullframes.hypersurfaces.model import Model
from nullframes.shape.calculus import shape_operators
from tests.nullframes.config import cone_frame, load_fixture_config


class TestTheorems(unittest.TestCase):

    def setUp(self) -> None:
        self.model = Model(load_fixture_config('null_hyperplane.json'))
        self.coordinates = self.model.ambient.coordinates

    def test_sectional_curvature(self):
        M = ambient('minkowski3')
        X, Y = np.array([0.0, 1.0, 0.0]), np.array([0.5, 0.0, 1.0])
        self.assertAlmostEqual(0.0, sectional_curvature(M, [0.0, 0.0, 0.0], X, Y), places=12)

        M = ambient('de_sitter')
        p = [0.5, 0.5, 0.5, 0.5]
        X, Y = np.array([0.0, 1.0, 0.0, 0.0]), np.array([0.0, 0.0, 0.0, 1.0])
        self.assertAlmostEqual(1.0, sectional_curvature(M, p, X, Y), places=6)

    def test_estimate_spaceform(self):
        for name, point, expected in [('minkowski4', [0.0, 0.3, 0.2, 0.1], 0.0),
                                      ('de_sitter', [0.5, 0.5, 0.5, 0.5], 1.0),
                                      ('anti_de_sitter', [0.5, 0.6, 0.5, 0.5], -1.0)]:
            c, residual = estimate_spaceform(ambient(name), [point], seed=2, triples=30)
            self.assertAlmostEqual(expected, c, places=6, msg=name)
            self.assertLess(residual, 1e-6, name)

    def test_screen_gradient(self):
        # |P| = |v| on t = x, so the gradient is sign(v) along the screen and v = 0 is null
        frame = self.model.frame('rigging_e0')
        position = VectorField(['t', 'x', 'y'], self.coordinates, name='position')
        result = screen_gradient_check(frame, position)
        self.assertEqual(Verdict.passed, result.verdict, result.message)
        self.assertEqual([2, 7, 12, 17, 22], [index for index, _ in result.excluded])
        self.assertEqual(20, len(result.residuals['gradient']))

        shear = VectorField(['x', '0', '0'], self.coordinates, name='shear')
        result = screen_gradient_check(frame, shear)
        self.assertEqual(Verdict.inapplicable, result.verdict)
        self.assertIn('not closed conformal', result.message)

    def test_flat_screen_hypotheses(self):
        result = flat_screen_check(self.model.frame('rigging_e0'), self.model.field('e0'))
        self.assertEqual(Verdict.inapplicable, result.verdict)
        self.assertEqual('screen dimension is not 2', result.message)

    def test_cmc_hypotheses(self):
        frame = cone_frame()
        result = cmc_cc_check(frame, VectorField(['1', '0', '0'], frame.immersion.ambient.coordinates))
        self.assertEqual(Verdict.inapplicable, result.verdict)
        self.assertEqual('hypersurface is not three dimensional', result.message)

    def test_flat_screen_rotating(self):
        model = Model(entry('minkowski_rotating_screen').to_config())
        result = flat_screen_check(model.frame('rotating'), model.field('e0'))
        self.assertEqual('flat_screen', result.name)
        self.assertEqual(Verdict.passed, result.verdict, result.message)
        for key in ['nabla_TT', 'nabla_WT', 'nabla_TW', 'nabla_WW']:
            self.assertEqual(125 - len(result.excluded), len(result.residuals[key]), key)

    def test_cmc_catenoid_leaf(self):
        model = Model(entry('catenoid_null_cylinder').to_config())
        frame = model.frame('rigging_e0')
        with patch('nullframes.analysis.theorems.shape_operators', wraps=shape_operators) as counted:
            result = cmc_cc_check(frame, model.field('e_z'), seed=3)
        self.assertEqual('cmc', result.name)
        self.assertEqual(Verdict.passed, result.verdict, result.message)
        self.assertAlmostEqual(0.0, result.values['curvature'], places=6)
        for key in ['W_kstar', 'geodesic_T', 'W_f', 'T_f', 'W_f_proof', 'T_f_proof']:
            self.assertEqual(64 - len(result.excluded), len(result.residuals[key]), key)

        # One shape computation per sample; the k* stencil does not rebuild the shape operators
        self.assertEqual(64, counted.call_count)
