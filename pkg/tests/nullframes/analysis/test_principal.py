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

from nullframes.analysis.principal import cpd_test, geodesic_direction_check, lemma_cpd_equivalence, \
    orthogonal_directions
from nullframes.analysis.verdict import Verdict
from nullframes.geometry.ambient import VectorField
from nullframes.hypersurfaces.model import Model
from tests.nullframes.config import cone_frame, load_fixture_config


class TestPrincipal(unittest.TestCase):

    def setUp(self) -> None:
        self.model = Model(load_fixture_config('null_hyperplane.json'))
        self.coordinates = self.model.ambient.coordinates

    def test_cpd_tilted_screen(self):
        frame = self.model.frame('tilted')
        result = cpd_test(frame, self.model.field('e0'))
        self.assertEqual('cpd', result.name)
        self.assertEqual(Verdict.passed, result.verdict, result.message)
        self.assertTrue(result.values['closed_conformal'])
        self.assertTrue(result.values['criterion4_vacuous'])
        self.assertFalse(result.values['constant_angle'])

        # Z* vanishes where sin(u) + v = 0, which on the 5x5 grid is the centre only
        self.assertEqual([12], [index for index, _ in result.excluded])
        self.assertEqual(24, len(result.values['principal']))
        self.assertNotIn(12, result.indices['eigen'])
        for report in result.values['principal']:
            self.assertAlmostEqual(1.0, abs(report['T'][0]), places=12)
            self.assertEqual(0.0, report['phi'])
            self.assertEqual(0.0, report['predicted'])

    def test_cpd_star_on_cone(self):
        frame = cone_frame()
        tilted = VectorField(['1', '0.5', '0'], frame.immersion.ambient.coordinates, name='tilted')
        result = cpd_test(frame, tilted, operator='star')
        self.assertEqual('cpd_star', result.name)
        self.assertEqual(Verdict.passed, result.verdict, result.message)
        self.assertEqual('star', result.values['operator'])
        self.assertNotIn('criterion4', result.residuals)
        self.assertNotIn('lambda_error', result.residuals)
        self.assertEqual(16, len(result.residuals['eigen']))
        for report in result.values['principal']:
            self.assertIsNone(report['phi'])
            self.assertIsNone(report['predicted'])

    def test_cpd_inapplicable(self):
        # The position field is tangent to the light cone generators, so its screen part vanishes
        frame = cone_frame()
        position = VectorField(['t', 'x', 'y'], frame.immersion.ambient.coordinates, name='position')
        result = cpd_test(frame, position)
        self.assertEqual(Verdict.inapplicable, result.verdict)
        self.assertEqual('screen part of the field vanishes at every sample', result.message)
        self.assertEqual(16, len(result.excluded))

        with self.assertRaises(ValueError):
            cpd_test(frame, position, operator='A_N')

    def test_geodesic_direction(self):
        # Z* runs along the circles of the cone, which are screen geodesics
        frame = cone_frame()
        coordinates = frame.immersion.ambient.coordinates
        tilted = VectorField(['1', '0.5', '0'], coordinates, name='tilted')
        result = geodesic_direction_check(frame, tilted)
        self.assertEqual('geodesic', result.name)
        self.assertEqual(Verdict.passed, result.verdict, result.message)
        self.assertEqual(16, len(result.residuals['nabla_TT']))

        position = VectorField(['t', 'x', 'y'], coordinates, name='position')
        result = geodesic_direction_check(frame, position)
        self.assertEqual(Verdict.inapplicable, result.verdict)
        self.assertEqual('cpd test did not pass: inapplicable', result.message)

    def test_orthogonal_directions(self):
        sample = self.model.frame('rigging_e0').at([0.0, 0.5])
        self.assertEqual([], orthogonal_directions(sample, np.array([2.0])))

    def test_lemma_cpd(self):
        frame = self.model.frame('tilted')
        shear = VectorField(['x', '0', '0'], self.coordinates, name='shear')
        result = lemma_cpd_equivalence(frame, shear)
        self.assertEqual(Verdict.inapplicable, result.verdict)
        self.assertEqual("field 'shear' is not closed conformal", result.message)

        result = lemma_cpd_equivalence(frame, self.model.field('e0'))
        self.assertEqual(Verdict.passed, result.verdict, result.message)
        self.assertEqual(24, len(result.values['criteria']))
        self.assertEqual(0.0, result.worst('disagreement'))
