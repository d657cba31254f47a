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
from hypothesis import given, settings
from hypothesis import strategies as st

from nullframes.analysis.angles import angle_report, constant_angle_test, field_angles, gauge_invariance_check, \
    random_gauges, relative_spread
from nullframes.analysis.quasi_conformal import QCClass, quasi_conformal_fit
from nullframes.analysis.umbilic import UmbilicLabel, umbilic_classifier, umbilic_deviation
from nullframes.analysis.verdict import Verdict
from nullframes.errors import NullFieldError
from nullframes.geometry.ambient import VectorField
from nullframes.shape.calculus import shape_operators
from tests.nullframes.config import cone_frame, hyperplane_frame


class TestAngles(unittest.TestCase):

    def test_field_angles(self):
        frame = cone_frame()
        coordinates = frame.immersion.ambient.coordinates
        sample = frame.at([1.0, 0.5])

        e0 = VectorField(['1', '0', '0'], coordinates, name='e0')
        angles = field_angles(sample, e0)
        self.assertAlmostEqual(1.0, angles['angle_xi'], places=12)
        self.assertAlmostEqual(-0.5, angles['angle_n'], places=12)
        self.assertAlmostEqual(-0.5, angles['q'], places=12)
        self.assertAlmostEqual(0.0, angles['screen_ratio'], places=12)
        self.assertEqual(-1.0, angles['eps'])

        radial = VectorField(['0', 'x', 'y'], coordinates, name='radial')
        angles = field_angles(sample, radial)
        self.assertAlmostEqual(-1.0, angles['angle_xi'], places=12)
        self.assertAlmostEqual(0.5, angles['q'], places=12)
        self.assertAlmostEqual(angles['eps'] - 2 * angles['q'], angles['screen_ratio'], places=12)

        with self.assertRaises(NullFieldError):
            field_angles(sample, VectorField(['1', '1', '0'], coordinates))

    def test_relative_spread(self):
        self.assertEqual((0.0, 0.0, True), relative_spread([], 1e-6, 1e-9))
        self.assertTrue(relative_spread([1.0, 1.0 + 1e-7], 1e-6, 1e-9)[2])
        self.assertFalse(relative_spread([1.0, 1.1], 1e-6, 1e-9)[2])
        self.assertTrue(relative_spread([0.0, 1e-16], 1e-6, 1e-9)[2])

    def test_constant_angle(self):
        frame = cone_frame()
        coordinates = frame.immersion.ambient.coordinates
        for V in [VectorField(['1', '0', '0'], coordinates, name='e0'),
                  VectorField(['0', 'x', 'y'], coordinates, name='radial')]:
            report = angle_report(frame, V)
            self.assertEqual(16, len(report.indices))
            self.assertTrue(report.constant, V.name)
            self.assertTrue(report.agree, V.name)
            result = constant_angle_test(frame, V)
            self.assertEqual(Verdict.passed, result.verdict, V.name)
            self.assertEqual(list(range(16)), result.indices['q'])

        # The angle with a tilted field changes along the cone
        tilted = VectorField(['1', '0.5', '0'], coordinates, name='tilted')
        report = angle_report(frame, tilted)
        self.assertFalse(report.constant)
        self.assertTrue(report.agree)
        self.assertEqual(Verdict.failed, constant_angle_test(frame, tilted).verdict)

    def test_null_samples_excluded(self):
        # g(V, V) = (y - 1/2)^2 vanishes on the column a2 = 0.5 of the 4x4 grid only
        frame = cone_frame()
        V = VectorField(['1', '1', 'y - 0.5'], frame.immersion.ambient.coordinates, name='sometimes_null')
        null_indices = [2, 6, 10, 14]

        report = angle_report(frame, V)
        self.assertEqual(null_indices, [index for index, _ in report.excluded])
        self.assertEqual(12, len(report.indices))

        result = constant_angle_test(frame, V)
        self.assertNotEqual(Verdict.error, result.verdict)
        self.assertEqual(null_indices, [index for index, _ in result.excluded])

        result = gauge_invariance_check(frame, V, count=3, seed=2)
        self.assertEqual(Verdict.passed, result.verdict)
        self.assertEqual(null_indices, [index for index, _ in result.excluded])
        self.assertEqual(12, len(result.residuals['deviation']))

    def test_gauge_invariance(self):
        frame = cone_frame()
        V = VectorField(['1', '0.5', '0'], frame.immersion.ambient.coordinates, name='tilted')
        self.assertEqual(5, len(random_gauges(2, 5, seed=1)))
        result = gauge_invariance_check(frame, V, count=5, seed=1)
        self.assertEqual(Verdict.passed, result.verdict)
        self.assertEqual(5, result.values['gauges'])
        self.assertLess(result.worst('normalized_angle_xi'), 1e-12)
        self.assertLess(result.worst('normalized_q'), 1e-12)

    @given(seed=st.integers(min_value=0, max_value=2 ** 16))
    @settings(max_examples=10, deadline=None)
    def test_gauge_invariance_any_seed(self, seed):
        frame = cone_frame()
        V = VectorField(['1', '0.5', '0'], frame.immersion.ambient.coordinates, name='tilted')
        result = gauge_invariance_check(frame, V, count=2, seed=seed)
        self.assertEqual(Verdict.passed, result.verdict)
        self.assertLess(result.worst('normalized_q'), 1e-12)


class TestShapeClassification(unittest.TestCase):

    def test_umbilic_deviation(self):
        d = umbilic_deviation(np.diag([1.0, 3.0]))
        self.assertEqual(2.0, d['lambda'])
        self.assertAlmostEqual(1.0, d['deviation'], places=14)
        self.assertAlmostEqual(3.0, d['norm'], places=14)
        self.assertEqual({'lambda': 0.0, 'deviation': 0.0, 'norm': 0.0}, umbilic_deviation(np.zeros((0, 0))))

    def test_umbilic_classifier(self):
        grid = [[1.0, 0.5], [2.0, -1.0]]
        result = umbilic_classifier(cone_frame(), grid)
        self.assertEqual(UmbilicLabel.totally_umbilical.value, result.values['label'])
        self.assertEqual(Verdict.passed, result.verdict)
        self.assertEqual(Verdict.failed, umbilic_classifier(cone_frame(), grid, label='totally_geodesic').verdict)

        result = umbilic_classifier(hyperplane_frame(), label='totally_geodesic')
        self.assertEqual(Verdict.passed, result.verdict)
        self.assertEqual('screen_geodesic', result.values['screen'])

    def test_quasi_conformal_fit(self):
        shape = shape_operators(cone_frame(), [1.0, 0.5])
        fit = quasi_conformal_fit(shape)
        self.assertFalse(fit.unique)
        self.assertLess(fit.residual, 1e-6)
        self.assertEqual(QCClass.quasi_conformal, fit.classification)
        self.assertEqual('quasi_conformal', fit.to_dict()['class'])
