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

from nullframes.analysis.quasi_conformal import cc_screen_theorem_check, quasi_conformal_check, zero_projection_check
from nullframes.analysis.umbilic import totally_umbilical_corollary
from nullframes.analysis.verdict import Verdict
from nullframes.geometry.ambient import VectorField
from tests.nullframes.config import cone_frame


class TestQuasiConformal(unittest.TestCase):

    def setUp(self) -> None:
        self.frame = cone_frame()
        coordinates = self.frame.immersion.ambient.coordinates
        self.e0 = VectorField(['1', '0', '0'], coordinates, name='e0')
        self.position = VectorField(['t', 'x', 'y'], coordinates, name='position')
        self.shear = VectorField(['x', '0', '0'], coordinates, name='shear')

    def test_quasi_conformal_check(self):
        # On the cone A_N = A*_xi / 2, a pair that fits at every point
        result = quasi_conformal_check(self.frame)
        self.assertEqual(Verdict.passed, result.verdict, result.message)
        self.assertEqual(16, len(result.values['fits']))

    def test_zero_projection(self):
        # e0 = N - xi / 2 has no screen part, so (phi, psi) = (1/2, 0)
        result = zero_projection_check(self.frame, self.e0)
        self.assertEqual(Verdict.passed, result.verdict, result.message)
        self.assertEqual(16, len(result.residuals['substitution']))

        # The position field is the generator itself
        result = zero_projection_check(self.frame, self.position)
        self.assertEqual(Verdict.inapplicable, result.verdict)
        self.assertIn('is tangent', result.message)

        result = zero_projection_check(self.frame, self.shear)
        self.assertEqual(Verdict.inapplicable, result.verdict)

    def test_cc_screen_theorem(self):
        result = cc_screen_theorem_check(self.frame.immersion, self.e0)
        self.assertEqual(Verdict.passed, result.verdict, result.message)
        for pair in result.values['pairs']:
            self.assertAlmostEqual(2.0, pair['predicted_phi'], places=8)
            self.assertAlmostEqual(0.0, pair['predicted_psi'], places=8)

        result = cc_screen_theorem_check(self.frame.immersion, self.shear)
        self.assertEqual(Verdict.inapplicable, result.verdict)
        self.assertEqual("field 'shear' is not closed conformal", result.message)

    def test_totally_umbilical_corollary(self):
        # P = -r xi, so the hypersurface is totally umbilical with lambda = -phi / g(P, N) = 1 / r
        result = totally_umbilical_corollary(self.frame, self.position)
        self.assertEqual(Verdict.passed, result.verdict, result.message)
        self.assertEqual(['radical'], result.values['cases'])
        radii = [np.linalg.norm(u) for u in self.frame.immersion.grid_points()]
        np.testing.assert_allclose(1.0 / np.array(radii), result.values['lambda'], rtol=1e-6)

        # e0 has both normal components
        result = totally_umbilical_corollary(self.frame, self.e0)
        self.assertEqual(Verdict.inapplicable, result.verdict)
        self.assertIn('has both normal components', result.message)
