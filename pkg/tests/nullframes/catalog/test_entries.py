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

from nullframes.analysis.principal import cpd_test
from nullframes.analysis.verdict import Verdict
from nullframes.catalog.entries import CatalogEntry, dump, entries, entry, variants
from nullframes.cli.runner import ExitCode, run
from nullframes.errors import CatalogError
from nullframes.hypersurfaces.model import Model
from nullframes.utils.config_utils import CHECK_NAMES, RunConfig


class TestCatalog(unittest.TestCase):

    def test_entries(self):
        self.assertEqual(['minkowski_null_hyperplane', 'light_cone_2d', 'grw_transnormal_graph',
                          'minkowski_radial_constant_angle', 'minkowski_rotating_screen', 'catenoid_null_cylinder'],
                         entries())
        self.assertEqual(['3d', '4d'], variants('minkowski_null_hyperplane'))
        self.assertEqual(['de_sitter', 'minkowski', 'anti_de_sitter'], variants('grw_transnormal_graph'))

        item = entry('grw_transnormal_graph')
        self.assertIsInstance(item, CatalogEntry)
        self.assertEqual('de_sitter', item.variant)
        self.assertEqual(0, item.config['seed'])
        self.assertIn('rigging_sqrt2', item.screens)
        self.assertIn('rho_dt', item.fields)

        with self.assertRaises(CatalogError):
            entry('kerr')
        with self.assertRaises(CatalogError):
            entry('light_cone_2d', 'parametric')
        with self.assertRaises(CatalogError):
            variants('kerr')

    def test_configs(self):
        for name in entries():
            for variant in variants(name):
                item = entry(name, variant)
                config = item.to_config()
                self.assertTrue(config.is_valid, f'{name}/{variant}: {config.errors}')
                self.assertEqual(name, config.name)
                self.assertEqual(variant, config.variant)
                for spec in item.expectations:
                    self.assertIn(spec['name'], CHECK_NAMES)
                    self.assertIn(spec['expect'], ['pass', 'fail', 'inapplicable'])

                # A dumped entry reloads to the same configuration
                document = dump(item)
                self.assertEqual(config, RunConfig.from_dict(document))

    def test_light_cone_notes(self):
        notes = entry('light_cone_2d').config['notes']
        self.assertIn('printed_variant', notes)
        self.assertEqual('1/2', notes['printed_variant']['N_half'][0])


class TestCatalogExpectations(unittest.TestCase):
    """ Every shipped entry reaches the verdict recorded for each of its checks. """

    def assert_expectations(self, name: str, variant: str):
        report = run(entry(name, variant).to_config())
        for outcome in report.outcomes:
            label = f"{name}/{variant}: {outcome.spec['name']} on {outcome.spec.get('screen')}/" \
                    f"{outcome.spec.get('field')}: {outcome.result.verdict.value} {outcome.result.message}"
            self.assertNotEqual(Verdict.error, outcome.result.verdict, label)
            self.assertTrue(outcome.met, label)
        self.assertEqual(ExitCode.ok, report.exit_code)
        return report

    def test_minkowski_null_hyperplane(self):
        for variant in variants('minkowski_null_hyperplane'):
            self.assert_expectations('minkowski_null_hyperplane', variant)

    def test_light_cone(self):
        report = self.assert_expectations('light_cone_2d', 'graph')
        umbilic = report.find('umbilic')[0].result
        self.assertEqual('totally_umbilical', umbilic.values['label'])

    def test_grw_transnormal_graph(self):
        for variant in variants('grw_transnormal_graph'):
            self.assert_expectations('grw_transnormal_graph', variant)

    def test_radial_constant_angle(self):
        self.assert_expectations('minkowski_radial_constant_angle', 'default')

    def test_rotating_screen(self):
        self.assert_expectations('minkowski_rotating_screen', 'default')

    def test_catenoid(self):
        self.assert_expectations('catenoid_null_cylinder', 'default')

    def test_grw_sheared_principal_value(self):
        # rho d/dt = cosh(t) d/dt has phi = sinh(t), which varies over the sheared screen while q stays -5/8
        model = Model(entry('grw_transnormal_graph', 'de_sitter').to_config())
        result = cpd_test(model.frame('sheared'), model.field('rho_dt'))
        self.assertEqual(Verdict.passed, result.verdict, result.message)
        self.assertTrue(result.values['closed_conformal'])
        self.assertTrue(result.values['constant_angle'])
        self.assertEqual(72, len(result.residuals['lambda_error']))

        points = model.immersion.grid_points()
        phis = []
        for report in result.values['principal']:
            t = points[report['index']][0]
            phis.append(report['phi'])
            self.assertEqual(-1, report['eps'])
            self.assertAlmostEqual(-0.625, report['q'], places=9)
            self.assertAlmostEqual(math.sinh(t), report['phi'], places=6)
            self.assertAlmostEqual(-1.25 * math.sinh(t), report['predicted'], places=6)
            self.assertAlmostEqual(-1.25 * math.sinh(t), report['lambda'], delta=1e-5)
        self.assertGreater(max(phis) - min(phis), 0.5)
