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

import json
import os
import pathlib
import unittest

from click.testing import CliRunner

import nullframes.schema
from nullframes.utils.config_utils import RunConfig, export_schema, schema_path, variables_for
from nullframes.utils.tolerances import Tolerances
from tests.nullframes.config import fixture_config_path, load_fixture_dict


class TestConfigUtils(unittest.TestCase):

    def test_schema_path(self):
        expected = pathlib.Path(nullframes.schema.__file__).resolve()
        expected = str(pathlib.Path(*expected.parts[:-1], 'run_config.json').resolve())
        actual = schema_path('run_config.json')
        self.assertEqual(expected, actual)
        self.assertTrue(os.path.exists(actual))
        self.assertTrue(os.path.exists(schema_path('plotdata_columns.json')))

    def test_export_schema(self):
        runner = CliRunner()
        with runner.isolated_filesystem():
            path = export_schema('schema.json')
            with open(path) as f:
                schema = json.load(f)
            self.assertEqual(sorted(RunConfig.schema), sorted(schema))
            self.assertIn('allowed', schema['checks']['schema']['schema']['name'])

    def test_variables_for(self):
        document = load_fixture_dict('null_hyperplane.json')
        self.assertEqual(['t', 'x', 'y'], variables_for(document, 'ambient'))
        self.assertEqual(['u', 'v'], variables_for(document, 'parameters'))
        self.assertEqual(['u', 'v', 't', 'x', 'y'], variables_for(document, 'any'))

        grw = {'ambient': {'grw': {'time': 't', 'fiber': {'coordinates': ['x1', 'x2']}}}}
        self.assertEqual(['t', 'x1', 'x2'], variables_for(grw, 'ambient'))
        self.assertEqual(['x1', 'x2'], variables_for(grw, 'fiber'))
        self.assertEqual(['t'], variables_for(grw, 'time'))


class TestRunConfig(unittest.TestCase):

    def test_load(self):
        config = RunConfig.load(fixture_config_path('null_hyperplane.json'))
        self.assertTrue(config.is_valid)
        self.assertEqual('null_hyperplane', config.name)
        self.assertEqual(7, config.seed)
        self.assertEqual(Tolerances(tol_fd=1e-5), config.tolerances)
        self.assertEqual(['rigging_e0', 'tilted', 'gauged'], list(config.screens))
        self.assertEqual(6, len(config.checks))
        self.assertIsNone(config.variant)

        # Missing and malformed files
        self.assertIsNone(RunConfig.load('missing.json'))
        runner = CliRunner()
        with runner.isolated_filesystem():
            with open('broken.json', 'w') as f:
                f.write('{"name": ')
            self.assertIsNone(RunConfig.load('broken.json'))

    def test_invalid(self):
        config = RunConfig.load(fixture_config_path('invalid.json'))
        self.assertFalse(config.is_valid)
        errors = config.errors
        self.assertIn('ambient', errors)
        self.assertIn('immersion', errors)
        self.assertIn('screens', errors)
        self.assertIn('checks', errors)

        metric_errors = json.dumps(errors['ambient'])
        self.assertIn('unknown identifier', metric_errors)
        self.assertIn('g10', metric_errors)
        immersion_errors = json.dumps(errors['immersion'])
        self.assertIn('expected 3 entries', immersion_errors)
        self.assertIn('min value is 1', immersion_errors)
        self.assertIn("unknown field 'missing'", json.dumps(errors['screens']))

    def test_strict(self):
        path = fixture_config_path('unknown_keys.json')
        self.assertFalse(RunConfig.load(path).is_valid)
        self.assertIn('comment', RunConfig.load(path).errors)
        self.assertTrue(RunConfig.load(path, strict=False).is_valid)

    def test_both_ambients(self):
        document = load_fixture_dict('null_hyperplane.json')
        document['ambient']['grw'] = {'time': 't', 'warp': '1', 'interval': [-1, 1],
                                      'fiber': {'coordinates': ['x1', 'x2'], 'metric': {'g00': '1', 'g11': '1'}}}
        config = RunConfig.from_dict(document)
        self.assertFalse(config.is_valid)
        self.assertIn('give either coordinates and metric, or grw', json.dumps(config.errors))

    def test_save_load(self):
        runner = CliRunner()
        with runner.isolated_filesystem():
            config = RunConfig.make_default()
            self.assertTrue(config.is_valid)
            config.save('config.json')
            loaded = RunConfig.load('config.json')
            self.assertTrue(loaded.is_valid)
            self.assertEqual(config, loaded)

            loaded.seed = 3
            self.assertNotEqual(config, loaded)

    def test_to_dict(self):
        config = RunConfig.from_dict(load_fixture_dict('null_hyperplane.json'))
        dict_ = config.to_dict()
        self.assertEqual(RunConfig.from_dict(dict_), config)
        self.assertEqual(Tolerances(tol_fd=1e-5).to_dict(), dict_['tolerances'])
        self.assertNotIn('variant', dict_)


class TestTolerances(unittest.TestCase):

    def test_replace(self):
        tolerances = Tolerances()
        self.assertEqual(Tolerances.DEFAULTS, tolerances.to_dict())
        replaced = tolerances.replace(tol_exact=1e-6, tol_fd=None)
        self.assertEqual(1e-6, replaced.tol_exact)
        self.assertEqual(1e-5, replaced.tol_fd)
        self.assertEqual(1e-9, tolerances.tol_exact)
        self.assertEqual(Tolerances(fd_step=1e-3), Tolerances.from_dict({'fd_step': '1e-3', 'other': 1}))
