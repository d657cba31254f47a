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
import unittest

import numpy as np
import pandas as pd
from click.testing import CliRunner

from nullframes.analysis.verdict import CheckResult, Verdict
from nullframes.cli.runner import CheckOutcome, Report, run
from nullframes.errors import ExportError
from nullframes.hypersurfaces.model import Model
from nullframes.reports.plotdata import column_contract, export_plotdata, frame_columns, residual_columns
from tests.nullframes.config import load_fixture_config


def sparse_report() -> Report:
    result = CheckResult('shape', Verdict.passed)
    for index, value in [(0, 0.5), (2, 0.25)]:
        result.point(index)
        result.add('duality', value)
    result.excluded.append((1, 'no frame'))
    return Report('sparse', None, [CheckOutcome({'name': 'shape', 'screen': 's'}, result)], dict())


class TestPlotData(unittest.TestCase):

    def setUp(self) -> None:
        self.config = load_fixture_config('null_hyperplane.json')

    def test_column_contract(self):
        contract = column_contract()
        self.assertEqual('%.17g', contract['float_format'])
        self.assertIn('xi_<coordinate>', contract['columns'])

    def test_residual_columns(self):
        df = residual_columns(sparse_report(), ['shape'], 3)
        self.assertEqual(['res_shape_duality'], list(df.columns))
        values = df['res_shape_duality'].to_numpy()
        self.assertEqual(0.5, values[0])
        self.assertTrue(np.isnan(values[1]))
        self.assertEqual(0.25, values[2])

        df = residual_columns(sparse_report(), ['codazzi'], 3)
        self.assertEqual(0, len(df.columns))

    def test_frame_columns(self):
        model = Model(self.config)
        df = frame_columns(model, 'rigging_e0')
        self.assertEqual(25, len(df))
        self.assertEqual(['u_u', 'u_v', 'x_t', 'x_x', 'x_y', 'xi_t', 'xi_x', 'xi_y', 'N_t', 'N_x', 'N_y',
                          'e0_t', 'e0_x', 'e0_y'], list(df.columns))

        # t = x with xi normalized against the reference -e0 and N from the rigging e0
        np.testing.assert_allclose(df['x_t'], df['u_u'])
        np.testing.assert_allclose(df['xi_t'], 1.0, atol=1e-9)
        np.testing.assert_allclose(df['xi_x'], 1.0, atol=1e-9)
        np.testing.assert_allclose(df['N_t'], -0.5, atol=1e-9)
        np.testing.assert_allclose(df['N_x'], 0.5, atol=1e-9)
        np.testing.assert_allclose(np.abs(df['e0_y']), 1.0, atol=1e-9)

    def test_export_plotdata(self):
        model = Model(self.config)
        report = run(self.config, ['constant_angle'])
        runner = CliRunner()
        with runner.isolated_filesystem():
            columns = export_plotdata(report, ['frame', 'constant_angle'], 'data.csv', model=model)
            self.assertTrue(os.path.isfile('data.csv.columns.json'))
            df = pd.read_csv('data.csv')
            self.assertEqual(columns, list(df.columns))
            self.assertEqual(25, len(df))
            self.assertEqual(list(range(25)), df['index'].tolist())

            # The second constant angle check gets the position suffix
            self.assertIn('res_constant_angle_identity', columns)
            self.assertIn('res_constant_angle_identity_1', columns)

            with open('data.csv.columns.json') as f:
                sidecar = json.load(f)
            self.assertEqual('1.0', sidecar['version'])
            self.assertEqual(columns, sidecar['columns'])

            # Residual series only, sized by the largest grid index
            columns = export_plotdata(sparse_report(), 'all', 'sparse.csv')
            self.assertEqual(['index', 'res_shape_duality'], columns)
            df = pd.read_csv('sparse.csv')
            self.assertEqual(3, len(df))
            self.assertTrue(np.isnan(df['res_shape_duality'][1]))

            # An empty report writes the header only
            columns = export_plotdata(Report('empty', None, [], dict()), 'all', 'empty.csv')
            self.assertEqual(['index'], columns)
            with open('empty.csv') as f:
                self.assertEqual('index', f.read().strip())

    def test_export_errors(self):
        report = sparse_report()
        runner = CliRunner()
        with runner.isolated_filesystem():
            with self.assertRaises(ExportError):
                export_plotdata(report, ['curvature'], 'data.csv')
            with self.assertRaises(ExportError):
                export_plotdata(report, 'frame', 'data.csv')
            self.assertFalse(os.path.isfile('data.csv'))
