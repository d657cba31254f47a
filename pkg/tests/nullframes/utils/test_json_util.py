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
import unittest

import jsonlines
import numpy as np
from click.testing import CliRunner

from nullframes.analysis.verdict import Verdict
from nullframes.utils.json_util import canonical_dumps, serialize_numpy, sha256_of, write_json_lines


class TestJsonUtil(unittest.TestCase):

    def test_serialize_numpy(self):
        self.assertEqual(2.5, serialize_numpy(np.float64(2.5)))
        self.assertEqual(3, serialize_numpy(np.int64(3)))
        self.assertEqual([[1.0, 0.0], [0.0, 1.0]], serialize_numpy(np.eye(2)))
        self.assertEqual('fail', serialize_numpy(Verdict.failed))
        with self.assertRaises(TypeError):
            serialize_numpy(object())

    def test_canonical_dumps(self):
        a = canonical_dumps({'b': np.float64(1.0), 'a': [np.int32(1)]})
        b = canonical_dumps({'a': [1], 'b': 1.0})
        self.assertEqual(a, b)
        self.assertEqual({'a': [1], 'b': 1.0}, json.loads(a))
        self.assertEqual(sha256_of({'x': 1, 'y': [1, 2]}), sha256_of({'y': [1, 2], 'x': 1}))
        self.assertNotEqual(sha256_of({'x': 1}), sha256_of({'x': 2}))
        self.assertEqual(64, len(sha256_of({})))

    def test_write_json_lines(self):
        items = [{'name': 'shape', 'value': np.float64(1e-12)}, {'name': 'cpd', 'value': None}]
        runner = CliRunner()
        with runner.isolated_filesystem():
            write_json_lines(items, 'samples.jsonl')
            with jsonlines.open('samples.jsonl') as reader:
                records = list(reader)
            self.assertEqual([{'name': 'shape', 'value': 1e-12}, {'name': 'cpd', 'value': None}], records)
