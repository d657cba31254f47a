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

import hashlib
import json
from enum import Enum
from typing import Any, Dict, List

import jsonlines
import numpy as np


def serialize_numpy(obj: Any) -> Any:
    """ Convert numpy scalars and arrays, and enums, into types supported by JSON.

    :param obj: the object json could not serialize.
    :return: a serializable replacement.
    """

    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Enum):
        return obj.value
    raise TypeError(f'Object of type {type(obj).__name__} is not JSON serializable')


def canonical_dumps(obj: Any) -> str:
    """ Dump to JSON with sorted keys and a fixed indent, so that equal objects give identical text. """

    return json.dumps(obj, default=serialize_numpy, sort_keys=True, indent=2)


def sha256_of(obj: Any) -> str:
    return hashlib.sha256(json.dumps(obj, default=serialize_numpy, sort_keys=True).encode('utf-8')).hexdigest()


def write_json_lines(items: List[Dict], path: str) -> None:
    """ Write one JSON record per line.

    :param items: the records.
    :param path: the output path.
    :return: None.
    """

    with open(path, 'w') as f:
        with jsonlines.Writer(f, dumps=lambda obj: json.dumps(obj, default=serialize_numpy, sort_keys=True)) as writer:
            writer.write_all(items)
