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

import tests.fixtures
from nullframes.catalog.ambients import ambient
from nullframes.geometry.ambient import VectorField
from nullframes.hypersurfaces.frames import RiggingFrameField
from nullframes.hypersurfaces.immersion import NullImmersion
from nullframes.utils.config_utils import RunConfig


def test_fixtures_path() -> str:
    """ Get the path to the test fixtures folder.

    :return: the path.
    """

    file_path = pathlib.Path(tests.fixtures.__file__).resolve()
    path = pathlib.Path(*file_path.parts[:-1])
    return str(path.resolve())


def fixture_config_path(name: str) -> str:
    return os.path.join(test_fixtures_path(), 'nullframes', name)


def load_fixture_dict(name: str) -> dict:
    with open(fixture_config_path(name)) as f:
        return json.load(f)


def load_fixture_config(name: str) -> RunConfig:
    return RunConfig.from_dict(load_fixture_dict(name))


def cone_frame() -> RiggingFrameField:
    """ The future light cone t = sqrt(x^2 + y^2) of Minkowski 3-space as a graph, framed by the rigging e0. """

    M = ambient('minkowski3')
    cone = NullImmersion(M, ['a1', 'a2'], ['sqrt(a1^2 + a2^2)', 'a1', 'a2'], [[0.5, 3.0], [-1.5, 1.5]], [4, 4],
                         level_set='-t^2 + x^2 + y^2')
    return RiggingFrameField(cone, VectorField(['1', '0', '0'], M.coordinates, name='e0'), name='rigging_e0')


def hyperplane_frame() -> RiggingFrameField:
    """ The null hyperplane t = x of Minkowski 3-space framed by the rigging e0. """

    M = ambient('minkowski3')
    plane = NullImmersion(M, ['u', 'v'], ['u', 'u', 'v'], [[-1, 1], [-1, 1]], [3, 3], level_set='t - x')
    return RiggingFrameField(plane, VectorField(['1', '0', '0'], M.coordinates, name='e0'), name='rigging_e0')
