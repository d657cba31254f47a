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

from typing import Dict, List

from nullframes.catalog.transnormal import transnormal_fiber, transnormal_interval
from nullframes.errors import CatalogError
from nullframes.geometry.ambient import AmbientManifold
from nullframes.hypersurfaces.model import build_ambient

MINKOWSKI_COORDINATES = ['t', 'x', 'y', 'z']


def minkowski(dim: int) -> Dict:
    """ The ambient section of Minkowski space of dimension 3 or 4, coordinates (t, x, y[, z]).

    :param dim: the dimension.
    :return: the ambient section of a config.
    """

    if dim not in (3, 4):
        raise CatalogError(f'Minkowski space is shipped in dimensions 3 and 4, not {dim}')
    metric = {'g00': '-1'}
    for i in range(1, dim):
        metric[f'g{i}{i}'] = '1'
    return {'coordinates': MINKOWSKI_COORDINATES[:dim], 'metric': metric, 'check_points': [[0.0] * dim]}


def grw(warp: str, check_points: List[List[float]]) -> Dict:
    """ The ambient section of the GRW spacetime -I x_warp F over the fiber carrying the shipped transnormal function.

    :param warp: the warping function over t.
    :param check_points: points where the signature is verified.
    :return: the ambient section of a config.
    """

    return {'grw': {'time': 't', 'warp': warp, 'interval': transnormal_interval(warp),
                    'fiber': transnormal_fiber(warp)},
            'check_points': check_points}


def de_sitter() -> Dict:
    return grw('cosh(t)', [[0.5, 0.5, 0.5, 0.5]])


def anti_de_sitter() -> Dict:
    return grw('cos(t)', [[0.5, 0.6, 0.5, 0.5]])


AMBIENTS = {
    'minkowski3': lambda: minkowski(3),
    'minkowski4': lambda: minkowski(4),
    'de_sitter': de_sitter,
    'anti_de_sitter': anti_de_sitter
}


def ambient(name: str) -> AmbientManifold:
    """ Build one of the shipped ambient manifolds.

    :param name: minkowski3, minkowski4, de_sitter or anti_de_sitter.
    :return: the AmbientManifold.
    """

    if name not in AMBIENTS:
        raise CatalogError(f'unknown ambient {name!r}, choose one of {sorted(AMBIENTS)}')
    manifold, _ = build_ambient(AMBIENTS[name](), name)
    return manifold
