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

import copy
from typing import Dict, Sequence

import numpy as np

from nullframes.errors import CatalogError
from nullframes.geometry.ambient import AmbientManifold
from nullframes.geometry.expression import ExpressionField
from nullframes.hypersurfaces.model import metric_components

FLAT_FIBER = {'coordinates': ['x1', 'x2', 'x3'], 'metric': {'g00': '1', 'g11': '1', 'g22': '1'}}

# Round S^3 as sech^2 dsigma^2 + tanh^2 dp^2 + sech^2 dq^2: the level sets of sigma are Clifford tori and
# |grad sigma| = cosh(sigma).
SPHERE_FIBER = {'coordinates': ['sigma', 'p', 'q'],
                'metric': {'g00': '1/cosh(sigma)^2', 'g11': 'tanh(sigma)^2', 'g22': '1/cosh(sigma)^2'}}

# Hyperbolic H^3 as sec^2 dr^2 + tan^2 dp^2 + sec^2 dq^2, so that |grad r| = cos(r).
HYPERBOLIC_FIBER = {'coordinates': ['r', 'p', 'q'],
                    'metric': {'g00': '1/cos(r)^2', 'g11': 'tan(r)^2', 'g22': '1/cos(r)^2'}}

TRANSNORMAL = {
    '1': {'interval': [-10.0, 10.0], 'fiber': FLAT_FIBER, 'f': 'x1'},
    't': {'interval': [0.05, 20.0], 'fiber': FLAT_FIBER, 'f': 'exp(x1)'},
    'cosh(t)': {'interval': [-5.0, 5.0], 'fiber': SPHERE_FIBER, 'f': 'sigma'},
    'cos(t)': {'interval': [-1.47, 1.47], 'fiber': HYPERBOLIC_FIBER, 'f': 'r'}
}


def warp_key(warp: str) -> str:
    key = warp.replace(' ', '')
    if key not in TRANSNORMAL:
        raise CatalogError(f'no transnormal function is shipped for the warp {warp!r}, '
                           f'choose one of {sorted(TRANSNORMAL)}')
    return key


def transnormal_fiber(warp: str) -> Dict:
    """ The fiber chart on which the shipped transnormal function of a warp is defined.

    :param warp: the warping function over the time coordinate t.
    :return: the fiber section of a grw config, a copy.
    """

    return copy.deepcopy(TRANSNORMAL[warp_key(warp)]['fiber'])


def transnormal_interval(warp: str) -> Sequence[float]:
    return list(TRANSNORMAL[warp_key(warp)]['interval'])


def transnormal_defaults(warp: str) -> ExpressionField:
    """ A function f on the fiber with |grad f| = rho(f), whose graph t = f(x) is a null hypersurface.

    :param warp: one of '1', 't', 'cosh(t)' and 'cos(t)'.
    :return: f over the fiber coordinates.
    """

    entry = TRANSNORMAL[warp_key(warp)]
    return ExpressionField(entry['f'], entry['fiber']['coordinates'])


def transnormal_residual(warp: str, f: ExpressionField, fiber: Dict, points: Sequence[Sequence[float]],
                         time: str = 't') -> float:
    """ max ||grad f| - rho(f)| over fiber points, with the gradient taken in the fiber metric.

    :param warp: the warping function over the time coordinate.
    :param f: the candidate function over the fiber coordinates.
    :param fiber: the fiber section, coordinates and metric.
    :param points: fiber points.
    :param time: the name of the time coordinate in the warp.
    :return: the residual, 0 for no points.
    """

    chart = AmbientManifold(fiber['coordinates'], metric_components(fiber['metric']), name='fiber')
    rho = ExpressionField(warp, [time])
    residual = 0.0
    for x in points:
        df = f.gradient(x)
        norm = float(np.sqrt(df @ chart.inverse_metric(x) @ df))
        residual = max(residual, abs(norm - rho.evaluate([f.evaluate(x)])))
    return residual
