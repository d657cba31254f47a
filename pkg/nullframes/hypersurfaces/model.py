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

import logging
from typing import Dict, List, Tuple, Union

from nullframes.errors import ConfigError, UnknownIdentifierError
from nullframes.geometry.ambient import AmbientManifold, GRWSpec, VectorField, assemble_grw
from nullframes.geometry.expression import ExpressionField
from nullframes.hypersurfaces.frames import CCFrameField, ExplicitFrameField, GaugedFrameField, NullFrameField, \
    RiggingFrameField
from nullframes.hypersurfaces.immersion import NullImmersion
from nullframes.utils.config_utils import METRIC_KEY, RunConfig
from nullframes.utils.tolerances import Tolerances


def metric_components(metric: Dict[str, str]) -> Dict[Tuple[int, int], str]:
    components = dict()
    for key, value in metric.items():
        match = METRIC_KEY.match(key)
        components[(int(match.group(1)), int(match.group(2)))] = value
    return components


def build_ambient(spec: Dict, name: str = '') -> Tuple[AmbientManifold, Union[GRWSpec, None]]:
    """ Build the ambient manifold of a configuration.

    :param spec: the ambient section.
    :param name: a label.
    :return: the manifold and, for warped products, the GRW data.
    """

    check_points = spec.get('check_points', [])
    if 'grw' in spec:
        grw = spec['grw']
        fiber = grw['fiber']
        grw_spec = GRWSpec(grw['time'], grw['warp'], tuple(grw['interval']), fiber['coordinates'],
                           metric_components(fiber['metric']), name=name)
        return assemble_grw(grw_spec, check_points), grw_spec
    M = AmbientManifold(spec['coordinates'], metric_components(spec['metric']), check_points, name=name)
    M.check_signature()
    return M, None


class Model:
    """ The geometric objects described by a RunConfig: ambient manifold, immersion, fields and frame fields. """

    def __init__(self, config: RunConfig, tolerances: Union[Tolerances, None] = None):
        """ Build a Model.

        :param config: a valid RunConfig.
        :param tolerances: overrides the tolerances of the config.
        """

        if not config.is_valid:
            raise ConfigError(f'configuration {config.name!r} is invalid', config.errors)
        self.config = config
        self.name = config.name
        self.tolerances = tolerances if tolerances is not None else config.tolerances
        self.ambient, self.grw = build_ambient(config.ambient, config.name)
        coordinates = self.ambient.coordinates

        spec = config.immersion
        reference = None
        if 'reference' in spec:
            reference = VectorField(spec['reference'], coordinates, name='reference')
        self.immersion = NullImmersion(self.ambient, spec['parameters'], spec['components'], spec['domain'],
                                       spec['grid'], reference=reference, level_set=spec.get('level_set'),
                                       stencil_margin=spec.get('stencil_margin', 1e-3), tolerances=self.tolerances,
                                       name=config.name)
        self.fields = {name: VectorField(field['components'], coordinates, name=name)
                       for name, field in config.fields.items()}
        self._frames: Dict[str, NullFrameField] = dict()

    @property
    def screen_names(self) -> List[str]:
        return list(self.config.screens)

    def field(self, name: str) -> VectorField:
        if name not in self.fields:
            raise ConfigError(f'unknown field {name!r}', {'fields': [name]})
        return self.fields[name]

    def gauge(self, source: str) -> ExpressionField:
        """ Parse a gauge over the parameters, or else over the ambient coordinates. """

        try:
            return ExpressionField(source, self.immersion.parameters)
        except UnknownIdentifierError:
            return ExpressionField(source, self.ambient.coordinates)

    def frame(self, name: str) -> NullFrameField:
        """ The frame field built from a named screen recipe, cached.

        :param name: the screen name.
        :return: the frame field.
        """

        if name in self._frames:
            return self._frames[name]
        if name not in self.config.screens:
            raise ConfigError(f'unknown screen {name!r}', {'screens': [name]})

        recipe = self.config.screens[name]
        method = recipe['method']
        required = {'rigging': 'rigging', 'cc': 'field', 'explicit': 'vectors'}[method]
        if required not in recipe:
            raise ConfigError(f'screen {name!r} uses method {method!r} but has no {required!r}',
                              {'screens': [{name: [f'missing {required}']}]})
        if method == 'rigging':
            zeta = VectorField(recipe['rigging'], self.ambient.coordinates, name=name)
            frame = RiggingFrameField(self.immersion, zeta, name=name)
        elif method == 'cc':
            frame = CCFrameField(self.immersion, self.field(recipe['field']), name=name)
        else:
            frame = ExplicitFrameField(self.immersion, recipe['vectors'], name=name)
        if 'gauge' in recipe:
            frame = GaugedFrameField(frame, self.gauge(recipe['gauge']), name=name)
        logging.info(f'Model {self.name}: built {method} frame {name!r}')
        self._frames[name] = frame
        return frame
