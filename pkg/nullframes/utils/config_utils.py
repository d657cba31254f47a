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
import logging
import pathlib
import re
from typing import Dict, List, Union

import cerberus.validator
from cerberus import Validator

import nullframes.schema
from nullframes.errors import ExpressionSyntaxError, UnknownIdentifierError
from nullframes.geometry.expression import ExpressionField
from nullframes.utils.tolerances import Tolerances

METRIC_KEY = re.compile(r'^g(\d)(\d)$')
IDENTIFIER = r'^[A-Za-z_][A-Za-z_0-9]*$'
CHECK_NAMES = ['validate_frame', 'compare_frames', 'shape', 'components', 'codazzi', 'nonmetric', 'zperp',
               'integrability', 'gauge_covariance', 'sqc_grw', 'constant_angle', 'gauge_invariance',
               'quasi_conformal_fit', 'qc_screen', 'zero_projection', 'cpd', 'cpd_star', 'principal', 'lemma_cpd',
               'flat_screen', 'cmc', 'eqgrads', 'umbilic', 'totally_umbilical', 'spaceform', 'transnormal']
EXPECTATIONS = ['pass', 'fail', 'inapplicable']


def schema_path(name: str) -> str:
    """ Get the absolute path to a file shipped in the schema folder.

    :param name: the file name.
    :return: the path.
    """

    file_path = pathlib.Path(nullframes.schema.__file__).resolve()
    return str(pathlib.Path(*file_path.parts[:-1], name).resolve())


def ambient_coordinates(document: Dict) -> List[str]:
    ambient = document.get('ambient') or dict()
    if 'grw' in ambient:
        grw = ambient['grw'] or dict()
        return [grw.get('time', 't')] + list((grw.get('fiber') or dict()).get('coordinates', []))
    return list(ambient.get('coordinates', []))


def variables_for(document: Dict, scope: str) -> List[str]:
    """ The variable names an expression may use in a given part of a configuration document.

    :param document: the root document.
    :param scope: 'ambient', 'fiber', 'time', 'parameters' or 'any'.
    :return: the names.
    """

    ambient = document.get('ambient') or dict()
    grw = ambient.get('grw') or dict()
    parameters = list((document.get('immersion') or dict()).get('parameters', []))
    if scope == 'fiber':
        return list((grw.get('fiber') or dict()).get('coordinates', []))
    if scope == 'time':
        return [grw.get('time', 't')]
    if scope == 'parameters':
        return parameters
    if scope == 'any':
        return parameters + ambient_coordinates(document)
    return ambient_coordinates(document)


class RunConfigValidator(Validator):

    def _validate_expression(self, expression, field, value):
        """ Validate that the value parses as an expression over the variables of a scope.

        The rule's arguments are validated against this schema: {'type': 'string'}
        """

        if not isinstance(value, str):
            return
        try:
            ExpressionField(value, variables_for(self.root_document, expression))
        except (ExpressionSyntaxError, UnknownIdentifierError) as e:
            self._error(field, f'{e}')

    def _validate_metric_key(self, metric_key, field, value):
        """ Validate that every key names a metric component gIJ with I <= J inside the dimension.

        The rule's arguments are validated against this schema: {'type': 'string'}
        """

        if not isinstance(value, dict):
            return
        dim = len(variables_for(self.root_document, metric_key))
        for key in value:
            match = METRIC_KEY.match(str(key))
            if match is None:
                self._error(field, f'{key!r} is not a metric component key of the form gIJ')
                continue
            i, j = int(match.group(1)), int(match.group(2))
            if i > j or j >= dim:
                self._error(field, f'{key!r} is not an upper triangular component of a {dim} dimensional metric')

    def _validate_same_length(self, same_length, field, value):
        """ Validate that a list has one entry per variable of a scope.

        The rule's arguments are validated against this schema: {'type': 'string'}
        """

        if isinstance(value, list) and len(value) != len(variables_for(self.root_document, same_length)):
            self._error(field, f'expected {len(variables_for(self.root_document, same_length))} entries, '
                               f'got {len(value)}')

    def _validate_one_ambient(self, one_ambient, field, value):
        """ Validate that the ambient section is either an explicit chart or a GRW spacetime.

        The rule's arguments are validated against this schema: {'type': 'boolean'}
        """

        if one_ambient and isinstance(value, dict) and ('grw' in value) == ('coordinates' in value or
                                                                            'metric' in value):
            self._error(field, 'give either coordinates and metric, or grw')

    def _validate_refers_to(self, refers_to, field, value):
        """ Validate that the value names an entry of a top level section.

        The rule's arguments are validated against this schema: {'type': 'string'}
        """

        if value is not None and value not in (self.root_document.get(refers_to) or dict()):
            self._error(field, f'unknown {refers_to[:-1]} {value!r}')


def expression_list(scope: str) -> Dict:
    return {'type': 'list', 'schema': {'type': 'string', 'expression': scope}}


class RunConfig:
    """ Everything needed to run checks on one framed null hypersurface. """

    schema = {
        'name': {
            'required': True,
            'type': 'string'
        },
        'variant': {
            'required': False,
            'type': 'string'
        },
        'ambient': {
            'required': True,
            'type': 'dict',
            'one_ambient': True,
            'schema': {
                'coordinates': {'type': 'list', 'schema': {'type': 'string', 'regex': IDENTIFIER}},
                'metric': {'type': 'dict', 'metric_key': 'ambient',
                           'valuesrules': {'type': 'string', 'expression': 'ambient'}},
                'grw': {
                    'type': 'dict',
                    'schema': {
                        'time': {'required': True, 'type': 'string', 'regex': IDENTIFIER},
                        'warp': {'required': True, 'type': 'string', 'expression': 'time'},
                        'interval': {'required': True, 'type': 'list', 'minlength': 2, 'maxlength': 2,
                                     'schema': {'type': 'number'}},
                        'fiber': {
                            'required': True,
                            'type': 'dict',
                            'schema': {
                                'coordinates': {'required': True, 'type': 'list',
                                                'schema': {'type': 'string', 'regex': IDENTIFIER}},
                                'metric': {'required': True, 'type': 'dict', 'metric_key': 'fiber',
                                           'valuesrules': {'type': 'string', 'expression': 'fiber'}}
                            }
                        }
                    }
                },
                'check_points': {'type': 'list', 'schema': {'type': 'list', 'same_length': 'ambient',
                                                            'schema': {'type': 'number'}}}
            }
        },
        'immersion': {
            'required': True,
            'type': 'dict',
            'schema': {
                'parameters': {'required': True, 'type': 'list', 'schema': {'type': 'string', 'regex': IDENTIFIER}},
                'components': dict(expression_list('parameters'), required=True, same_length='ambient'),
                'domain': {'required': True, 'type': 'list', 'same_length': 'parameters',
                           'schema': {'type': 'list', 'minlength': 2, 'maxlength': 2, 'schema': {'type': 'number'}}},
                'grid': {'required': True, 'type': 'list', 'same_length': 'parameters',
                         'schema': {'type': 'integer', 'min': 1}},
                'reference': dict(expression_list('ambient'), same_length='ambient'),
                'level_set': {'type': 'string', 'expression': 'ambient'},
                'stencil_margin': {'type': 'number', 'min': 0}
            }
        },
        'fields': {
            'type': 'dict',
            'keysrules': {'type': 'string', 'regex': IDENTIFIER},
            'valuesrules': {
                'type': 'dict',
                'schema': {
                    'components': dict(expression_list('ambient'), required=True, same_length='ambient'),
                    'kind': {'type': 'string', 'allowed': ['parallel', 'closed_conformal', 'generic']}
                }
            }
        },
        'screens': {
            'type': 'dict',
            'keysrules': {'type': 'string', 'regex': IDENTIFIER},
            'valuesrules': {
                'type': 'dict',
                'schema': {
                    'method': {'required': True, 'type': 'string', 'allowed': ['rigging', 'cc', 'explicit']},
                    'rigging': dict(expression_list('ambient'), same_length='ambient'),
                    'field': {'type': 'string', 'refers_to': 'fields'},
                    'vectors': {'type': 'list', 'schema': dict(expression_list('parameters'),
                                                               same_length='ambient')},
                    'gauge': {'type': 'string', 'expression': 'any'}
                }
            }
        },
        'tolerances': {
            'type': 'dict',
            'schema': {key: {'type': 'number', 'min': 0} for key in Tolerances.DEFAULTS}
        },
        'seed': {
            'type': 'integer'
        },
        'checks': {
            'type': 'list',
            'schema': {
                'type': 'dict',
                'schema': {
                    'name': {'required': True, 'type': 'string', 'allowed': CHECK_NAMES},
                    'screen': {'type': 'string', 'refers_to': 'screens'},
                    'field': {'type': 'string', 'refers_to': 'fields'},
                    'expect': {'type': 'string', 'allowed': EXPECTATIONS},
                    'tolerance': {'type': 'number', 'min': 0},
                    'options': {'type': 'dict'}
                }
            }
        },
        'notes': {
            'type': 'dict'
        }
    }

    def __init__(self, name: Union[str, None] = None, ambient: Union[Dict, None] = None,
                 immersion: Union[Dict, None] = None, fields: Union[Dict, None] = None,
                 screens: Union[Dict, None] = None, tolerances: Tolerances = None, seed: int = 0,
                 checks: Union[List[Dict], None] = None, notes: Union[Dict, None] = None,
                 variant: Union[str, None] = None, validator: RunConfigValidator = None):
        """ Holds the settings of a run.

        :param name: the name of the hypersurface or catalog entry.
        :param ambient: an explicit chart (coordinates, metric, check_points) or a grw section.
        :param immersion: parameters, components, domain, grid and optional reference, level_set and stencil_margin.
        :param fields: named ambient vector fields.
        :param screens: named frame recipes.
        :param tolerances: the numerical thresholds.
        :param seed: the random seed used by randomized checks.
        :param checks: the requested checks with optional expectations.
        :param notes: free form notes, e.g. printed variants of formulas.
        :param variant: the catalog variant, when the config comes from the catalog.
        :param validator: the validator holding errors for an invalid document.
        """

        self.name = name
        self.variant = variant
        self.ambient = ambient
        self.immersion = immersion
        self.fields = fields if fields is not None else dict()
        self.screens = screens if screens is not None else dict()
        self.tolerances = tolerances if tolerances is not None else Tolerances()
        self.seed = seed
        self.checks = checks if checks is not None else []
        self.notes = notes if notes is not None else dict()
        self.validator: RunConfigValidator = validator

    def __eq__(self, other):
        d1 = dict(self.__dict__)
        del d1['validator']
        d2 = dict(other.__dict__)
        del d2['validator']
        return isinstance(other, RunConfig) and d1 == d2

    def __ne__(self, other):
        return not self == other

    @property
    def is_valid(self):
        return self.validator is None or not len(self.validator._errors)

    @property
    def errors(self) -> Dict:
        return dict() if self.validator is None else self.validator.errors

    def save(self, path: str) -> None:
        """ Save the RunConfig object to a JSON file.

        :param path: the path to the configuration file.
        :return: None.
        """

        with open(path, 'w') as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)

    @staticmethod
    def load(path: str, strict: bool = True) -> Union['RunConfig', None]:
        """ Load a JSON run configuration file.

        :param path: the path to the configuration file.
        :param strict: reject unknown keys.
        :return: the RunConfig instance, or None when the file cannot be read or parsed.
        """

        config = None
        try:
            with open(path, 'r') as f:
                dict_ = json.load(f)
                config = RunConfig.from_dict(dict_, strict=strict)
        except json.JSONDecodeError as e:
            logging.error(f'Error parsing {path}: {e}')
        except FileNotFoundError:
            logging.error(f'No such file or directory: {path}')
        except cerberus.validator.DocumentError as e:
            logging.error(f'cerberus.validator.DocumentError: {e}')
        return config

    def to_dict(self) -> Dict:
        """ Converts a RunConfig instance into a dictionary.

        :return: the dictionary.
        """

        dict_ = {
            'name': self.name,
            'ambient': self.ambient,
            'immersion': self.immersion,
            'fields': self.fields,
            'screens': self.screens,
            'tolerances': self.tolerances.to_dict(),
            'seed': self.seed,
            'checks': self.checks,
            'notes': self.notes
        }
        if self.variant is not None:
            dict_['variant'] = self.variant
        return dict_

    @staticmethod
    def make_default() -> 'RunConfig':
        """ Make a RunConfig for the null hyperplane t = x in Minkowski 3-space with a planar screen.

        :return: the RunConfig instance.
        """

        return RunConfig.from_dict({
            'name': 'default',
            'ambient': {'coordinates': ['t', 'x', 'y'], 'metric': {'g00': '-1', 'g11': '1', 'g22': '1'}},
            'immersion': {'parameters': ['u', 'v'], 'components': ['u', 'u', 'v'],
                          'domain': [[-1, 1], [-1, 1]], 'grid': [4, 4], 'reference': ['-1', '0', '0']},
            'fields': {'e0': {'components': ['1', '0', '0'], 'kind': 'parallel'}},
            'screens': {'rigging_e0': {'method': 'rigging', 'rigging': ['1', '0', '0']}},
            'checks': [{'name': 'validate_frame', 'screen': 'rigging_e0'}]
        })

    @staticmethod
    def from_dict(dict_: Dict, strict: bool = True) -> 'RunConfig':
        """ Make a RunConfig instance from a dictionary. If the dictionary is invalid, then a RunConfig instance will
        be returned with no properties set, except for the validator, which contains validation errors.

        :param dict_: the input dictionary that has been read via json.load.
        :param strict: reject unknown keys.
        :return: the RunConfig instance.
        """

        validator = RunConfigValidator(allow_unknown=not strict)
        is_valid = validator.validate(dict_, RunConfig.schema)

        if is_valid:
            return RunConfig(name=dict_.get('name'),
                             ambient=dict_.get('ambient'),
                             immersion=dict_.get('immersion'),
                             fields=dict_.get('fields'),
                             screens=dict_.get('screens'),
                             tolerances=Tolerances.from_dict(dict_.get('tolerances', dict())),
                             seed=dict_.get('seed', 0),
                             checks=dict_.get('checks'),
                             notes=dict_.get('notes'),
                             variant=dict_.get('variant'),
                             validator=validator)
        else:
            return RunConfig(validator=validator)


def export_schema(path: Union[str, None] = None) -> str:
    """ Write the cerberus schema of RunConfig as JSON.

    :param path: the output path, the shipped schema file by default.
    :return: the path.
    """

    path = path if path is not None else schema_path('run_config.json')
    with open(path, 'w') as f:
        json.dump(RunConfig.schema, f, indent=2, sort_keys=True)
    logging.info(f'export_schema: schema written to {path}')
    return path