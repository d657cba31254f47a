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
import logging
from typing import Callable, Dict, List, Union

from nullframes.catalog.ambients import grw, minkowski
from nullframes.errors import CatalogError, ConfigError
from nullframes.utils.config_utils import RunConfig


def check(name: str, screen: Union[str, None] = None, field: Union[str, None] = None, expect: str = 'pass',
          tolerance: Union[float, None] = None, **options) -> Dict:
    """ A check request with its expected verdict, in config format. """

    dict_ = {'name': name, 'expect': expect}
    if screen is not None:
        dict_['screen'] = screen
    if field is not None:
        dict_['field'] = field
    if tolerance is not None:
        dict_['tolerance'] = tolerance
    if options:
        dict_['options'] = options
    return dict_


class CatalogEntry:
    """ A ready made framed null hypersurface with the verdicts its checks are expected to reach. """

    def __init__(self, name: str, variant: str, description: str, config: Dict):
        """ Create a CatalogEntry.

        :param name: the entry name.
        :param variant: the variant name.
        :param description: one line describing the entry.
        :param config: the entry in RunConfig dictionary form, checks carrying an expect key.
        """

        self.name = name
        self.variant = variant
        self.description = description
        self.config = config

    def __repr__(self):
        return f'CatalogEntry({self.name!r}, {self.variant!r})'

    @property
    def ambient(self) -> Dict:
        return self.config['ambient']

    @property
    def immersion(self) -> Dict:
        return self.config['immersion']

    @property
    def screens(self) -> Dict:
        return self.config['screens']

    @property
    def fields(self) -> Dict:
        return self.config['fields']

    @property
    def expectations(self) -> List[Dict]:
        return self.config['checks']

    def to_dict(self) -> Dict:
        dict_ = copy.deepcopy(self.config)
        dict_['name'] = self.name
        dict_['variant'] = self.variant
        return dict_

    def to_config(self) -> RunConfig:
        """ The entry as a validated RunConfig.

        :return: the RunConfig.
        """

        config = RunConfig.from_dict(self.to_dict())
        if not config.is_valid:
            raise ConfigError(f'catalog entry {self.name}/{self.variant} is invalid', config.errors)
        return config


def minkowski_null_hyperplane(variant: str) -> Dict:
    e0 = {'e0': {'components': ['1', '0', '0'] + (['0'] if variant == '4d' else []), 'kind': 'parallel'}}
    if variant == '3d':
        return {
            'ambient': minkowski(3),
            'immersion': {'parameters': ['u', 'v'], 'components': ['u', 'u', 'v'], 'domain': [[-1, 1], [-1, 1]],
                          'grid': [16, 16], 'reference': ['-1', '0', '0'], 'level_set': 't - x'},
            'fields': e0,
            'screens': {
                'rigging_e0': {'method': 'rigging', 'rigging': ['1', '0', '0']},
                'tilted': {'method': 'explicit', 'vectors': [['sin(u) + v', 'sin(u) + v', '1']]},
                'cc_e0': {'method': 'cc', 'field': 'e0'}
            },
            'checks': [
                check('validate_frame', 'rigging_e0'),
                check('validate_frame', 'tilted'),
                check('validate_frame', 'cc_e0'),
                check('compare_frames', 'rigging_e0', other='cc_e0'),
                check('shape', 'rigging_e0'),
                check('shape', 'tilted'),
                check('components', 'rigging_e0', 'e0'),
                check('codazzi', 'rigging_e0', tolerance=1e-9),
                check('nonmetric', 'rigging_e0'),
                check('umbilic', 'rigging_e0', label='totally_geodesic'),
                check('constant_angle', 'rigging_e0', 'e0'),
                check('constant_angle', 'tilted', 'e0', expect='fail'),
                check('gauge_invariance', 'tilted', 'e0'),
                check('qc_screen', field='e0'),
                check('zero_projection', 'rigging_e0', 'e0'),
                check('spaceform', c=0.0, tolerance=1e-9)
            ],
            'notes': {'planar': 'with a one dimensional screen a constant angle with e0 forces the planar screen'}
        }
    return {
        'ambient': minkowski(4),
        'immersion': {'parameters': ['u', 'v', 'w'], 'components': ['u', 'u', 'v', 'w'],
                      'domain': [[-1, 1], [-1, 1], [-1, 1]], 'grid': [6, 6, 6], 'reference': ['-1', '0', '0', '0'],
                      'level_set': 't - x'},
        'fields': e0,
        'screens': {
            'rigging_e0': {'method': 'rigging', 'rigging': ['1', '0', '0', '0']},
            'non_planar': {'method': 'explicit',
                           'vectors': [['0.5*cos(v + w^2)', '0.5*cos(v + w^2)', '1', '0'],
                                       ['0.5*sin(v + w^2)', '0.5*sin(v + w^2)', '0', '1']]},
            'planar_tilt': {'method': 'explicit',
                            'vectors': [['0.5*cos(0.3)', '0.5*cos(0.3)', '1', '0'],
                                        ['0.5*sin(0.3)', '0.5*sin(0.3)', '0', '1']]}
        },
        'checks': [
            check('validate_frame', 'rigging_e0'),
            check('validate_frame', 'non_planar'),
            check('validate_frame', 'planar_tilt'),
            check('shape', 'non_planar'),
            check('components', 'rigging_e0', 'e0'),
            check('codazzi', 'rigging_e0', tolerance=1e-9),
            check('constant_angle', 'non_planar', 'e0'),
            check('constant_angle', 'planar_tilt', 'e0'),
            check('gauge_invariance', 'non_planar', 'e0'),
            check('integrability', 'non_planar', expect='fail'),
            check('integrability', 'planar_tilt'),
            check('cpd', 'non_planar', 'e0', expect='inapplicable'),
            check('cpd', 'planar_tilt', 'e0'),
            check('qc_screen', field='e0')
        ],
        'notes': {'non_planar': 'q = -(1 + rho^2) / 2 is constant for any rotation angle alpha; the screen is '
                                'integrable iff cos(alpha) d_v alpha + sin(alpha) d_w alpha = 0'}
    }


def light_cone_2d(variant: str) -> Dict:
    r = 'sqrt(a1^2 + a2^2)'
    radius = 'sqrt(x^2 + y^2)'
    return {
        'ambient': minkowski(3),
        'immersion': {'parameters': ['a1', 'a2'], 'components': [r, 'a1', 'a2'],
                      'domain': [[0.5, 3.0], [-1.5, 1.5]], 'grid': [16, 16], 'level_set': '-t^2 + x^2 + y^2'},
        'fields': {
            'e0': {'components': ['1', '0', '0'], 'kind': 'parallel'},
            'radial': {'components': ['t', 'x', 'y'], 'kind': 'closed_conformal'},
            'null_parallel': {'components': ['1', '-1', '0'], 'kind': 'parallel'}
        },
        'screens': {
            'rigging_e0': {'method': 'rigging', 'rigging': ['1', '0', '0']},
            'n0_m1': {'method': 'explicit', 'vectors': [['1', f'(a1 - a2)/{r}', f'(a1 + a2)/{r}']]},
            'n0_m2': {'method': 'explicit',
                      'vectors': [['1', f'(a1*sqrt(3) - a2)/(sqrt(3)*{r})', f'(a1 + a2*sqrt(3))/(sqrt(3)*{r})']]},
            'n0_half': {'method': 'rigging', 'rigging': ['1/2', f'-x/(2*{radius})', f'-y/(2*{radius})']},
            'cc_e0': {'method': 'cc', 'field': 'e0'},
            'rigging_null': {'method': 'rigging', 'rigging': ['1', '-1', '0']}
        },
        'checks': [
            check('validate_frame', 'rigging_e0'),
            check('validate_frame', 'n0_m1'),
            check('validate_frame', 'n0_m2'),
            check('validate_frame', 'n0_half'),
            check('validate_frame', 'cc_e0'),
            check('validate_frame', 'rigging_null'),
            check('compare_frames', 'rigging_e0', other='n0_half'),
            check('compare_frames', 'rigging_e0', other='cc_e0'),
            check('shape', 'rigging_e0'),
            check('components', 'rigging_e0', 'e0'),
            check('components', 'rigging_e0', 'radial'),
            check('codazzi', 'rigging_e0', tolerance=1e-4),
            check('nonmetric', 'rigging_e0'),
            check('umbilic', 'rigging_e0', label='totally_umbilical'),
            check('constant_angle', 'rigging_e0', 'e0'),
            check('constant_angle', 'n0_m1', 'e0'),
            check('constant_angle', 'n0_m2', 'e0'),
            check('gauge_invariance', 'n0_m1', 'e0'),
            check('gauge_invariance', 'n0_m2', 'e0'),
            check('qc_screen', field='e0'),
            check('totally_umbilical', 'rigging_e0', 'radial'),
            check('totally_umbilical', 'rigging_null', 'null_parallel')
        ],
        'notes': {
            'printed_variant': {
                'xi': ['-1', f'a1/{r}', f'a2/{r}'],
                'N': ['N0', f'(a1*(1 - N0) + a2*sqrt(-1 + 2*N0))/{r}', f'(a2*(1 - N0) - a1*sqrt(-1 + 2*N0))/{r}'],
                'N_half': ['1/2', f'a1/(2*{r})', f'a2/(2*{r})'],
                'remark': 'the printed xi is null but not tangent to the cone; the printed N at N0 = 1/2 is tangent. '
                          'The shipped frames use xi = -Phi/r and the rigging (1/2, -x/(2r), -y/(2r)), which '
                          'reproduces the rigging e0 frame. The explicit screens use the N0 < -1/2 branch with '
                          'N0 = -1 and N0 = -2.'
            }
        }
    }


GRW_VARIANTS = {
    'minkowski': {'warp': '1', 'components': ['sqrt(u1^2 + u2^2)', 'u1', 'u2', 'u3'],
                  'domain': [[0.5, 1.5], [0.5, 1.5], [-0.5, 0.5]], 'check_points': [[0.0, 1.0, 1.0, 0.0]],
                  'psi': '0', 'c': 0.0},
    'de_sitter': {'warp': 'cosh(t)', 'components': ['u1', 'u1', 'u2', 'u3'],
                  'domain': [[0.3, 1.0], [0.0, 1.0], [0.0, 1.0]], 'check_points': [[0.5, 0.5, 0.5, 0.5]],
                  'psi': 'sqrt(2)*tanh(t)', 'c': 1.0},
    'anti_de_sitter': {'warp': 'cos(t)', 'components': ['u1', 'u1', 'u2', 'u3'],
                       'domain': [[0.3, 1.0], [0.0, 1.0], [0.0, 1.0]], 'check_points': [[0.5, 0.6, 0.5, 0.5]],
                       'psi': '-sqrt(2)*tan(t)', 'c': -1.0}
}


def grw_transnormal_graph(variant: str) -> Dict:
    spec = GRW_VARIANTS[variant]
    zeta = ['-sqrt(2)', '0', '0', '0']
    checks = [
        check('validate_frame', 'rigging_sqrt2'),
        check('validate_frame', 'cc_rho_dt'),
        check('compare_frames', 'rigging_sqrt2', other='cc_rho_dt'),
        check('transnormal'),
        check('spaceform', c=spec['c'], tolerance=1e-6),
        check('shape', 'rigging_sqrt2'),
        check('quasi_conformal_fit', 'rigging_sqrt2', expected_phi='1', expected_psi=spec['psi']),
        check('sqc_grw', 'rigging_sqrt2'),
        check('components', 'rigging_sqrt2', 'rho_dt'),
        check('zero_projection', 'rigging_sqrt2', 'rho_dt'),
        check('qc_screen', field='rho_dt'),
        check('eqgrads', 'rigging_sqrt2', 'rho_dt'),
        check('constant_angle', 'rigging_sqrt2', 'rho_dt'),
        check('cpd', 'rigging_sqrt2', 'rho_dt', expect='inapplicable'),
        check('gauge_covariance', 'rigging_sqrt2', gauge='2 + sin(u1)')
    ]
    if variant == 'de_sitter':
        checks.append(check('codazzi', 'rigging_sqrt2', tolerance=1e-4))
    screens = {
        'rigging_sqrt2': {'method': 'rigging', 'rigging': zeta},
        'cc_rho_dt': {'method': 'cc', 'field': 'rho_dt'}
    }
    notes = {'pair': 'the rigging -sqrt(2) d/dt gives the quasi-conformal pair (1, sqrt(2) rho\'/rho)'}
    if spec['warp'] != '1':
        # Leaves u1 - u3 / 2 = const: the screen part of rho d/dt no longer vanishes but the angle stays constant
        screens['sheared'] = {'method': 'explicit', 'vectors': [['0', '0', '1', '0'], ['0.5', '0.5', '0', '1']]}
        checks.extend([
            check('validate_frame', 'sheared'),
            check('integrability', 'sheared'),
            check('components', 'sheared', 'rho_dt'),
            check('zperp', 'sheared', 'rho_dt'),
            check('constant_angle', 'sheared', 'rho_dt'),
            check('gauge_invariance', 'sheared', 'rho_dt'),
            check('cpd', 'sheared', 'rho_dt'),
            check('principal', 'sheared', 'rho_dt'),
            check('lemma_cpd', 'sheared', 'rho_dt')
        ])
        notes['sheared'] = ('q = -5/8 and eps = -1, so Z* is principal with value -(5/4) rho\' '
                             '(-(5/4) sinh t on de Sitter, (5/4) sin t on anti de Sitter)')
    return {
        'ambient': grw(spec['warp'], spec['check_points']),
        'immersion': {'parameters': ['u1', 'u2', 'u3'], 'components': spec['components'], 'domain': spec['domain'],
                      'grid': [8, 3, 3], 'reference': zeta},
        'fields': {'rho_dt': {'components': [spec['warp'], '0', '0', '0'], 'kind': 'closed_conformal'}},
        'screens': screens,
        'checks': checks,
        'notes': notes
    }


def minkowski_radial_constant_angle(variant: str) -> Dict:
    a = '(-v + 0.5*sqrt(2*u - 1 + v^2))'
    return {
        'ambient': minkowski(3),
        'immersion': {'parameters': ['u', 'v'], 'components': ['u', 'u', 'v'], 'domain': [[1.0, 2.0], [-1.0, 1.0]],
                      'grid': [16, 16], 'reference': ['-1', '0', '0'], 'level_set': 't - x'},
        'fields': {'radial': {'components': ['t - 1', 'x', 'y'], 'kind': 'closed_conformal'}},
        'screens': {'explicit': {'method': 'explicit', 'vectors': [[a, a, '1']]}},
        'checks': [
            check('validate_frame', 'explicit'),
            check('shape', 'explicit'),
            check('components', 'explicit', 'radial'),
            check('zperp', 'explicit', 'radial'),
            check('constant_angle', 'explicit', 'radial'),
            check('gauge_invariance', 'explicit', 'radial'),
            check('cpd', 'explicit', 'radial'),
            check('principal', 'explicit', 'radial'),
            check('lemma_cpd', 'explicit', 'radial'),
            check('eqgrads', 'explicit', 'radial')
        ],
        'notes': {'angle': 'q = 3/8, eps = 1 and phi = 1, so the principal value of Z* is -3/4 '
                           '(+3/4 with the opposite sign convention)'}
    }


def minkowski_rotating_screen(variant: str) -> Dict:
    lift = '4*s + v*cos(s) + w*sin(s)'
    return {
        'ambient': minkowski(4),
        'immersion': {'parameters': ['s', 'v', 'w'], 'components': [lift, lift, 'v', 'w'],
                      'domain': [[0.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]], 'grid': [5, 5, 5],
                      'reference': ['-1', '0', '0', '0'], 'level_set': 't - x'},
        'fields': {'e0': {'components': ['1', '0', '0', '0'], 'kind': 'parallel'}},
        'screens': {'rotating': {'method': 'explicit',
                                 'vectors': [['cos(s)', 'cos(s)', '1', '0'], ['sin(s)', 'sin(s)', '0', '1']]}},
        'checks': [
            check('validate_frame', 'rotating'),
            check('shape', 'rotating'),
            check('integrability', 'rotating'),
            check('constant_angle', 'rotating', 'e0'),
            check('cpd', 'rotating', 'e0'),
            check('flat_screen', 'rotating', 'e0'),
            check('umbilic', 'rotating', label='totally_geodesic')
        ],
        'notes': {'screen': 'xi = (1, 1, 0, 0) and N = (-1, 0, -cos s, -sin s); both shape operators vanish'}
    }


def catenoid_null_cylinder(variant: str) -> Dict:
    return {
        'ambient': minkowski(4),
        'immersion': {'parameters': ['s', 'a', 'b'],
                      'components': ['s', 'cosh(a)*cos(b) + s*cos(b)/cosh(a)', 'cosh(a)*sin(b) + s*sin(b)/cosh(a)',
                                     'a - s*tanh(a)'],
                      'domain': [[0.0, 0.0], [0.2, 1.0], [0.0, 1.0]], 'grid': [1, 8, 8]},
        'fields': {'e_z': {'components': ['0', '0', '0', '1'], 'kind': 'parallel'}},
        'screens': {'rigging_e0': {'method': 'rigging', 'rigging': ['1', '0', '0', '0']}},
        'checks': [
            check('validate_frame', 'rigging_e0'),
            check('spaceform', c=0.0, tolerance=1e-9),
            check('cpd_star', 'rigging_e0', 'e_z'),
            check('cmc', 'rigging_e0', 'e_z')
        ],
        'notes': {'leaf': 'sampled on the leaf s = 0, where the screen is the tangent plane of a catenoid with '
                          'vanishing mean curvature'}
    }


CATALOG: Dict[str, Dict] = {
    'minkowski_null_hyperplane': {
        'builder': minkowski_null_hyperplane, 'variants': ['3d', '4d'],
        'description': 'null hyperplane t = x with planar, tilted and non planar screens'},
    'light_cone_2d': {
        'builder': light_cone_2d, 'variants': ['graph'],
        'description': 'graph parametrization of the light cone in Minkowski 3-space'},
    'grw_transnormal_graph': {
        'builder': grw_transnormal_graph, 'variants': ['de_sitter', 'minkowski', 'anti_de_sitter'],
        'description': 'graph of a transnormal function in a GRW spacetime'},
    'minkowski_radial_constant_angle': {
        'builder': minkowski_radial_constant_angle, 'variants': ['default'],
        'description': 'constant angle with a radial closed conformal field and non vanishing screen part'},
    'minkowski_rotating_screen': {
        'builder': minkowski_rotating_screen, 'variants': ['default'],
        'description': 'totally geodesic hypersurface of Minkowski 4-space with a rotating flat screen'},
    'catenoid_null_cylinder': {
        'builder': catenoid_null_cylinder, 'variants': ['default'],
        'description': 'null cylinder over a catenoid in Minkowski 4-space'}
}


def entries() -> List[str]:
    return list(CATALOG)


def variants(name: str) -> List[str]:
    if name not in CATALOG:
        raise CatalogError(f'unknown catalog entry {name!r}')
    return list(CATALOG[name]['variants'])


def entry(name: str, variant: Union[str, None] = None) -> CatalogEntry:
    """ Build a catalog entry.

    :param name: the entry name.
    :param variant: the variant, the first listed one by default.
    :return: the CatalogEntry.
    """

    options = variants(name)
    variant = options[0] if variant is None else variant
    if variant not in options:
        raise CatalogError(f'unknown variant {variant!r} of {name!r}, choose one of {options}')
    builder: Callable[[str], Dict] = CATALOG[name]['builder']
    config = builder(variant)
    config.setdefault('seed', 0)
    logging.info(f'catalog: built {name}/{variant}')
    return CatalogEntry(name, variant, CATALOG[name]['description'], config)


def dump(item: CatalogEntry) -> Dict:
    """ The entry as a RunConfig dictionary, ready to save and reload.

    :param item: the entry.
    :return: the dictionary form of its RunConfig.
    """

    return item.to_config().to_dict()
